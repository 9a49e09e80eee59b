#include "pneufab/materials.hpp"

#include <algorithm>
#include <set>

#include "pneufab/document.hpp"
#include "pneufab/error.hpp"
#include "pneufab/values.hpp"

namespace pneufab {

std::string_view to_string(WeightClass c) {
  switch (c) {
    case WeightClass::Light: return "light";
    case WeightClass::Medium: return "medium";
    case WeightClass::Heavy: return "heavy";
    case WeightClass::Film: return "film";
    case WeightClass::Conductive: return "conductive";
  }
  return "?";
}

std::string_view to_string(Coating c) {
  switch (c) {
    case Coating::TPU: return "TPU";
    case Coating::PU: return "PU";
    case Coating::None: return "none";
  }
  return "?";
}

double class_feed(WeightClass c) {
  switch (c) {
    case WeightClass::Light: return 200.0;
    case WeightClass::Medium: return 160.0;
    case WeightClass::Heavy: return 100.0;
    case WeightClass::Film: return 120.0;
    case WeightClass::Conductive: return 250.0;
  }
  return 0.0;
}

void MaterialTable::put(Material m) {
  if (!is_ident(m.name)) throw Error(ErrorCode::BadValue, "material name '" + m.name + "' is not an identifier");
  if (!(m.weld_feed > 0.0)) throw Error(ErrorCode::BadValue, "material '" + m.name + "': weld feed must be > 0");
  if (!(m.areal_weight >= 0.0)) throw Error(ErrorCode::BadValue, "material '" + m.name + "': areal weight must be >= 0");
  if (m.ptfe_layers != 1 && m.ptfe_layers != 2)
    throw Error(ErrorCode::BadValue, "material '" + m.name + "': ptfe_layers must be 1 or 2");
  std::string key = m.name;
  entries_.insert_or_assign(std::move(key), std::move(m));
}

const Material* MaterialTable::find(std::string_view name) const {
  auto it = entries_.find(name);
  return it == entries_.end() ? nullptr : &it->second;
}

const Material& MaterialTable::at(std::string_view name) const {
  if (const Material* m = find(name)) return *m;
  throw Error(ErrorCode::UnknownMaterial, "unknown material '" + std::string(name) + "'");
}

std::vector<const Material*> MaterialTable::list() const {
  std::vector<const Material*> out;
  out.reserve(entries_.size());
  for (const auto& [_, m] : entries_) out.push_back(&m);
  return out;
}

MaterialTable builtin_table() {
  using W = WeightClass;
  MaterialTable t;
  t.put({"tpu_nylon_light", "TPU-coated nylon, lightweight", 170, W::Light, Coating::TPU, 200, 1});
  t.put({"tpu_nylon_medium", "TPU-coated nylon, medium-weight", 275, W::Medium, Coating::TPU, 160, 1});
  t.put({"tpu_nylon_heavy", "TPU-coated nylon, heavy-weight", 450, W::Heavy, Coating::TPU, 100, 1});
  t.put({"velostat", "Velostat conductive fabric", 0, W::Conductive, Coating::None, 250, 1});
  t.put({"pet_film", "Polyester (PET) plastic film", 0, W::Film, Coating::None, 120, 2});
  // 20D ripstop: areal weight unpublished, welds like the light nylons.
  t.put({"tpu_ripstop_20d", "TPU-coated ripstop 20D, both sides", 0, W::Light, Coating::TPU,
         class_feed(W::Light), 1});
  // PU coatings melt like TPU, so they inherit speeds by weight class.
  t.put({"pu_polyester", "PU-coated polyester", 240, W::Medium, Coating::PU, class_feed(W::Medium), 1});
  t.put({"pu_nylon", "PU-coated nylon", 130, W::Light, Coating::PU, class_feed(W::Light), 1});
  return t;
}

double feed_rate_for(const MaterialTable& table, std::span<const std::string> layers) {
  if (layers.empty()) throw Error(ErrorCode::BadValue, "empty layer stack");
  double feed = table.at(layers.front()).weld_feed;
  for (const auto& name : layers) feed = std::min(feed, table.at(name).weld_feed);
  return feed;
}

bool mixed_feed_stack(const MaterialTable& table, std::span<const std::string> layers) {
  std::set<double> feeds;
  for (const auto& name : layers) feeds.insert(table.at(name).weld_feed);
  return feeds.size() > 1;
}

namespace {

WeightClass parse_class(const Entry& e) {
  const std::string& v = single_ident(e);
  if (v == "light") return WeightClass::Light;
  if (v == "medium") return WeightClass::Medium;
  if (v == "heavy") return WeightClass::Heavy;
  if (v == "film") return WeightClass::Film;
  if (v == "conductive") return WeightClass::Conductive;
  throw Error(ErrorCode::BadValue, "weight_class must be light|medium|heavy|film|conductive", e.line);
}

Coating parse_coating(const Entry& e) {
  const std::string& v = single_ident(e);
  if (v == "TPU" || v == "tpu") return Coating::TPU;
  if (v == "PU" || v == "pu") return Coating::PU;
  if (v == "none") return Coating::None;
  throw Error(ErrorCode::BadValue, "coating must be TPU|PU|none", e.line);
}

}  // namespace

MaterialTable load_materials(std::string_view text, MaterialTable base) {
  const DesignDocument doc = parse_document(text);
  for (const Section& s : doc.sections) {
    KeyReader r(s);
    Material m;
    m.name = s.name;
    if (const Entry* e = r.take("description")) m.description = single_text(*e);
    if (const Entry* e = r.take("areal_weight_gsm")) m.areal_weight = single_number(*e);
    m.weight_class = WeightClass::Light;
    if (const Entry* e = r.take("weight_class")) {
      m.weight_class = parse_class(*e);
    } else {
      throw Error(ErrorCode::MissingKey, "material [" + s.name + "] needs weight_class", s.line);
    }
    if (const Entry* e = r.take("coating")) m.coating = parse_coating(*e);
    m.weld_feed = class_feed(m.weight_class);
    if (const Entry* e = r.take("weld_feed_mm_min")) m.weld_feed = positive_number(*e);
    if (const Entry* e = r.take("ptfe_layers")) m.ptfe_layers = static_cast<int>(integer(*e));
    r.finish();
    try {
      base.put(std::move(m));
    } catch (const Error& err) {
      throw Error(err.code(), err.message(), s.line);
    }
  }
  return base;
}

}  // namespace pneufab
