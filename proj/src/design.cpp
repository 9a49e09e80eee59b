#include "pneufab/design.hpp"

#include <algorithm>
#include <charconv>
#include <map>
#include <set>
#include <sstream>

#include "pneufab/error.hpp"
#include "pneufab/format.hpp"
#include "pneufab/values.hpp"

namespace pneufab {

std::string_view to_string(Family f) {
  switch (f) {
    case Family::RectPouch: return "rect_pouch";
    case Family::LinearPneunet: return "linear_pneunet";
    case Family::BendingPneunet: return "bending_pneunet";
    case Family::AntagonisticPneunet: return "antagonistic_pneunet";
    case Family::TwistingPneunet: return "twisting_pneunet";
    case Family::Kirigami: return "kirigami";
  }
  return "?";
}

bool parse_family(std::string_view s, Family& out) {
  for (Family f : {Family::RectPouch, Family::LinearPneunet, Family::BendingPneunet,
                   Family::AntagonisticPneunet, Family::TwistingPneunet, Family::Kirigami}) {
    if (to_string(f) == s) {
      out = f;
      return true;
    }
  }
  return false;
}

std::string_view to_string(Edge e) {
  switch (e) {
    case Edge::South: return "south";
    case Edge::East: return "east";
    case Edge::North: return "north";
    case Edge::West: return "west";
  }
  return "?";
}

bool parse_edge(std::string_view s, Edge& out) {
  for (Edge e : {Edge::South, Edge::East, Edge::North, Edge::West}) {
    if (to_string(e) == s) {
      out = e;
      return true;
    }
  }
  return false;
}

namespace {

double length_mm(KeyReader& r, std::string_view key) { return positive_number(r.require(key)); }

void optional_length(KeyReader& r, std::string_view key, double& out) {
  if (const Entry* e = r.take(key)) out = positive_number(*e);
}

InletSpec parse_inlet(const Entry& e) {
  if (e.items.size() != 3) {
    throw Error(ErrorCode::BadValue, "'" + e.key + "' takes: chamber, edge, offset_mm", e.line,
                e.column);
  }
  InletSpec spec;
  const Value& chamber = e.items[0];
  const double c = to_number(chamber, e.line);
  if (chamber.text.find('.') != std::string::npos || c < 0 || c > 100000) {
    throw Error(ErrorCode::BadValue, "inlet chamber must be a non-negative integer", e.line,
                chamber.column);
  }
  spec.chamber = static_cast<int>(c);
  const Value& edge = e.items[1];
  if (edge.kind != Value::Kind::Ident || !parse_edge(edge.text, spec.edge)) {
    throw Error(ErrorCode::BadValue, "inlet edge must be south|east|north|west", e.line,
                edge.column);
  }
  spec.offset = to_number(e.items[2], e.line);
  if (!(spec.offset > 0.0)) {
    throw Error(ErrorCode::BadValue, "inlet offset must be > 0", e.line, e.items[2].column);
  }
  return spec;
}

std::size_t layer_count(Family f) { return f == Family::AntagonisticPneunet ? 3 : 2; }

LayerStack read_layers(const Section& s, Family family, const MaterialTable& materials,
                       double& inlet_width) {
  KeyReader r(s);
  LayerStack stack;
  const Entry& bottom = r.require("bottom");
  const Entry* middle = r.take("middle");
  const Entry& top = r.require("top");
  std::vector<const Entry*> named{&bottom};
  if (middle) named.push_back(middle);
  named.push_back(&top);
  if (named.size() != layer_count(family)) {
    throw Error(ErrorCode::BadValue,
                std::string(to_string(family)) + " needs " + std::to_string(layer_count(family)) +
                    " layers, got " + std::to_string(named.size()),
                s.line);
  }
  for (const Entry* e : named) {
    const std::string& name = single_ident(*e);
    if (!materials.find(name)) {
      throw Error(ErrorCode::UnknownMaterial, "unknown material '" + name + "'", e->line,
                  e->items.front().column);
    }
    stack.layers.push_back(name);
  }

  if (const Entry* e = r.take("inlet_width_mm")) inlet_width = positive_number(*e);

  std::vector<std::pair<long, const Entry*>> numbered;
  for (const Entry* e : r.take_prefixed("inlet_")) {
    const std::string_view suffix = std::string_view(e->key).substr(6);
    long n = 0;
    auto res = std::from_chars(suffix.data(), suffix.data() + suffix.size(), n);
    if (suffix.empty() || res.ec != std::errc() || res.ptr != suffix.data() + suffix.size() ||
        n < 1) {
      throw Error(ErrorCode::UnknownKey, "unknown key '" + e->key + "' in [layers]", e->line,
                  e->column);
    }
    numbered.emplace_back(n, e);
  }
  std::sort(numbered.begin(), numbered.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  for (const auto& [_, e] : numbered) stack.inlets.push_back(parse_inlet(*e));
  r.finish();

  if (family == Family::AntagonisticPneunet) {
    if (stack.inlets.size() != 2) {
      throw Error(ErrorCode::BadValue, "antagonistic_pneunet needs exactly 2 inlets (inlet_1, inlet_2)",
                  s.line);
    }
    if (stack.inlets[0].chamber == stack.inlets[1].chamber) {
      throw Error(ErrorCode::BadValue, "antagonistic inlets must feed distinct chambers", s.line);
    }
  }
  return stack;
}

FamilyParams read_params(const Section& s, Family family) {
  KeyReader r(s);
  FamilyParams out;
  switch (family) {
    case Family::RectPouch: {
      RectPouchParams p;
      p.width = length_mm(r, "width_mm");
      p.height = length_mm(r, "height_mm");
      out = p;
      break;
    }
    case Family::LinearPneunet:
    case Family::BendingPneunet:
    case Family::AntagonisticPneunet: {
      PneunetParams p;
      p.width = length_mm(r, "width_mm");
      p.length = length_mm(r, "length_mm");
      optional_length(r, "pouch_pitch_mm", p.pouch_pitch);
      optional_length(r, "channel_gap_mm", p.channel_gap);
      out = p;
      break;
    }
    case Family::TwistingPneunet: {
      TwistingParams p;
      p.width = length_mm(r, "width_mm");
      p.length = length_mm(r, "length_mm");
      optional_length(r, "pouch_pitch_mm", p.pouch_pitch);
      optional_length(r, "channel_gap_mm", p.channel_gap);
      const Entry& e = r.require("incline_deg");
      p.incline_deg = single_number(e);
      if (!(p.incline_deg >= 0.0 && p.incline_deg < 90.0)) {
        throw Error(ErrorCode::BadValue, "incline_deg must satisfy 0 <= angle < 90", e.line,
                    e.column);
      }
      out = p;
      break;
    }
    case Family::Kirigami: {
      KirigamiParams p;
      p.width = length_mm(r, "width_mm");
      p.height = length_mm(r, "height_mm");
      optional_length(r, "cut_length_mm", p.cut_length);
      optional_length(r, "ligament_mm", p.ligament);
      optional_length(r, "row_pitch_mm", p.row_pitch);
      optional_length(r, "margin_mm", p.margin);
      optional_length(r, "channel_width_mm", p.channel_width);
      out = p;
      break;
    }
  }
  r.finish();
  return out;
}

}  // namespace

ActuatorDesign to_typed(const DesignDocument& doc, const MaterialTable& materials) {
  for (const Section& s : doc.sections) {
    if (s.name != "design" && s.name != "layers" && s.name != "params") {
      throw Error(ErrorCode::UnknownKey, "unknown section [" + s.name + "]", s.line);
    }
  }
  const Section* design = doc.find("design");
  const Section* layers = doc.find("layers");
  const Section* params = doc.find("params");
  if (!design) throw Error(ErrorCode::MissingKey, "missing section [design]");
  if (!layers) throw Error(ErrorCode::MissingKey, "missing section [layers]");
  if (!params) throw Error(ErrorCode::MissingKey, "missing section [params]");

  ActuatorDesign d;
  KeyReader r(*design);
  d.name = single_text(r.require("name"));
  if (d.name.empty()) throw Error(ErrorCode::BadValue, "design name is empty", design->line);
  const Entry& type = r.require("type");
  if (!parse_family(single_ident(type), d.family)) {
    throw Error(ErrorCode::BadValue, "unknown design type '" + type.raw + "'", type.line,
                type.items.front().column);
  }
  if (const Entry* e = r.take("origin_mm")) {
    const auto xy = number_list(*e, 2);
    if (xy[0] < 0.0 || xy[1] < 0.0) {
      throw Error(ErrorCode::BadValue, "origin_mm must be non-negative", e->line, e->column);
    }
    d.origin = {xy[0], xy[1]};
  }
  r.finish();

  d.layers = read_layers(*layers, d.family, materials, d.inlet_width);
  d.params = read_params(*params, d.family);
  return d;
}

namespace {

std::string quote_if_needed(const std::string& s) {
  if (is_ident(s)) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out.push_back('\\');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

using Keyed = std::map<std::string, std::string>;

void write_section(std::ostringstream& os, std::string_view name, const Keyed& keys) {
  os << '[' << name << "]\n";
  for (const auto& [k, v] : keys) os << k << " = " << v << '\n';
}

}  // namespace

std::string serialize_design(const ActuatorDesign& d) {
  const auto num = [](double v) { return minimal_decimal(v); };

  Keyed design{{"name", quote_if_needed(d.name)},
               {"type", std::string(to_string(d.family))},
               {"origin_mm", num(d.origin.x) + ", " + num(d.origin.y)}};

  Keyed layers;
  const auto& names = d.layers.layers;
  if (!names.empty()) layers["bottom"] = names.front();
  if (names.size() >= 2) layers["top"] = names.back();
  if (names.size() == 3) layers["middle"] = names[1];
  layers["inlet_width_mm"] = num(d.inlet_width);
  for (std::size_t i = 0; i < d.layers.inlets.size(); ++i) {
    const InletSpec& in = d.layers.inlets[i];
    layers["inlet_" + std::to_string(i + 1)] = std::to_string(in.chamber) + ", " +
                                               std::string(to_string(in.edge)) + ", " +
                                               num(in.offset);
  }

  Keyed params;
  std::visit(
      [&](const auto& p) {
        using T = std::decay_t<decltype(p)>;
        params["width_mm"] = num(p.width);
        if constexpr (std::is_same_v<T, RectPouchParams>) {
          params["height_mm"] = num(p.height);
        } else if constexpr (std::is_same_v<T, PneunetParams> ||
                             std::is_same_v<T, TwistingParams>) {
          params["length_mm"] = num(p.length);
          params["pouch_pitch_mm"] = num(p.pouch_pitch);
          params["channel_gap_mm"] = num(p.channel_gap);
          if constexpr (std::is_same_v<T, TwistingParams>) params["incline_deg"] = num(p.incline_deg);
        } else {
          params["height_mm"] = num(p.height);
          params["cut_length_mm"] = num(p.cut_length);
          params["ligament_mm"] = num(p.ligament);
          params["row_pitch_mm"] = num(p.row_pitch);
          params["margin_mm"] = num(p.margin);
          params["channel_width_mm"] = num(p.channel_width);
        }
      },
      d.params);

  std::ostringstream os;
  write_section(os, "design", design);
  os << '\n';
  write_section(os, "layers", layers);
  os << '\n';
  write_section(os, "params", params);
  return os.str();
}

}  // namespace pneufab
