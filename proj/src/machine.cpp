#include "pneufab/machine.hpp"

#include <array>
#include <cmath>

#include "pneufab/document.hpp"
#include "pneufab/error.hpp"
#include "pneufab/values.hpp"

namespace pneufab {

std::string_view to_string(Output o) {
  switch (o) {
    case Output::WelderPower: return "welder_power";
    case Output::WelderStage: return "welder_stage";
    case Output::Knife: return "knife_oscillation";
  }
  return "?";
}

const OutputChannel& MachineProfile::channel(Output o) const {
  switch (o) {
    case Output::WelderPower: return welder_power;
    case Output::WelderStage: return welder_stage;
    case Output::Knife: return knife;
  }
  return knife;
}

bool is_switch_code(int m) {
  switch (m) {
    case 3: case 5: case 7: case 8: case 9: case 62: case 63: case 64: case 65: return true;
    default: return false;
  }
}

namespace {

void bad(const std::string& msg) { throw Error(ErrorCode::BadValue, msg); }

}  // namespace

void check_profile(const MachineProfile& m) {
  if (!(m.travel.x > 0 && m.travel.y > 0 && m.travel.z > 0)) bad("travel must be > 0 on every axis");
  if (!(m.rapid_rate > 0)) bad("rapid rate must be > 0");
  if (!(m.cut_feed > 0 && m.plunge_feed > 0)) bad("feeds must be > 0");
  if (m.weld_feed && !(*m.weld_feed > 0)) bad("weld feed override must be > 0");
  if (!(m.welder_min_switch_ms >= 250.0)) bad("welder_min_switch_ms must be >= 250");
  if (!(m.corner_lift_deg >= 0.0 && m.corner_lift_deg < 180.0)) bad("corner_lift_deg must be in [0, 180)");
  const double z_max = m.z_min + m.travel.z;
  for (double z : {m.safe_z, m.weld_z, m.cut_depth, m.lift_z}) {
    if (z < m.z_min || z > z_max) bad("tool heights must lie inside the Z travel");
  }
  if (!(m.safe_z > m.lift_z && m.lift_z > m.cut_depth && m.safe_z > m.weld_z)) {
    bad("need safe_z > lift_z > cut_depth and safe_z > weld_z");
  }
  const std::array<const OutputChannel*, 3> chans{&m.welder_power, &m.welder_stage, &m.knife};
  for (const OutputChannel* c : chans) {
    if (!is_switch_code(c->on_code) || !is_switch_code(c->off_code) || c->on_code == c->off_code) {
      bad("channel M-codes must be a distinct on/off pair from M3 M5 M7 M8 M9 M62-M65");
    }
  }
  for (std::size_t i = 0; i < chans.size(); ++i) {
    for (std::size_t j = i + 1; j < chans.size(); ++j) {
      const OutputChannel& a = *chans[i];
      const OutputChannel& b = *chans[j];
      const bool shares = (a.on_code == b.on_code || a.on_code == b.off_code ||
                           a.off_code == b.on_code || a.off_code == b.off_code);
      if (shares && a.output == b.output) bad("output channels must be distinct");
    }
  }
}

namespace {

OutputChannel read_channel(const Entry& e) {
  if (e.items.size() != 2 && e.items.size() != 3) {
    throw Error(ErrorCode::BadValue, "'" + e.key + "' takes: on_mcode, off_mcode[, output]", e.line,
                e.column);
  }
  OutputChannel c;
  auto whole = [&](const Value& v) {
    const double d = to_number(v, e.line);
    if (d < 0 || d > 999 || std::floor(d) != d) {
      throw Error(ErrorCode::BadValue, "channel numbers must be small non-negative integers", e.line,
                  v.column);
    }
    return static_cast<int>(d);
  };
  c.on_code = whole(e.items[0]);
  c.off_code = whole(e.items[1]);
  c.output = e.items.size() == 3 ? whole(e.items[2]) : -1;
  return c;
}

}  // namespace

MachineProfile load_machine(std::string_view text) {
  const DesignDocument doc = parse_document(text);
  MachineProfile m;
  for (const Section& s : doc.sections) {
    KeyReader r(s);
    if (s.name == "machine") {
      if (const Entry* e = r.take("travel_mm")) {
        const auto v = number_list(*e, 3);
        m.travel = {v[0], v[1], v[2]};
      }
      if (const Entry* e = r.take("z_min_mm")) m.z_min = single_number(*e);
      if (const Entry* e = r.take("rapid_mm_min")) m.rapid_rate = positive_number(*e);
      if (const Entry* e = r.take("safe_z_mm")) m.safe_z = single_number(*e);
      if (const Entry* e = r.take("weld_z_mm")) m.weld_z = single_number(*e);
      if (const Entry* e = r.take("cut_depth_mm")) m.cut_depth = single_number(*e);
      if (const Entry* e = r.take("lift_z_mm")) m.lift_z = single_number(*e);
      if (const Entry* e = r.take("tool_offset_mm")) {
        const auto v = number_list(*e, 2);
        m.tool_offset = {v[0], v[1]};
      }
      if (const Entry* e = r.take("welder_min_switch_ms")) m.welder_min_switch_ms = single_number(*e);
      if (const Entry* e = r.take("corner_lift_deg")) m.corner_lift_deg = single_number(*e);
    } else if (s.name == "channels") {
      if (const Entry* e = r.take("welder_power")) m.welder_power = read_channel(*e);
      if (const Entry* e = r.take("welder_stage")) m.welder_stage = read_channel(*e);
      if (const Entry* e = r.take("knife_oscillation")) m.knife = read_channel(*e);
    } else if (s.name == "feeds") {
      if (const Entry* e = r.take("cut_mm_min")) m.cut_feed = positive_number(*e);
      if (const Entry* e = r.take("plunge_mm_min")) m.plunge_feed = positive_number(*e);
      if (const Entry* e = r.take("weld_mm_min")) m.weld_feed = positive_number(*e);
    } else {
      throw Error(ErrorCode::UnknownKey, "unknown section [" + s.name + "]", s.line);
    }
    r.finish();
  }
  try {
    check_profile(m);
  } catch (const Error& e) {
    throw Error(e.code(), "machine profile: " + e.message());
  }
  return m;
}

}  // namespace pneufab
