#include "pneufab/estimate.hpp"

#include <algorithm>
#include <sstream>

#include "pneufab/error.hpp"
#include "pneufab/format.hpp"

namespace pneufab {

const std::vector<ReferenceResult>& reference_table() {
  static const std::vector<ReferenceResult> table{
      {Family::LinearPneunet, "tpu_nylon_medium", 0.0, 50.0, 0.34, "linear actuator, mid-weight TPU-coated nylon"},
      {Family::LinearPneunet, "velostat", 0.0, 50.0, 0.32, "linear actuator, conductive fabric"},
      {Family::Kirigami, "tpu_nylon_medium", 100.0, 50.0, -0.17, "kirigami sheet, w = 100 mm, h = 150 mm"},
      {Family::Kirigami, "tpu_nylon_medium", 125.0, 50.0, -0.40, "kirigami sheet, w = 125 mm, h = 150 mm"},
      {Family::Kirigami, "tpu_nylon_medium", 150.0, 50.0, -0.42, "kirigami sheet, w = 150 mm, h = 150 mm"},
  };
  return table;
}

double contraction_for_fraction(double pouch_fraction) {
  return kPouchContraction * std::clamp(pouch_fraction, 0.0, 1.0);
}

double pouch_zone_fraction(const ActuatorDesign& d, const GeneratorSettings& st) {
  const auto* p = std::get_if<PneunetParams>(&d.params);
  if (!p || (d.family != Family::LinearPneunet && d.family != Family::BendingPneunet)) {
    throw Error(ErrorCode::UnsupportedFamily,
                "no contraction model for " + std::string(to_string(d.family)) + "; reference data only");
  }
  const int n = pouch_count(p->length, p->pouch_pitch);
  const double welded = 2.0 * st.seal_inset + n * st.weld_width;
  return std::clamp((p->length - welded) / p->length, 0.0, 1.0);
}

double estimate_linear_contraction(const ActuatorDesign& d, const GeneratorSettings& st) {
  return contraction_for_fraction(pouch_zone_fraction(d, st));
}

std::string estimate_report(const ActuatorDesign& d, const GeneratorSettings& st) {
  std::ostringstream os;
  os << "design: " << d.name << " (" << to_string(d.family) << ")\n";
  if (d.family == Family::LinearPneunet || d.family == Family::BendingPneunet) {
    const double f = pouch_zone_fraction(d, st);
    os << "pouch zone fraction: " << fixed(f, 4) << '\n';
    os << "ideal contraction: " << fixed(estimate_linear_contraction(d, st), 4)
       << " (limit " << fixed(kPouchContraction, 4) << ")\n";
  } else {
    os << "ideal contraction: no model for this family\n";
  }
  os << "reference measurements:\n";
  for (const ReferenceResult& r : reference_table()) {
    if (r.family != d.family) continue;
    os << "  " << to_string(r.family) << ' ' << r.variant;
    if (r.width > 0) os << " w=" << trimmed(r.width, 3);
    os << ": strain " << fixed(r.strain, 2) << " at " << trimmed(r.pressure_kpa, 3) << " kPa (" << r.note << ")\n";
  }
  return os.str();
}

}  // namespace pneufab
