#pragma once

#include <string>
#include <vector>

#include "pneufab/design.hpp"
#include "pneufab/patterns.hpp"

namespace pneufab {

/// A published measurement. `width` is the sheet width in mm where the
/// measurement depends on it, otherwise 0.
struct ReferenceResult {
  Family family = Family::LinearPneunet;
  std::string variant;
  double width = 0.0;
  double pressure_kpa = 0.0;
  double strain = 0.0;  // signed; negative for the kirigami sheets
  std::string note;
};

const std::vector<ReferenceResult>& reference_table();

/// Ideal pouch motor: a flat strip of length l inflating into a circular
/// arc of the same length spans a chord of (2/pi) l.
inline constexpr double kPouchContraction = 1.0 - 2.0 / 3.14159265358979323846;

/// (1 - 2/pi) * fraction, fraction clamped to [0, 1].
double contraction_for_fraction(double pouch_fraction);

/// Share of the actuator length free to inflate: total length less the
/// end seals (outline to seam centre plus half a weld each) and the
/// n - 1 interior weld lines.
double pouch_zone_fraction(const ActuatorDesign& d, const GeneratorSettings& settings = {});

/// Linear and bending pneunets only; E_UNSUPPORTED_FAMILY otherwise.
double estimate_linear_contraction(const ActuatorDesign& d, const GeneratorSettings& settings = {});

/// Model value (when the family has one) and the matching reference rows.
std::string estimate_report(const ActuatorDesign& d, const GeneratorSettings& settings = {});

}  // namespace pneufab
