#pragma once

#include <string>

#include "pneufab/machine.hpp"
#include "pneufab/patterns.hpp"
#include "pneufab/toolpath.hpp"

namespace pneufab {

struct Stroke {
  std::string color;
  double width = 0.5;
  std::string dash;  // empty: solid
};

struct RenderStyle {
  Stroke weld{"#c0392b", 1.0, ""};
  Stroke interior_cut{"#1f4e9c", 0.4, ""};
  Stroke outline{"#000000", 0.4, ""};
  Stroke chamber{"#7fb3d5", 0.2, ""};
  std::string chamber_fill = "#d6eaf8";
  Stroke channel{"#2e86c1", 0.4, "1 1"};
  Stroke inlet{"#27ae60", 1.2, ""};
  Stroke rapid{"#999999", 0.3, "2 2"};
  Stroke bed{"#bbbbbb", 0.5, ""};
  double padding = 10.0;  // mm around the drawing
};

/// Pattern preview in sheet coordinates (1 mm = 1 user unit, Y up via a
/// single flip on the root group). With a machine, the bed is drawn
/// relative to the sheet origin.
std::string render_svg(const PatternSheet& s, const RenderStyle& style = {}, const MachineProfile* m = nullptr);

/// Toolpath preview in machine coordinates.
std::string render_svg(const Toolpath& tp, const RenderStyle& style = {}, const MachineProfile* m = nullptr);

}  // namespace pneufab
