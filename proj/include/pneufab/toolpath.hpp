#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "pneufab/geometry.hpp"
#include "pneufab/machine.hpp"
#include "pneufab/materials.hpp"
#include "pneufab/patterns.hpp"

namespace pneufab {

struct Point3 {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  friend bool operator==(const Point3&, const Point3&) = default;
};

enum class Tool { Weld, Cut };
std::string_view to_string(Tool t);

struct ToolAction {
  enum class Kind { Rapid, Move, ToolSelect, ChannelOn, ChannelOff, Dwell, KnifeAngle };

  Kind kind = Kind::Rapid;
  Point3 to{};         // Rapid, Move
  double feed = 0.0;   // Move, mm/min
  Tool tool = Tool::Weld;
  Output channel = Output::WelderPower;
  double ms = 0.0;     // Dwell
  double deg = 0.0;    // KnifeAngle

  static ToolAction rapid(Point3 p) { return {Kind::Rapid, p}; }
  static ToolAction move(Point3 p, double f) { return {Kind::Move, p, f}; }
  static ToolAction select(Tool t) {
    ToolAction a{Kind::ToolSelect};
    a.tool = t;
    return a;
  }
  static ToolAction on(Output c) {
    ToolAction a{Kind::ChannelOn};
    a.channel = c;
    return a;
  }
  static ToolAction off(Output c) {
    ToolAction a{Kind::ChannelOff};
    a.channel = c;
    return a;
  }
  static ToolAction dwell(double ms) {
    ToolAction a{Kind::Dwell};
    a.ms = ms;
    return a;
  }
  static ToolAction knife(double deg) {
    ToolAction a{Kind::KnifeAngle};
    a.deg = deg;
    return a;
  }
};

/// Contiguous action range that traverses one sheet path.
struct PathSpan {
  enum class Kind { Weld, Cut, Outline };
  Kind kind = Kind::Weld;
  std::size_t source = 0;  // index into welds/cuts; 0 for the outline
  std::size_t first = 0;   // first action index
  std::size_t last = 0;    // one past the final action
  double length = 0.0;     // planned XY length
};

struct WeldMode {
  bool pulsed = false;
  double duty = 0.5;         // fraction on, pulsed only
  double period_ms = 500.0;  // pulsed only

  static WeldMode continuous() { return {}; }
  static WeldMode pulse(double duty, double period_ms) { return {true, duty, period_ms}; }
};

struct Toolpath {
  std::vector<ToolAction> actions;
  std::vector<PathSpan> spans;
  double weld_feed = 0.0;
  WeldMode mode;
};

/// Travel-ordered visit of a set of paths.
struct PathOrder {
  std::vector<std::size_t> order;
  std::vector<bool> reversed;  // per position in `order`; closed paths never reverse
  double travel = 0.0;
};

/// Travel from `start` through the paths in the given sequence.
double order_travel(const std::vector<geom::Polyline>& paths, geom::Point start,
                    const std::vector<std::size_t>& order, const std::vector<bool>& reversed);
/// Nearest neighbour over path endpoints; ties go to the lowest index.
PathOrder nearest_neighbor(const std::vector<geom::Polyline>& paths, geom::Point start);
/// Nearest neighbour, then 2-opt segment reversal and Or-opt relocation of
/// runs of up to three paths, to a local optimum.
PathOrder order_paths(const std::vector<geom::Polyline>& paths, geom::Point start);

struct WeldEvent {
  double at = 0.0;  // arc length from path start, mm
  bool on = true;
};

/// Welder switching along one path. Pulsed periods and on-times are
/// rounded to whole multiples of the minimum switch interval.
/// Throws E_PULSE_TOO_SHORT when the period is below twice that interval.
std::vector<WeldEvent> weld_schedule(const geom::Polyline& path, double feed, const WeldMode& mode,
                                     const MachineProfile& m);

struct KnifeStep {
  double at = 0.0;  // arc length where the segment starts
  double deg = 0.0; // unwrapped blade heading
  bool lift = false;
};

/// One step per segment; `lift` is set where the turn into that segment
/// exceeds the corner threshold.
std::vector<KnifeStep> knife_orientation(const geom::Polyline& path, double corner_lift_deg = 15.0);

/// Weld phase then cut phase, outline last. Throws E_BED_EXCEEDED or
/// E_NOT_VALIDATED when the sheet does not pass validation.
Toolpath plan(const PatternSheet& s, const MachineProfile& m, const MaterialTable& mats,
              const WeldMode& mode = WeldMode::continuous());

/// Coordinates snapped to the 1 um output grid.
double snap(double v);

/// Rapid and move travel (XY only) of a toolpath, by kind.
struct PathTotals {
  double weld = 0.0;
  double cut = 0.0;
  double rapid = 0.0;
};
PathTotals totals(const Toolpath& tp);

}  // namespace pneufab
