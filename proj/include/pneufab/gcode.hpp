#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "pneufab/machine.hpp"
#include "pneufab/toolpath.hpp"

namespace pneufab {

struct GWord {
  char letter = 'G';
  double value = 0.0;
};

struct GLine {
  int number = 0;  // 1-based source line
  std::vector<GWord> words;
  std::string comment;

  const GWord* find(char letter) const;
};

struct GProgram {
  std::vector<GLine> lines;  // blank lines are not kept
  std::string source;
};

/// Deterministic program text for a toolpath. `title` goes into the
/// leading comment.
std::string emit_text(const Toolpath& tp, const MachineProfile& m, std::string_view title = "");
GProgram emit(const Toolpath& tp, const MachineProfile& m, std::string_view title = "");

/// Accepts G0 G1 G4 G21 G90, the switching M-codes, M30 and the words
/// X Y Z A F P. Throws E_GCODE_SYNTAX or E_UNSUPPORTED_WORD with a line.
GProgram parse_gcode(std::string_view text);

struct SimSegment {
  int line = 0;
  bool rapid = false;
  Tool tool = Tool::Weld;
  Point3 from{};
  Point3 to{};
  double a = 0.0;  // blade angle after the move
  double feed = 0.0;
  double seconds = 0.0;
  bool welder_on = false;
};

struct ChannelEvent {
  double t = 0.0;  // s
  int mcode = 0;
  int output = -1;
  bool on = false;
  int line = 0;
  std::string name;  // logical channel, empty when unmapped
};

struct WelderInterval {
  double t0 = 0.0;
  double t1 = 0.0;
  double length = 0.0;
};

struct Excursion {
  int line = 0;
  char axis = 'X';
  double value = 0.0;
  double beyond = 0.0;  // distance outside the travel range
};

struct SimReport {
  std::vector<SimSegment> segments;
  std::vector<ChannelEvent> events;
  std::vector<WelderInterval> welder;
  std::vector<Excursion> excursions;
  double job_time = 0.0;     // s
  double dwell_time = 0.0;   // s
  double motion_time = 0.0;  // s
  double weld_length = 0.0;  // path length with welder power on
  double cut_length = 0.0;   // XY feed-move length with the cut tool
  double rapid_length = 0.0;
  double max_excursion = 0.0;

  /// Gaps between consecutive switch events of one logical channel, s.
  std::vector<double> switch_intervals(std::string_view channel) const;
  std::string summary() const;
};

/// Throws E_NO_FEED for a G1 before any F word.
SimReport simulate(const GProgram& g, const MachineProfile& m);

struct Deviation {
  std::size_t vertex = 0;
  int line = 0;
  Point3 planned{};
  Point3 simulated{};
  double distance = 0.0;
};

struct RoundTripReport {
  std::size_t vertices = 0;
  double max_deviation = 0.0;
  std::vector<Deviation> deviations;  // vertices beyond the tolerance
  bool vertex_count_matches = true;
  bool channel_order_matches = true;
  double planned_weld_length = 0.0;
  double simulated_weld_length = 0.0;

  bool ok() const { return vertex_count_matches && channel_order_matches && deviations.empty(); }
};

/// Emits, parses and simulates `tp`, then compares motion vertices and
/// channel event order with the plan.
RoundTripReport roundtrip_check(const Toolpath& tp, const MachineProfile& m, double tolerance = 1e-6);
/// Same comparison against a given program text.
RoundTripReport compare_program(const Toolpath& tp, const MachineProfile& m, std::string_view text,
                                double tolerance = 1e-6);

}  // namespace pneufab
