#pragma once

#include <optional>
#include <string>
#include <string_view>

#include "pneufab/geometry.hpp"

namespace pneufab {

struct Travel {
  double x = 720.0;
  double y = 420.0;
  double z = 110.0;
};

/// M-code pair driving one output. `output` < 0 means no P word.
struct OutputChannel {
  int on_code = 64;
  int off_code = 65;
  int output = -1;

  friend bool operator==(const OutputChannel&, const OutputChannel&) = default;
};

enum class Output { WelderPower, WelderStage, Knife };
std::string_view to_string(Output o);

struct MachineProfile {
  Travel travel;
  double z_min = -5.0;  // Z travel spans [z_min, z_min + travel.z]
  double rapid_rate = 3000.0;  // mm/min
  double safe_z = 10.0;
  double weld_z = 0.0;
  double cut_depth = -1.0;
  double lift_z = 2.0;  // knife height while rotating at a sharp corner
  /// Vector from the knife reference to the welder tip.
  geom::Point tool_offset{};
  double welder_min_switch_ms = 250.0;
  double corner_lift_deg = 15.0;

  OutputChannel welder_power{64, 65, 1};
  OutputChannel welder_stage{64, 65, 2};
  OutputChannel knife{3, 5, -1};

  double cut_feed = 600.0;
  double plunge_feed = 200.0;
  std::optional<double> weld_feed;  // overrides the material rule

  const OutputChannel& channel(Output o) const;
};

/// M-codes the G-code dialect accepts for output switching.
bool is_switch_code(int m);

/// Throws E_BAD_VALUE when an invariant does not hold.
void check_profile(const MachineProfile& m);

/// Reads [machine], [channels] and [feeds] over the defaults.
MachineProfile load_machine(std::string_view text);

}  // namespace pneufab
