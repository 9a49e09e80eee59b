#pragma once

#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "pneufab/document.hpp"
#include "pneufab/geometry.hpp"
#include "pneufab/materials.hpp"

namespace pneufab {

enum class Family {
  RectPouch,
  LinearPneunet,
  BendingPneunet,
  AntagonisticPneunet,
  TwistingPneunet,
  Kirigami,
};

std::string_view to_string(Family f);
bool parse_family(std::string_view s, Family& out);

/// Sheet edge an inlet opens on. Offsets run along +x (south/north) or
/// +y (west/east) from the sheet's lower-left corner.
enum class Edge { South, East, North, West };

std::string_view to_string(Edge e);
bool parse_edge(std::string_view s, Edge& out);

struct InletSpec {
  int chamber = 0;
  Edge edge = Edge::South;
  double offset = 0.0;  // mm, centre of the gap

  friend bool operator==(const InletSpec&, const InletSpec&) = default;
};

/// Fabric layers bottom to top. Empty `inlets` means "family default".
struct LayerStack {
  std::vector<std::string> layers;
  std::vector<InletSpec> inlets;

  friend bool operator==(const LayerStack&, const LayerStack&) = default;
};

struct RectPouchParams {
  double width = 0.0;
  double height = 0.0;

  friend bool operator==(const RectPouchParams&, const RectPouchParams&) = default;
};

/// Linear, bending and antagonistic pneunets. Length runs along y.
struct PneunetParams {
  double width = 0.0;
  double length = 0.0;
  double pouch_pitch = 20.0;
  double channel_gap = 6.0;

  friend bool operator==(const PneunetParams&, const PneunetParams&) = default;
};

struct TwistingParams {
  double width = 0.0;
  double length = 0.0;
  double pouch_pitch = 20.0;
  double channel_gap = 6.0;
  double incline_deg = 0.0;  // weld-line angle to the transverse axis

  friend bool operator==(const TwistingParams&, const TwistingParams&) = default;
};

struct KirigamiParams {
  double width = 0.0;   // w
  double height = 0.0;  // h
  double cut_length = 20.0;
  double ligament = 5.0;
  double row_pitch = 20.0;
  double margin = 10.0;
  double channel_width = 10.0;

  friend bool operator==(const KirigamiParams&, const KirigamiParams&) = default;
};

using FamilyParams = std::variant<RectPouchParams, PneunetParams, TwistingParams, KirigamiParams>;

inline constexpr double kDefaultInletWidth = 8.0;
inline constexpr geom::Point kDefaultOrigin{20.0, 20.0};

struct ActuatorDesign {
  std::string name;
  Family family = Family::RectPouch;
  LayerStack layers;
  FamilyParams params;
  double inlet_width = kDefaultInletWidth;
  /// Where the sheet's lower-left corner sits on the bed.
  geom::Point origin = kDefaultOrigin;

  friend bool operator==(const ActuatorDesign&, const ActuatorDesign&) = default;
};

/// Checks keys, units and values; resolves materials; applies defaults.
/// Throws E_UNKNOWN_KEY, E_MISSING_KEY, E_BAD_VALUE or E_UNKNOWN_MATERIAL.
ActuatorDesign to_typed(const DesignDocument& doc, const MaterialTable& materials);

/// Canonical text: fixed section order, sorted keys, shortest numbers.
std::string serialize_design(const ActuatorDesign& d);

inline double feed_rate_for(const MaterialTable& table, const LayerStack& stack) {
  return feed_rate_for(table, std::span<const std::string>(stack.layers));
}

}  // namespace pneufab
