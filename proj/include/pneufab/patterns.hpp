#pragma once

#include <compare>
#include <string>
#include <vector>

#include "pneufab/design.hpp"
#include "pneufab/geometry.hpp"

namespace pneufab {

/// Process geometry the generators lay out against. None of these are
/// published for the platform; they are conservative shop values.
struct GeneratorSettings {
  double seal_inset = 5.0;     // outline to perimeter-seam centreline
  double weld_width = 3.0;     // welder tip footprint
  double cut_clearance = 3.0;  // any cut to any weld centreline
};

/// Two adjacent fabric layers (indices into LayerStack::layers) that a
/// chamber lives between.
struct LayerPair {
  int lower = 0;
  int upper = 1;

  friend auto operator<=>(const LayerPair&, const LayerPair&) = default;
};

enum class WeldRole { Seam, Interior };

struct WeldPath {
  geom::Polyline path;
  WeldRole role = WeldRole::Interior;
  /// Layer pairs fused by this weld; a seam belongs to exactly one pair.
  std::vector<LayerPair> pairs;
};

struct Chamber {
  int id = 0;
  geom::Polygon region;  // free (unwelded) area, inset half a weld width
  LayerPair pair;
};

/// Opening in a weld line that joins two chambers. p0-p1 spans the gap
/// between weld centrelines.
struct Channel {
  int a = 0;
  int b = 0;
  geom::Point p0;
  geom::Point p1;
  LayerPair pair;

  double width() const { return geom::distance(p0, p1); }
};

struct ChamberGraph {
  std::vector<Chamber> chambers;
  std::vector<Channel> channels;

  const Chamber* find(int id) const;
};

/// Gap in a perimeter seam through which `chamber` is inflated.
struct Inlet {
  int chamber = 0;
  Edge edge = Edge::South;
  geom::Point p0;
  geom::Point p1;
  LayerPair pair;
};

struct PatternSheet {
  ActuatorDesign design;
  GeneratorSettings settings;
  geom::Polygon outline;  // part boundary, trimmed last
  std::vector<WeldPath> welds;
  std::vector<geom::Polyline> cuts;  // interior cuts only
  ChamberGraph chambers;
  std::vector<Inlet> inlets;
  geom::Point origin;  // sheet lower-left on the bed
  std::vector<std::string> notes;
};

/// Dispatches to the family generator and audits the result with the
/// geometric validator; any error becomes E_PARAMS_INFEASIBLE. The
/// material table, when given, sharpens the layer-asymmetry note.
PatternSheet generate(const ActuatorDesign& d, const GeneratorSettings& settings = {},
                      const MaterialTable* materials = nullptr);

/// Same geometry without the audit. Still throws E_PARAMS_INFEASIBLE when
/// the geometry cannot be laid out at all (e.g. an inlet off its edge).
PatternSheet generate_unchecked(const ActuatorDesign& d, const GeneratorSettings& settings = {},
                                const MaterialTable* materials = nullptr);

PatternSheet gen_rect_pouch(double width, double height, double inlet_width,
                            const GeneratorSettings& settings = {});

/// Number of pouches for a pneunet: round(length / pitch), ties up, at least 1.
int pouch_count(double length, double pitch);

/// Number of kirigami cut rows; 0 when height <= 2 * margin.
int kirigami_row_count(const KirigamiParams& p);

/// Plain-text geometry dump, one primitive per line, 3 decimals.
std::string dump_sheet(const PatternSheet& s);

/// The closed loop the perimeter seam follows (outline inset by seal_inset).
geom::Polyline seam_loop(const PatternSheet& s);

}  // namespace pneufab
