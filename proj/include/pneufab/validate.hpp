#pragma once

#include <string>
#include <vector>

#include "pneufab/machine.hpp"
#include "pneufab/patterns.hpp"

namespace pneufab {

enum class Severity { Error, Warning, Note };
std::string_view to_string(Severity s);

struct Finding {
  Severity severity = Severity::Error;
  std::string code;     // e.g. "CUT_CLEARANCE"
  std::string message;
  std::string ref;      // geometry reference, e.g. "cut 3/weld 5"
};

struct ValidationReport {
  std::vector<Finding> findings;

  bool passed() const;
  std::size_t count(Severity s) const;
  bool has(const std::string& code) const;
  /// Human-readable report.
  std::string text() const;
  /// One `severity code message` line per finding.
  std::string lines() const;
};

struct Tolerances {
  double cut_clearance = 3.0;      // cut to weld centreline
  double min_ligament = 1.0;       // cut to cut
  double min_channel_width = 6.0;  // between weld centrelines
  double min_inlet_width = 6.0;    // barbed fitting
};

struct NetworkReach {
  LayerPair pair;
  std::vector<int> reached;
  std::vector<int> unreachable;
};

/// Breadth-first search from every inlet chamber of each network (layer
/// pair), over channels of that pair at least `min_width` wide.
std::vector<NetworkReach> check_connectivity(const ChamberGraph& g, const std::vector<Inlet>& inlets,
                                             double min_width = 0.0);

/// Checks (a) seam closure, (b) cut clearance, (c) cut containment,
/// (d) connectivity, (e) bed fit and (f) inlet width, in that order.
ValidationReport validate_sheet(const PatternSheet& s, const MachineProfile& m,
                                const Tolerances& tol = {});

/// Everything but the bed-fit check.
ValidationReport validate_geometry(const PatternSheet& s, const Tolerances& tol = {});

}  // namespace pneufab
