#include "pneufab/validate.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <map>
#include <set>
#include <sstream>

#include "pneufab/format.hpp"

namespace pneufab {

using geom::Point;
using geom::Polygon;
using geom::Polyline;

std::string_view to_string(Severity s) {
  switch (s) {
    case Severity::Error: return "error";
    case Severity::Warning: return "warning";
    case Severity::Note: return "note";
  }
  return "?";
}

bool ValidationReport::passed() const { return count(Severity::Error) == 0; }

std::size_t ValidationReport::count(Severity s) const {
  return static_cast<std::size_t>(
      std::count_if(findings.begin(), findings.end(), [&](const Finding& f) { return f.severity == s; }));
}

bool ValidationReport::has(const std::string& code) const {
  return std::any_of(findings.begin(), findings.end(), [&](const Finding& f) { return f.code == code; });
}

std::string ValidationReport::text() const {
  std::ostringstream os;
  os << "validation " << (passed() ? "passed" : "FAILED") << ": " << count(Severity::Error)
     << " error(s), " << count(Severity::Warning) << " warning(s), " << count(Severity::Note)
     << " note(s)\n";
  for (const Finding& f : findings) {
    os << "  " << to_string(f.severity) << ' ' << f.code;
    if (!f.ref.empty()) os << " [" << f.ref << ']';
    os << ": " << f.message << '\n';
  }
  return os.str();
}

std::string ValidationReport::lines() const {
  std::ostringstream os;
  for (const Finding& f : findings) os << to_string(f.severity) << ' ' << f.code << ' ' << f.message << '\n';
  return os.str();
}

namespace {

constexpr double kArcEps = 1e-6;

std::string mm(double v) { return fixed(v, 3) + " mm"; }

std::string pair_name(LayerPair p) {
  return "layers " + std::to_string(p.lower) + "/" + std::to_string(p.upper);
}

struct Interval {
  double from;
  double to;
};

// Arc interval a straight piece on the loop covers. Pieces never span the
// loop start except by ending exactly on it.
Interval arc_interval(const Polyline& loop, double total, Point a, Point b) {
  double sa = geom::arc_position(loop, a);
  double sb = geom::arc_position(loop, b);
  if (sb < sa) std::swap(sa, sb);
  if (sa <= kArcEps && sb - sa > total / 2) return {sb, total};
  return {sa, sb};
}

std::vector<LayerPair> networks(const PatternSheet& s) {
  std::set<LayerPair> pairs;
  for (const Chamber& c : s.chambers.chambers) pairs.insert(c.pair);
  for (const Inlet& in : s.inlets) pairs.insert(in.pair);
  if (pairs.empty()) pairs.insert(LayerPair{});
  return {pairs.begin(), pairs.end()};
}

bool has_pair(const WeldPath& w, LayerPair p) {
  return std::find(w.pairs.begin(), w.pairs.end(), p) != w.pairs.end();
}

// (a)
void check_seams(const PatternSheet& s, std::vector<Finding>& out) {
  const Polyline loop = seam_loop(s);
  if (loop.points.size() < 3) {
    out.push_back({Severity::Error, "SEAM_OPEN", "outline too small for a perimeter seam", "outline"});
    return;
  }
  const double total = geom::length(loop);
  const double inlet_width = s.design.inlet_width;

  for (LayerPair pair : networks(s)) {
    std::vector<Interval> covered;
    for (std::size_t i = 0; i < s.welds.size(); ++i) {
      const WeldPath& w = s.welds[i];
      if (w.role != WeldRole::Seam || !has_pair(w, pair)) continue;
      bool on_loop = true;
      for (const Point& p : w.path.points) {
        double d = 0.0;
        geom::arc_position(loop, p, &d);
        if (d > kArcEps) on_loop = false;
      }
      if (!on_loop) {
        out.push_back({Severity::Error, "SEAM_OFF_LOOP",
                       "seam weld leaves the seal line " + mm(s.settings.seal_inset) + " inside the outline",
                       "weld " + std::to_string(i)});
        continue;
      }
      for (std::size_t k = 0; k < w.path.segment_count(); ++k) {
        covered.push_back(arc_interval(loop, total, w.path.segment_start(k), w.path.segment_end(k)));
      }
    }
    std::sort(covered.begin(), covered.end(), [](const Interval& a, const Interval& b) { return a.from < b.from; });
    std::vector<Interval> merged;
    for (const Interval& iv : covered) {
      if (!merged.empty() && iv.from <= merged.back().to + kArcEps) {
        merged.back().to = std::max(merged.back().to, iv.to);
      } else {
        merged.push_back(iv);
      }
    }
    std::vector<Interval> gaps;
    if (merged.empty()) {
      gaps.push_back({0.0, total});
    } else {
      for (std::size_t i = 0; i + 1 < merged.size(); ++i) gaps.push_back({merged[i].to, merged[i + 1].from});
      const double wrap = merged.front().from + total - merged.back().to;
      if (wrap > kArcEps) gaps.push_back({merged.back().to, merged.front().from + total});
    }

    std::vector<std::pair<std::size_t, Interval>> inlets;
    for (std::size_t i = 0; i < s.inlets.size(); ++i) {
      if (s.inlets[i].pair != pair) continue;
      inlets.emplace_back(i, arc_interval(loop, total, s.inlets[i].p0, s.inlets[i].p1));
    }
    if (inlets.empty()) {
      out.push_back({Severity::Error, "NO_INLET", "no inlet declared on the seam of " + pair_name(pair),
                     pair_name(pair)});
    }
    std::vector<bool> inlet_matched(inlets.size(), false);
    for (const Interval& g : gaps) {
      bool matched = false;
      for (std::size_t k = 0; k < inlets.size(); ++k) {
        const Interval& iv = inlets[k].second;
        const bool same = std::abs(iv.from - g.from) <= kArcEps && std::abs(iv.to - g.to) <= kArcEps;
        if (!same) continue;
        matched = inlet_matched[k] = true;
        const double width = g.to - g.from;
        if (std::abs(width - inlet_width) > kArcEps) {
          out.push_back({Severity::Error, "INLET_WIDTH_MISMATCH",
                         "seam gap is " + mm(width) + ", inlet width is " + mm(inlet_width),
                         "inlet " + std::to_string(inlets[k].first)});
        }
      }
      if (!matched) {
        const Point at = geom::point_at(loop, (g.from + g.to) / 2);
        out.push_back({Severity::Error, "SEAM_OPEN",
                       "seam of " + pair_name(pair) + " open for " + mm(g.to - g.from) + " near (" +
                           fixed(at.x, 3) + ", " + fixed(at.y, 3) + ") with no inlet declared there",
                       pair_name(pair)});
      }
    }
    for (std::size_t k = 0; k < inlets.size(); ++k) {
      if (!inlet_matched[k]) {
        out.push_back({Severity::Error, "INLET_BLOCKED", "declared inlet is welded shut",
                       "inlet " + std::to_string(inlets[k].first)});
      }
    }
  }
}

// (b)
void check_clearance(const PatternSheet& s, const Tolerances& tol, std::vector<Finding>& out) {
  const Polyline outline = geom::as_polyline(s.outline);
  for (std::size_t i = 0; i < s.cuts.size(); ++i) {
    const Polyline& cut = s.cuts[i];
    for (std::size_t j = 0; j < s.welds.size(); ++j) {
      const double d = geom::min_distance(cut, s.welds[j].path);
      if (d < tol.cut_clearance - geom::kCoordEps) {
        out.push_back({Severity::Error, "CUT_CLEARANCE",
                       "cut is " + mm(d) + " from a weld (minimum " + mm(tol.cut_clearance) + ")",
                       "cut " + std::to_string(i) + "/weld " + std::to_string(j)});
      }
    }
    for (std::size_t j = i + 1; j < s.cuts.size(); ++j) {
      const double d = geom::min_distance(cut, s.cuts[j]);
      if (d < tol.min_ligament - geom::kCoordEps) {
        out.push_back({Severity::Error, "CUT_CLEARANCE",
                       "cuts are " + mm(d) + " apart (minimum ligament " + mm(tol.min_ligament) + ")",
                       "cut " + std::to_string(i) + "/cut " + std::to_string(j)});
      }
    }
    const double d = geom::min_distance(cut, outline);
    if (d < tol.cut_clearance - geom::kCoordEps) {
      out.push_back({Severity::Error, "CUT_CLEARANCE",
                     "cut is " + mm(d) + " from the outline (minimum " + mm(tol.cut_clearance) + ")",
                     "cut " + std::to_string(i) + "/outline"});
    }
  }
}

bool enters(const Polyline& path, const Polygon& region) {
  if (geom::intersects(path, geom::as_polyline(region))) return true;
  return std::any_of(path.points.begin(), path.points.end(),
                     [&](Point p) { return geom::contains(region, p) != geom::Location::Outside; });
}

// (c)
void check_containment(const PatternSheet& s, std::vector<Finding>& out) {
  for (std::size_t i = 0; i < s.cuts.size(); ++i) {
    for (const Chamber& c : s.chambers.chambers) {
      if (enters(s.cuts[i], c.region)) {
        out.push_back({Severity::Error, "CUT_IN_CHAMBER", "cut enters chamber " + std::to_string(c.id),
                       "cut " + std::to_string(i) + "/chamber " + std::to_string(c.id)});
      }
    }
  }
}

Point centroid(const Polygon& p) {
  Point c{};
  for (const Point& q : p.points) c = c + q;
  return c * (1.0 / static_cast<double>(p.points.size()));
}

bool strictly_crosses(Point a0, Point a1, Point b0, Point b1) {
  const int o1 = geom::orientation(a0, a1, b0), o2 = geom::orientation(a0, a1, b1);
  const int o3 = geom::orientation(b0, b1, a0), o4 = geom::orientation(b0, b1, a1);
  return o1 * o2 < 0 && o3 * o4 < 0;
}

bool interiors_overlap(const Polygon& a, const Polygon& b) {
  auto inside = [](const Polygon& poly, Point p) { return geom::contains(poly, p) == geom::Location::Inside; };
  if (inside(b, centroid(a)) || inside(a, centroid(b))) return true;
  for (const Point& p : a.points)
    if (inside(b, p)) return true;
  for (const Point& p : b.points)
    if (inside(a, p)) return true;
  const std::size_t na = a.points.size(), nb = b.points.size();
  for (std::size_t i = 0; i < na; ++i) {
    for (std::size_t j = 0; j < nb; ++j) {
      if (strictly_crosses(a.points[i], a.points[(i + 1) % na], b.points[j], b.points[(j + 1) % nb])) return true;
    }
  }
  return false;
}

// (d)
void check_chambers(const PatternSheet& s, const Tolerances& tol, std::vector<Finding>& out) {
  const auto& chambers = s.chambers.chambers;
  std::map<int, const Chamber*> by_id;
  for (const Chamber& c : chambers) {
    if (!by_id.emplace(c.id, &c).second) {
      out.push_back({Severity::Error, "CHAMBER_OVERLAP", "chamber id declared twice", "chamber " + std::to_string(c.id)});
    }
    if (c.region.points.size() < 3 || !geom::is_simple(c.region) || geom::area(c.region) <= 0.0) {
      out.push_back({Severity::Error, "CHAMBER_DEGENERATE", "chamber region is not a simple polygon",
                     "chamber " + std::to_string(c.id)});
    }
  }

  for (std::size_t i = 0; i < chambers.size(); ++i) {
    for (std::size_t j = i + 1; j < chambers.size(); ++j) {
      if (chambers[i].pair != chambers[j].pair) continue;
      if (interiors_overlap(chambers[i].region, chambers[j].region)) {
        out.push_back({Severity::Error, "CHAMBER_OVERLAP",
                       "chambers " + std::to_string(chambers[i].id) + " and " + std::to_string(chambers[j].id) +
                           " overlap",
                       "chamber " + std::to_string(chambers[i].id) + "/chamber " + std::to_string(chambers[j].id)});
      }
    }
  }

  for (const Chamber& c : chambers) {
    for (std::size_t j = 0; j < s.welds.size(); ++j) {
      if (!has_pair(s.welds[j], c.pair)) continue;
      if (enters(s.welds[j].path, c.region)) {
        out.push_back({Severity::Error, "CHAMBER_WELD_OVERLAP",
                       "weld centreline runs through chamber " + std::to_string(c.id),
                       "chamber " + std::to_string(c.id) + "/weld " + std::to_string(j)});
      }
    }
  }

  for (std::size_t k = 0; k < s.chambers.channels.size(); ++k) {
    const Channel& ch = s.chambers.channels[k];
    const std::string ref = "channel " + std::to_string(k);
    const auto a = by_id.find(ch.a), b = by_id.find(ch.b);
    if (a == by_id.end() || b == by_id.end()) {
      out.push_back({Severity::Error, "CHANNEL_DANGLING", "channel names an undeclared chamber", ref});
      continue;
    }
    if (a->second->pair != ch.pair || b->second->pair != ch.pair) {
      out.push_back({Severity::Error, "CHANNEL_CROSS_NETWORK", "channel joins chambers of different layer pairs", ref});
    }
    const double width = ch.width();
    if (width < tol.min_channel_width - geom::kCoordEps) {
      out.push_back({Severity::Error, "CHANNEL_TOO_NARROW",
                     "channel is " + mm(width) + " wide (minimum " + mm(tol.min_channel_width) + ")", ref});
    }
    // The opening itself, less half a weld at each end, must be free of welds.
    const double trim = s.settings.weld_width / 2;
    if (width > 2 * trim) {
      const Point dir = (ch.p1 - ch.p0) * (1.0 / width);
      const Polyline clear{{ch.p0 + dir * trim, ch.p1 - dir * trim}, false};
      for (std::size_t j = 0; j < s.welds.size(); ++j) {
        if (has_pair(s.welds[j], ch.pair) && geom::intersects(clear, s.welds[j].path)) {
          out.push_back({Severity::Error, "CHANNEL_BLOCKED", "a weld crosses the channel opening",
                         ref + "/weld " + std::to_string(j)});
        }
      }
    }
  }

  const geom::Box box = geom::bounds(s.outline);
  const Point middle{(box.min.x + box.max.x) / 2, (box.min.y + box.max.y) / 2};
  for (std::size_t i = 0; i < s.inlets.size(); ++i) {
    const Inlet& in = s.inlets[i];
    const std::string ref = "inlet " + std::to_string(i);
    const auto c = by_id.find(in.chamber);
    if (c == by_id.end() || c->second->pair != in.pair) {
      out.push_back({Severity::Error, "INLET_MISPLACED",
                     "inlet feeds chamber " + std::to_string(in.chamber) + ", which is not in " + pair_name(in.pair),
                     ref});
      continue;
    }
    const Point mid = (in.p0 + in.p1) * 0.5;
    const Point along = in.p1 - in.p0;
    Point inward{-along.y, along.x};
    if (geom::dot(inward, middle - mid) < 0) inward = inward * -1.0;
    const double len = geom::norm(inward);
    if (len <= geom::kCoordEps) {
      out.push_back({Severity::Error, "INLET_MISPLACED", "inlet gap has zero width", ref});
      continue;
    }
    const Point probe = mid + inward * (s.settings.weld_width / len);
    if (geom::contains(c->second->region, probe) == geom::Location::Outside) {
      out.push_back({Severity::Error, "INLET_MISPLACED",
                     "inlet does not open into chamber " + std::to_string(in.chamber), ref});
    }
  }

  for (const NetworkReach& net : check_connectivity(s.chambers, s.inlets, tol.min_channel_width)) {
    for (int id : net.unreachable) {
      out.push_back({Severity::Error, "UNREACHABLE_CHAMBER",
                     "chamber " + std::to_string(id) + " of " + pair_name(net.pair) + " cannot be reached from an inlet",
                     "chamber " + std::to_string(id)});
    }
  }
}

// (e)
void check_bed(const PatternSheet& s, const MachineProfile& m, std::vector<Finding>& out) {
  geom::Box knife = geom::bounds(geom::translate(s.outline, s.origin));
  for (const Polyline& c : s.cuts) knife = geom::merge(knife, geom::bounds(geom::translate(c, s.origin)));
  auto outside = [&](const geom::Box& b) {
    return b.min.x < -geom::kCoordEps || b.min.y < -geom::kCoordEps || b.max.x > m.travel.x + geom::kCoordEps ||
           b.max.y > m.travel.y + geom::kCoordEps;
  };
  auto describe = [](const geom::Box& b) {
    return "(" + fixed(b.min.x, 3) + ", " + fixed(b.min.y, 3) + ")-(" + fixed(b.max.x, 3) + ", " +
           fixed(b.max.y, 3) + ")";
  };
  const std::string bed = "bed " + trimmed(m.travel.x, 3) + " x " + trimmed(m.travel.y, 3) + " mm";
  if (outside(knife)) {
    out.push_back({Severity::Error, "BED_EXCEEDED", "cut geometry spans " + describe(knife) + ", outside the " + bed,
                   "outline"});
  }
  if (!s.welds.empty()) {
    const Point shift = s.origin - m.tool_offset;
    geom::Box weld = geom::bounds(geom::translate(s.welds.front().path, shift));
    for (const WeldPath& w : s.welds) weld = geom::merge(weld, geom::bounds(geom::translate(w.path, shift)));
    if (outside(weld)) {
      out.push_back({Severity::Error, "BED_EXCEEDED",
                     "welder positions span " + describe(weld) + " after the tool offset, outside the " + bed,
                     "welds"});
    }
  }
}

// (f)
void check_inlets(const PatternSheet& s, const Tolerances& tol, std::vector<Finding>& out) {
  for (std::size_t i = 0; i < s.inlets.size(); ++i) {
    const double w = geom::distance(s.inlets[i].p0, s.inlets[i].p1);
    if (w < tol.min_inlet_width - geom::kCoordEps) {
      out.push_back({Severity::Error, "INLET_TOO_NARROW",
                     "inlet is " + mm(w) + " wide (minimum " + mm(tol.min_inlet_width) + ")",
                     "inlet " + std::to_string(i)});
    }
  }
}

void check_paths(const PatternSheet& s, std::vector<Finding>& out) {
  for (std::size_t i = 0; i < s.welds.size(); ++i) {
    if (!geom::is_valid(s.welds[i].path)) {
      out.push_back({Severity::Error, "BAD_PATH", "weld path has fewer than 2 distinct points", "weld " + std::to_string(i)});
    }
  }
  for (std::size_t i = 0; i < s.cuts.size(); ++i) {
    if (!geom::is_valid(s.cuts[i])) {
      out.push_back({Severity::Error, "BAD_PATH", "cut path has fewer than 2 distinct points", "cut " + std::to_string(i)});
    }
  }
  if (s.outline.points.size() < 3 || !geom::is_simple(s.outline)) {
    out.push_back({Severity::Error, "BAD_PATH", "outline is not a simple polygon", "outline"});
  }
}

ValidationReport run(const PatternSheet& s, const MachineProfile* m, const Tolerances& tol) {
  ValidationReport r;
  check_paths(s, r.findings);
  if (!r.passed()) return r;
  check_seams(s, r.findings);
  check_clearance(s, tol, r.findings);
  check_containment(s, r.findings);
  check_chambers(s, tol, r.findings);
  if (m) check_bed(s, *m, r.findings);
  check_inlets(s, tol, r.findings);
  for (const std::string& n : s.notes) {
    const auto colon = n.find(':');
    const std::string code = colon == std::string::npos ? "NOTE" : n.substr(0, colon);
    const std::string msg = colon == std::string::npos ? n : n.substr(std::min(n.size(), colon + 2));
    r.findings.push_back({Severity::Note, code, msg, ""});
  }
  return r;
}

}  // namespace

std::vector<NetworkReach> check_connectivity(const ChamberGraph& g, const std::vector<Inlet>& inlets,
                                             double min_width) {
  std::set<LayerPair> pairs;
  for (const Chamber& c : g.chambers) pairs.insert(c.pair);
  std::vector<NetworkReach> out;
  for (LayerPair pair : pairs) {
    NetworkReach net;
    net.pair = pair;
    std::map<int, std::vector<int>> adj;
    for (const Chamber& c : g.chambers)
      if (c.pair == pair) adj[c.id];
    for (const Channel& ch : g.channels) {
      if (ch.pair != pair || ch.width() < min_width - geom::kCoordEps) continue;
      if (!adj.count(ch.a) || !adj.count(ch.b)) continue;
      adj[ch.a].push_back(ch.b);
      adj[ch.b].push_back(ch.a);
    }
    std::set<int> seen;
    std::deque<int> queue;
    for (const Inlet& in : inlets) {
      if (in.pair == pair && adj.count(in.chamber) && seen.insert(in.chamber).second) queue.push_back(in.chamber);
    }
    while (!queue.empty()) {
      const int id = queue.front();
      queue.pop_front();
      for (int next : adj[id])
        if (seen.insert(next).second) queue.push_back(next);
    }
    for (const auto& [id, _] : adj) (seen.count(id) ? net.reached : net.unreachable).push_back(id);
    out.push_back(std::move(net));
  }
  return out;
}

ValidationReport validate_sheet(const PatternSheet& s, const MachineProfile& m, const Tolerances& tol) {
  return run(s, &m, tol);
}

ValidationReport validate_geometry(const PatternSheet& s, const Tolerances& tol) { return run(s, nullptr, tol); }

}  // namespace pneufab
