#include "pneufab/toolpath.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "pneufab/error.hpp"
#include "pneufab/validate.hpp"

namespace pneufab {

using geom::Point;
using geom::Polyline;

std::string_view to_string(Tool t) { return t == Tool::Weld ? "weld" : "cut"; }

double snap(double v) {
  const double r = std::round(v * 1000.0) / 1000.0;
  return r == 0.0 ? 0.0 : r;
}

// --- ordering ------------------------------------------------------------------

namespace {

Point entry_of(const Polyline& p, bool reversed) {
  return (reversed && !p.closed) ? p.points.back() : p.points.front();
}

Point exit_of(const Polyline& p, bool reversed) {
  if (p.closed) return p.points.front();
  return reversed ? p.points.front() : p.points.back();
}

}  // namespace

double order_travel(const std::vector<Polyline>& paths, Point start, const std::vector<std::size_t>& order,
                    const std::vector<bool>& reversed) {
  double total = 0.0;
  Point at = start;
  for (std::size_t k = 0; k < order.size(); ++k) {
    const Polyline& p = paths[order[k]];
    total += geom::distance(at, entry_of(p, reversed[k]));
    at = exit_of(p, reversed[k]);
  }
  return total;
}

PathOrder nearest_neighbor(const std::vector<Polyline>& paths, Point start) {
  PathOrder out;
  std::vector<bool> used(paths.size(), false);
  Point at = start;
  for (std::size_t step = 0; step < paths.size(); ++step) {
    std::size_t best = paths.size();
    bool best_rev = false;
    double best_d = 0.0;
    for (std::size_t i = 0; i < paths.size(); ++i) {
      if (used[i]) continue;
      const double fwd = geom::distance(at, paths[i].points.front());
      if (best == paths.size() || fwd < best_d) {
        best = i;
        best_rev = false;
        best_d = fwd;
      }
      if (!paths[i].closed) {
        const double rev = geom::distance(at, paths[i].points.back());
        if (rev < best_d) {
          best = i;
          best_rev = true;
          best_d = rev;
        }
      }
    }
    used[best] = true;
    out.order.push_back(best);
    out.reversed.push_back(best_rev);
    at = exit_of(paths[best], best_rev);
  }
  out.travel = order_travel(paths, start, out.order, out.reversed);
  return out;
}

namespace {

class LocalSearch {
 public:
  LocalSearch(const std::vector<Polyline>& paths, Point start, PathOrder& o) : paths_(paths), start_(start), o_(o) {}

  void run() {
    bool improved = true;
    while (improved) {
      improved = two_opt();
      improved = or_opt() || improved;
    }
  }

 private:
  std::size_t n() const { return o_.order.size(); }
  Point entry(std::size_t k) const { return entry_of(paths_[o_.order[k]], o_.reversed[k]); }
  Point exit(std::size_t k) const { return exit_of(paths_[o_.order[k]], o_.reversed[k]); }
  Point before(std::size_t i) const { return i == 0 ? start_ : exit(i - 1); }

  // Reverses positions i..j in place, flipping each open path.
  void reverse_range(std::size_t i, std::size_t j) {
    std::reverse(o_.order.begin() + static_cast<long>(i), o_.order.begin() + static_cast<long>(j) + 1);
    std::reverse(o_.reversed.begin() + static_cast<long>(i), o_.reversed.begin() + static_cast<long>(j) + 1);
    for (std::size_t k = i; k <= j; ++k) o_.reversed[k] = paths_[o_.order[k]].closed ? false : !o_.reversed[k];
  }

  // Reversing positions i..j also flips each path in that range, so the
  // travel inside the range is unchanged and only the two boundary hops move.
  bool two_opt() {
    bool any = false;
    for (std::size_t i = 0; i < n(); ++i) {
      for (std::size_t j = i; j < n(); ++j) {
        const Point prev = before(i);
        double was = geom::distance(prev, entry(i));
        double now = geom::distance(prev, exit(j));
        if (j + 1 < n()) {
          was += geom::distance(exit(j), entry(j + 1));
          now += geom::distance(entry(i), entry(j + 1));
        }
        if (now < was - 1e-9) {
          reverse_range(i, j);
          any = true;
        }
      }
    }
    return any;
  }

  // Moves a run of up to three paths elsewhere, in either direction.
  bool or_opt() {
    for (std::size_t len = 1; len <= 3; ++len) {
      for (std::size_t i = 0; i + len <= n(); ++i) {
        const std::size_t j = i + len - 1;
        const Point prev = before(i);
        double gain = geom::distance(prev, entry(i));
        if (j + 1 < n()) gain += geom::distance(exit(j), entry(j + 1)) - geom::distance(prev, entry(j + 1));
        // Insert after position p (p == n() stands for "before the first").
        for (std::size_t q = 0; q <= n(); ++q) {
          const bool at_front = q == n();
          const std::size_t p = at_front ? 0 : q;
          if (!at_front && p + 1 >= i && p <= j) continue;
          if (at_front && i == 0) continue;
          const Point a = at_front ? start_ : exit(p);
          const bool has_next = at_front || p + 1 < n();
          const Point b = has_next ? entry(at_front ? 0 : p + 1) : Point{};
          for (bool flip : {false, true}) {
            const Point in = flip ? exit(j) : entry(i);
            const Point out = flip ? entry(i) : exit(j);
            double cost = geom::distance(a, in);
            if (has_next) cost += geom::distance(out, b) - geom::distance(a, b);
            if (cost < gain - 1e-9) {
              move_run(i, j, at_front, p, flip);
              return true;
            }
          }
        }
      }
    }
    return false;
  }

  void move_run(std::size_t i, std::size_t j, bool at_front, std::size_t p, bool flip) {
    if (flip) reverse_range(i, j);
    std::vector<std::size_t> ord(o_.order.begin() + static_cast<long>(i), o_.order.begin() + static_cast<long>(j) + 1);
    std::vector<bool> rev(o_.reversed.begin() + static_cast<long>(i), o_.reversed.begin() + static_cast<long>(j) + 1);
    o_.order.erase(o_.order.begin() + static_cast<long>(i), o_.order.begin() + static_cast<long>(j) + 1);
    o_.reversed.erase(o_.reversed.begin() + static_cast<long>(i), o_.reversed.begin() + static_cast<long>(j) + 1);
    std::size_t at = 0;
    if (!at_front) at = (p > j ? p - (j - i + 1) : p) + 1;
    o_.order.insert(o_.order.begin() + static_cast<long>(at), ord.begin(), ord.end());
    o_.reversed.insert(o_.reversed.begin() + static_cast<long>(at), rev.begin(), rev.end());
  }

  const std::vector<Polyline>& paths_;
  Point start_;
  PathOrder& o_;
};

}  // namespace

PathOrder order_paths(const std::vector<Polyline>& paths, Point start) {
  PathOrder out = nearest_neighbor(paths, start);
  LocalSearch(paths, start, out).run();
  out.travel = order_travel(paths, start, out.order, out.reversed);
  return out;
}

// --- welder switching ---------------------------------------------------------

std::vector<WeldEvent> weld_schedule(const Polyline& path, double feed, const WeldMode& mode,
                                     const MachineProfile& m) {
  if (!(feed > 0.0)) throw Error(ErrorCode::BadValue, "weld feed must be > 0");
  const double len = geom::length(path);
  if (!mode.pulsed) return {{0.0, true}, {len, false}};

  const double q = m.welder_min_switch_ms;
  if (mode.period_ms < 2.0 * q - 1e-9) {
    throw Error(ErrorCode::PulseTooShort, "pulse period " + std::to_string(mode.period_ms) +
                                              " ms is shorter than two welder switch intervals (" +
                                              std::to_string(2.0 * q) + " ms)");
  }
  if (!(mode.duty > 0.0 && mode.duty < 1.0)) {
    throw Error(ErrorCode::BadValue, "pulse duty must lie strictly between 0 and 100%");
  }
  const long slots = std::max(2L, std::lround(mode.period_ms / q));
  const long on_slots = std::clamp(std::lround(mode.duty * static_cast<double>(slots)), 1L, slots - 1);
  const double period = static_cast<double>(slots) * q;
  const double on_ms = static_cast<double>(on_slots) * q;
  const double mm_per_ms = feed / 60000.0;

  std::vector<WeldEvent> out;
  for (long k = 0;; ++k) {
    const double t = static_cast<double>(k) * period;
    const double at = t * mm_per_ms;
    if (at >= len - geom::kCoordEps) break;
    out.push_back({at, true});
    const double off_at = (t + on_ms) * mm_per_ms;
    if (off_at >= len - geom::kCoordEps) break;
    out.push_back({off_at, false});
  }
  if (out.empty() || out.back().on) out.push_back({len, false});
  return out;
}

// --- knife ---------------------------------------------------------------------

std::vector<KnifeStep> knife_orientation(const Polyline& path, double corner_lift_deg) {
  std::vector<KnifeStep> out;
  double at = 0.0;
  double prev = 0.0;
  for (std::size_t i = 0; i < path.segment_count(); ++i) {
    const Point a = path.segment_start(i), b = path.segment_end(i);
    const double heading = std::atan2(b.y - a.y, b.x - a.x) * 180.0 / std::numbers::pi;
    KnifeStep step;
    step.at = at;
    if (out.empty()) {
      step.deg = heading;
    } else {
      double turn = std::fmod(heading - prev, 360.0);
      if (turn > 180.0) turn -= 360.0;
      if (turn <= -180.0) turn += 360.0;
      step.deg = prev + turn;
      step.lift = std::abs(turn) > corner_lift_deg;
    }
    prev = step.deg;
    out.push_back(step);
    at += geom::distance(a, b);
  }
  return out;
}

// --- planning ------------------------------------------------------------------

namespace {

Polyline snapped(const Polyline& p, Point shift) {
  Polyline out;
  out.closed = p.closed;
  for (const Point& q : p.points) {
    const Point s{snap(q.x + shift.x), snap(q.y + shift.y)};
    if (out.points.empty() || !(out.points.back() == s)) out.points.push_back(s);
  }
  while (out.closed && out.points.size() > 1 && out.points.front() == out.points.back()) out.points.pop_back();
  return out;
}

Polyline oriented(const Polyline& p, bool reversed) {
  if (!reversed || p.closed) return p;
  Polyline out = p;
  std::reverse(out.points.begin(), out.points.end());
  return out;
}

// Vertices of the traversal, closing vertex repeated for closed paths.
std::vector<Point> traversal(const Polyline& p) {
  std::vector<Point> v = p.points;
  if (p.closed) v.push_back(p.points.front());
  return v;
}

double planar_length(const std::vector<Point>& v) {
  double total = 0.0;
  for (std::size_t i = 1; i < v.size(); ++i) total += geom::distance(v[i - 1], v[i]);
  return total;
}

struct Builder {
  std::vector<ToolAction> actions;
  Point3 at{};

  void push(const ToolAction& a) {
    actions.push_back(a);
    if (a.kind == ToolAction::Kind::Rapid || a.kind == ToolAction::Kind::Move) at = a.to;
  }
  void rapid(double x, double y, double z) { push(ToolAction::rapid({x, y, z})); }
  void move(double x, double y, double z, double f) { push(ToolAction::move({x, y, z}, f)); }
};

void plan_weld(Builder& b, const std::vector<Point>& v, double feed, const WeldMode& mode, const MachineProfile& m) {
  Polyline line{v, false};
  const std::vector<WeldEvent> events = weld_schedule(line, feed, mode, m);
  b.rapid(v.front().x, v.front().y, m.safe_z);
  b.move(v.front().x, v.front().y, m.weld_z, m.plunge_feed);

  std::size_t e = 0;
  auto fire_until = [&](double s) {
    while (e < events.size() && events[e].at <= s + geom::kCoordEps) {
      b.push(events[e].on ? ToolAction::on(Output::WelderPower) : ToolAction::off(Output::WelderPower));
      ++e;
    }
  };
  double s = 0.0;
  fire_until(0.0);
  for (std::size_t i = 1; i < v.size(); ++i) {
    const Point a = v[i - 1], c = v[i];
    const double seg = geom::distance(a, c);
    while (e < events.size() && events[e].at < s + seg - geom::kCoordEps) {
      const double t = (events[e].at - s) / seg;
      const Point p{snap(a.x + (c.x - a.x) * t), snap(a.y + (c.y - a.y) * t)};
      if (!(p.x == b.at.x && p.y == b.at.y)) b.move(p.x, p.y, m.weld_z, feed);
      fire_until(events[e].at);
    }
    b.move(c.x, c.y, m.weld_z, feed);
    s += seg;
    fire_until(s);
  }
  while (e < events.size()) {
    b.push(events[e].on ? ToolAction::on(Output::WelderPower) : ToolAction::off(Output::WelderPower));
    ++e;
  }
  b.rapid(v.back().x, v.back().y, m.safe_z);
}

void plan_cut(Builder& b, const Polyline& path, const MachineProfile& m) {
  const std::vector<Point> v = traversal(path);
  const std::vector<KnifeStep> steps = knife_orientation(path, m.corner_lift_deg);
  b.push(ToolAction::knife(snap(steps.front().deg)));
  b.rapid(v.front().x, v.front().y, m.safe_z);
  b.move(v.front().x, v.front().y, m.cut_depth, m.plunge_feed);
  for (std::size_t i = 1; i < v.size(); ++i) {
    const KnifeStep& step = steps[i - 1];
    if (i > 1) {
      if (step.lift) {
        b.move(b.at.x, b.at.y, m.lift_z, m.plunge_feed);
        b.push(ToolAction::knife(snap(step.deg)));
        b.rapid(b.at.x, b.at.y, b.at.z);
        b.move(b.at.x, b.at.y, m.cut_depth, m.plunge_feed);
      } else {
        b.push(ToolAction::knife(snap(step.deg)));
      }
    }
    b.move(v[i].x, v[i].y, m.cut_depth, m.cut_feed);
  }
  b.rapid(v.back().x, v.back().y, m.safe_z);
}

double action_ms(const Point3& from, const ToolAction& a, const MachineProfile& m) {
  const double d = std::sqrt((a.to.x - from.x) * (a.to.x - from.x) + (a.to.y - from.y) * (a.to.y - from.y) +
                             (a.to.z - from.z) * (a.to.z - from.z));
  switch (a.kind) {
    case ToolAction::Kind::Rapid: return d / m.rapid_rate * 60000.0;
    case ToolAction::Kind::Move: return d / a.feed * 60000.0;
    case ToolAction::Kind::Dwell: return a.ms;
    default: return 0.0;
  }
}

// Holds every welder_power switch at least the minimum interval after the
// previous one by inserting whole-millisecond dwells.
std::vector<ToolAction> enforce_min_switch(const std::vector<ToolAction>& in, const MachineProfile& m) {
  std::vector<ToolAction> out;
  Point3 at{};
  double since = -1.0;  // < 0: no switch yet
  for (const ToolAction& a : in) {
    const bool power = (a.kind == ToolAction::Kind::ChannelOn || a.kind == ToolAction::Kind::ChannelOff) &&
                       a.channel == Output::WelderPower;
    if (power) {
      if (since >= 0.0 && since < m.welder_min_switch_ms) {
        out.push_back(ToolAction::dwell(std::ceil(m.welder_min_switch_ms - since + 1e-6)));
      }
      since = 0.0;
      out.push_back(a);
      continue;
    }
    if (since >= 0.0) since += action_ms(at, a, m);
    if (a.kind == ToolAction::Kind::Rapid || a.kind == ToolAction::Kind::Move) at = a.to;
    out.push_back(a);
  }
  return out;
}

// Closed ring rotated to start at the vertex nearest `near`.
Polyline start_near(Polyline ring, Point near) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < ring.points.size(); ++i) {
    if (geom::distance(ring.points[i], near) < geom::distance(ring.points[best], near)) best = i;
  }
  std::rotate(ring.points.begin(), ring.points.begin() + static_cast<long>(best), ring.points.end());
  return ring;
}

}  // namespace

Toolpath plan(const PatternSheet& s, const MachineProfile& m, const MaterialTable& mats, const WeldMode& mode) {
  check_profile(m);
  Tolerances tol;
  tol.cut_clearance = s.settings.cut_clearance;
  const ValidationReport report = validate_sheet(s, m, tol);
  if (!report.passed()) {
    for (const Finding& f : report.findings) {
      if (f.severity == Severity::Error && f.code == "BED_EXCEEDED") {
        throw Error(ErrorCode::BedExceeded, f.message);
      }
    }
    for (const Finding& f : report.findings) {
      if (f.severity == Severity::Error) {
        throw Error(ErrorCode::NotValidated, "sheet fails validation: " + f.code + ": " + f.message);
      }
    }
  }

  Toolpath tp;
  tp.mode = mode;
  tp.weld_feed = m.weld_feed ? *m.weld_feed : feed_rate_for(mats, s.design.layers);
  Builder b;

  // Phase 1: welding.
  std::vector<Polyline> welds;
  const Point weld_shift = s.origin - m.tool_offset;
  for (const WeldPath& w : s.welds) welds.push_back(snapped(w.path, weld_shift));
  b.push(ToolAction::select(Tool::Weld));
  b.rapid(0.0, 0.0, m.safe_z);
  b.push(ToolAction::on(Output::WelderStage));
  if (!welds.empty()) {
    const PathOrder order = order_paths(welds, {0.0, 0.0});
    for (std::size_t k = 0; k < order.order.size(); ++k) {
      const Polyline p = oriented(welds[order.order[k]], order.reversed[k]);
      const std::vector<Point> v = traversal(p);
      PathSpan span{PathSpan::Kind::Weld, order.order[k], b.actions.size(), 0, planar_length(v)};
      plan_weld(b, v, tp.weld_feed, mode, m);
      span.last = b.actions.size();
      tp.spans.push_back(span);
    }
  }
  b.push(ToolAction::off(Output::WelderStage));

  // Phase 2: interior cuts, then the outline.
  b.push(ToolAction::select(Tool::Cut));
  b.push(ToolAction::on(Output::Knife));
  std::vector<Polyline> cuts;
  for (const Polyline& c : s.cuts) cuts.push_back(snapped(c, s.origin));
  if (!cuts.empty()) {
    const PathOrder order = order_paths(cuts, {b.at.x, b.at.y});
    for (std::size_t k = 0; k < order.order.size(); ++k) {
      const Polyline p = oriented(cuts[order.order[k]], order.reversed[k]);
      PathSpan span{PathSpan::Kind::Cut, order.order[k], b.actions.size(), 0, planar_length(traversal(p))};
      plan_cut(b, p, m);
      span.last = b.actions.size();
      tp.spans.push_back(span);
    }
  }
  const Polyline outline = start_near(snapped(geom::as_polyline(s.outline), s.origin), {b.at.x, b.at.y});
  PathSpan span{PathSpan::Kind::Outline, 0, b.actions.size(), 0, planar_length(traversal(outline))};
  plan_cut(b, outline, m);
  span.last = b.actions.size();
  tp.spans.push_back(span);
  b.push(ToolAction::off(Output::Knife));

  // Dwell insertion shifts action indices; rebuild span bounds afterwards.
  std::vector<ToolAction> raw = std::move(b.actions);
  std::vector<std::size_t> remap(raw.size() + 1, 0);
  {
    std::vector<ToolAction> fixed_actions = enforce_min_switch(raw, m);
    std::size_t j = 0;
    for (std::size_t i = 0; i < raw.size(); ++i) {
      while (fixed_actions[j].kind == ToolAction::Kind::Dwell && raw[i].kind != ToolAction::Kind::Dwell) ++j;
      remap[i] = j;
      ++j;
    }
    remap[raw.size()] = fixed_actions.size();
    tp.actions = std::move(fixed_actions);
  }
  for (PathSpan& sp : tp.spans) {
    sp.first = remap[sp.first];
    sp.last = remap[sp.last];
  }
  return tp;
}

PathTotals totals(const Toolpath& tp) {
  PathTotals t;
  for (const PathSpan& sp : tp.spans) (sp.kind == PathSpan::Kind::Weld ? t.weld : t.cut) += sp.length;
  Point3 at{};
  for (const ToolAction& a : tp.actions) {
    if (a.kind == ToolAction::Kind::Rapid) t.rapid += std::hypot(a.to.x - at.x, a.to.y - at.y);
    if (a.kind == ToolAction::Kind::Rapid || a.kind == ToolAction::Kind::Move) at = a.to;
  }
  return t;
}

}  // namespace pneufab
