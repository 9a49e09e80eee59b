#include "pneufab/patterns.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "pneufab/error.hpp"
#include "pneufab/format.hpp"
#include "pneufab/validate.hpp"

namespace pneufab {

using geom::Point;
using geom::Polygon;
using geom::Polyline;

const Chamber* ChamberGraph::find(int id) const {
  for (const Chamber& c : chambers)
    if (c.id == id) return &c;
  return nullptr;
}

int pouch_count(double length, double pitch) {
  const int n = static_cast<int>(std::floor(length / pitch + 0.5));
  return std::max(n, 1);
}

int kirigami_row_count(const KirigamiParams& p) {
  const double span = p.height - 2.0 * p.margin;
  if (span <= 0.0) return 0;
  return static_cast<int>(std::floor(span / p.row_pitch + 1e-9)) + 1;
}

namespace {

constexpr LayerPair kPairA{0, 1};
constexpr LayerPair kPairB{1, 2};

[[noreturn]] void infeasible(const std::string& why) {
  throw Error(ErrorCode::ParamsInfeasible, why);
}

// Counterclockwise seam loop starting at the lower-left seam corner.
Polyline rect_seam_loop(double w, double h, double s) {
  return Polyline{{{s, s}, {w - s, s}, {w - s, h - s}, {s, h - s}}, true};
}

// Sub-path of a closed loop from arc position `from` forward to `to`.
Polyline loop_section(const Polyline& loop, double from, double to) {
  const double total = geom::length(loop);
  if (to <= from) to += total;
  std::vector<double> at(loop.points.size(), 0.0);
  for (std::size_t i = 1; i < loop.points.size(); ++i) {
    at[i] = at[i - 1] + geom::distance(loop.points[i - 1], loop.points[i]);
  }
  Polyline out;
  out.points.push_back(geom::point_at(loop, from));
  for (int lap = 0; lap < 2; ++lap) {
    for (std::size_t i = 0; i < loop.points.size(); ++i) {
      const double v = lap * total + at[i];
      if (v > from + geom::kCoordEps && v < to - geom::kCoordEps) out.points.push_back(loop.points[i]);
    }
  }
  out.points.push_back(geom::point_at(loop, to));
  return out;
}

struct SeamGap {
  double from;
  double to;
  Inlet inlet;
};

double edge_arc_start(Edge e, double w, double h, double s) {
  const double bw = w - 2 * s, bh = h - 2 * s;
  switch (e) {
    case Edge::South: return 0.0;
    case Edge::East: return bw;
    case Edge::North: return bw + bh;
    case Edge::West: return 2 * bw + bh;
  }
  return 0.0;
}

// Perimeter seam for one layer pair, split open at each of its inlets.
std::vector<WeldPath> build_seam(double w, double h, double s, double inlet_width,
                                 const std::vector<InletSpec>& specs, LayerPair pair,
                                 std::vector<Inlet>& inlets_out) {
  const Polyline loop = rect_seam_loop(w, h, s);
  const double bw = w - 2 * s, bh = h - 2 * s;
  std::vector<SeamGap> gaps;
  for (const InletSpec& spec : specs) {
    const bool horizontal = spec.edge == Edge::South || spec.edge == Edge::North;
    const double side = horizontal ? bw : bh;
    // Position along the loop edge, which runs +x on south/+y on east and
    // backwards on north/west.
    double along = spec.offset - s;
    if (spec.edge == Edge::North || spec.edge == Edge::West) along = side - along;
    const double lo = along - inlet_width / 2, hi = along + inlet_width / 2;
    if (lo <= geom::kCoordEps || hi >= side - geom::kCoordEps) {
      infeasible("inlet on " + std::string(to_string(spec.edge)) + " edge at offset " +
                 trimmed(spec.offset, 3) + " mm does not fit between the seam corners");
    }
    const double base = edge_arc_start(spec.edge, w, h, s);
    SeamGap g{base + lo, base + hi, {}};
    g.inlet.chamber = spec.chamber;
    g.inlet.edge = spec.edge;
    g.inlet.pair = pair;
    // Keep p0 at the lower x / lower y end for a stable dump.
    Point a = geom::point_at(loop, g.from), b = geom::point_at(loop, g.to);
    if (std::tie(b.x, b.y) < std::tie(a.x, a.y)) std::swap(a, b);
    g.inlet.p0 = a;
    g.inlet.p1 = b;
    gaps.push_back(g);
  }
  std::sort(gaps.begin(), gaps.end(), [](const SeamGap& a, const SeamGap& b) { return a.from < b.from; });
  for (std::size_t i = 1; i < gaps.size(); ++i) {
    if (gaps[i].from < gaps[i - 1].to + geom::kCoordEps) infeasible("inlet gaps overlap");
  }

  std::vector<WeldPath> out;
  if (gaps.empty()) {
    out.push_back({loop, WeldRole::Seam, {pair}});
    return out;
  }
  for (std::size_t i = 0; i < gaps.size(); ++i) {
    const SeamGap& cur = gaps[i];
    const SeamGap& next = gaps[(i + 1) % gaps.size()];
    out.push_back({loop_section(loop, cur.to, next.from), WeldRole::Seam, {pair}});
  }
  for (const SeamGap& g : gaps) inlets_out.push_back(g.inlet);
  return out;
}

PatternSheet base_sheet(const ActuatorDesign& d, const GeneratorSettings& st, double w, double h) {
  PatternSheet s;
  s.design = d;
  s.settings = st;
  s.outline = geom::rectangle(0, 0, w, h);
  s.origin = d.origin;
  return s;
}

void require_positive(double v, const char* what) {
  if (!(v > 0.0)) infeasible(std::string(what) + " must be > 0");
}

// --- rectangular pouch -----------------------------------------------------

PatternSheet rect_pouch(const ActuatorDesign& d, const GeneratorSettings& st, double w, double h) {
  const double s = st.seal_inset;
  if (!(w > 2 * s + st.weld_width && h > 2 * s + st.weld_width)) {
    infeasible("sheet " + trimmed(w, 3) + " x " + trimmed(h, 3) +
               " mm is too small for the perimeter seam");
  }
  if (d.inlet_width >= std::min(w, h)) infeasible("inlet width exceeds the shortest edge");
  PatternSheet sheet = base_sheet(d, st, w, h);
  std::vector<InletSpec> specs = d.layers.inlets;
  if (specs.empty()) specs.push_back({0, Edge::South, w / 2});
  sheet.welds = build_seam(w, h, s, d.inlet_width, specs, kPairA, sheet.inlets);
  const double in = s + st.weld_width / 2;
  sheet.chambers.chambers.push_back({0, geom::rectangle(in, in, w - in, h - in), kPairA});
  return sheet;
}

// --- pneunets ----------------------------------------------------------------

struct LineLayout {
  std::vector<Polyline> welds;        // interior weld lines, k = 1..n-1
  std::vector<Polygon> regions;       // chambers 0..n-1
  std::vector<std::pair<Point, Point>> gaps;  // channel k-1 <-> k
};

// Transverse weld lines at fixed pitch, centred on the sheet, each rotated
// by `incline` about the sheet centreline and cut back at alternating ends
// so the pouches form one serpentine chain.
LineLayout pneunet_lines(double w, double len, double pitch, double gap, double incline_deg,
                         const GeneratorSettings& st) {
  const double s = st.seal_inset;
  const double half_weld = st.weld_width / 2;
  const int n = pouch_count(len, pitch);
  const double theta = incline_deg * std::numbers::pi / 180.0;
  const Point dir{std::cos(theta), std::sin(theta)};
  const Point up{-dir.y, dir.x};
  const double xlo = s, xhi = w - s, ylo = s, yhi = len - s;

  LineLayout out;
  std::vector<Point> centres;
  for (int k = 1; k < n; ++k) centres.push_back({w / 2, len / 2 + (k - n / 2.0) * pitch});

  for (std::size_t i = 0; i < centres.size(); ++i) {
    const Point c = centres[i];
    // Clip the infinite line to the seam rectangle (Liang-Barsky).
    double t0 = -1e300, t1 = 1e300;
    auto clip = [&](double p, double q) {
      // p * t <= q
      if (p == 0.0) {
        if (q < 0.0) infeasible("weld line lies outside the seam");
        return;
      }
      const double r = q / p;
      if (p < 0.0) t0 = std::max(t0, r);
      else t1 = std::min(t1, r);
    };
    clip(-dir.x, c.x - xlo);
    clip(dir.x, xhi - c.x);
    clip(-dir.y, c.y - ylo);
    clip(dir.y, yhi - c.y);
    if (!(t1 > t0)) infeasible("weld line lies outside the seam");

    const bool gap_at_high_end = (i % 2) == 0;  // line 1 opens on the right
    const double sign = gap_at_high_end ? 1.0 : -1.0;
    const Point end = c + dir * (gap_at_high_end ? t1 : t0);
    const Point back = dir * -sign;  // direction from the open end into the line

    // Distances from a point on the line to each seam side, as a + b*t
    // where t is the retreat from `end`.
    struct Side {
      double a;
      double b;
    };
    const Side sides[4] = {{end.x - xlo, back.x}, {xhi - end.x, -back.x},
                           {end.y - ylo, back.y}, {yhi - end.y, -back.y}};
    double retreat = 0.0;
    for (const Side& sd : sides) {
      if (sd.b > 1e-12) retreat = std::max(retreat, (gap - sd.a) / sd.b);
    }
    const double span = t1 - t0;
    if (retreat >= span - st.weld_width) {
      infeasible("channel gap consumes a whole weld line");
    }
    const Point open_end = end + back * retreat;
    const Point closed_end = c + dir * (gap_at_high_end ? t0 : t1);
    out.welds.push_back(gap_at_high_end ? Polyline{{closed_end, open_end}, false}
                                        : Polyline{{open_end, closed_end}, false});

    // Gap segment: from the open end to the nearest seam point.
    Point foot = open_end;
    double best = 1e300;
    const Point candidates[4] = {{xlo, open_end.y}, {xhi, open_end.y}, {open_end.x, ylo},
                                 {open_end.x, yhi}};
    for (const Point& q : candidates) {
      const double dd = geom::distance(q, open_end);
      if (dd < best - geom::kCoordEps) {
        best = dd;
        foot = q;
      }
    }
    out.gaps.emplace_back(open_end, foot);
  }

  const Polygon inner = geom::rectangle(xlo + half_weld, ylo + half_weld, xhi - half_weld, yhi - half_weld);
  for (int k = 0; k < n; ++k) {
    Polygon r = inner;
    if (k > 0) r = geom::clip_halfplane(r, centres[k - 1] + up * half_weld, up);
    if (k < n - 1) r = geom::clip_halfplane(r, centres[k] - up * half_weld, up * -1.0);
    if (r.points.size() < 3 || geom::area(r) < st.weld_width * st.weld_width) {
      infeasible("pouch " + std::to_string(k) + " collapses; increase pouch_pitch");
    }
    out.regions.push_back(geom::counterclockwise(r));
  }
  return out;
}

PatternSheet pneunet(const ActuatorDesign& d, const GeneratorSettings& st, double w, double len,
                     double pitch, double gap, double incline_deg) {
  require_positive(w, "width");
  require_positive(len, "length");
  require_positive(pitch, "pouch_pitch");
  require_positive(gap, "channel_gap");
  const double s = st.seal_inset;
  if (!(w > 2 * s + gap + st.weld_width && len > 2 * s + st.weld_width)) {
    infeasible("sheet too small for seam, channel gap and weld lines");
  }
  PatternSheet sheet = base_sheet(d, st, w, len);
  const LineLayout lines = pneunet_lines(w, len, pitch, gap, incline_deg, st);
  const int n = static_cast<int>(lines.regions.size());
  const bool antagonistic = d.family == Family::AntagonisticPneunet;

  std::vector<LayerPair> networks{kPairA};
  if (antagonistic) networks.push_back(kPairB);

  std::vector<InletSpec> specs = d.layers.inlets;
  if (specs.empty()) specs.push_back({0, Edge::South, w / 2});

  for (std::size_t net = 0; net < networks.size(); ++net) {
    std::vector<InletSpec> mine;
    for (const InletSpec& in : specs) {
      const bool in_b = in.chamber >= n;
      if ((net == 1) == in_b) mine.push_back(in);
    }
    auto seam = build_seam(w, len, s, d.inlet_width, mine, networks[net], sheet.inlets);
    sheet.welds.insert(sheet.welds.end(), seam.begin(), seam.end());
  }
  for (const Polyline& line : lines.welds) sheet.welds.push_back({line, WeldRole::Interior, networks});

  for (std::size_t net = 0; net < networks.size(); ++net) {
    const int base = static_cast<int>(net) * n;
    for (int k = 0; k < n; ++k) {
      sheet.chambers.chambers.push_back({base + k, lines.regions[k], networks[net]});
    }
    for (int k = 1; k < n; ++k) {
      const auto& [p0, p1] = lines.gaps[k - 1];
      sheet.chambers.channels.push_back({base + k - 1, base + k, p0, p1, networks[net]});
    }
  }
  return sheet;
}

// --- kirigami ----------------------------------------------------------------

PatternSheet kirigami(const ActuatorDesign& d, const GeneratorSettings& st, const KirigamiParams& p) {
  require_positive(p.width, "width");
  require_positive(p.height, "height");
  const int rows = kirigami_row_count(p);
  if (rows == 0) {
    ActuatorDesign pouch = d;
    return rect_pouch(pouch, st, p.width, p.height);
  }
  const double w = p.width, h = p.height;
  const double s = st.seal_inset, cc = st.cut_clearance, half_weld = st.weld_width / 2;
  if (p.margin < s + cc) infeasible("margin must be at least seal inset + cut clearance");
  if (rows < 2) infeasible("a single cut row leaves no channel; increase height or reduce margin");
  const double tube = p.row_pitch - 2 * cc;  // wall-to-wall channel width
  if (tube < p.channel_width || tube <= st.weld_width) {
    infeasible("row_pitch " + trimmed(p.row_pitch, 3) + " mm leaves a " + trimmed(tube, 3) +
               " mm channel between sealed cut rows (needs " + trimmed(p.channel_width, 3) + ")");
  }
  if (w < 2 * s + p.channel_width + st.weld_width) infeasible("sheet too narrow for the channel");

  PatternSheet sheet = base_sheet(d, st, w, h);
  const double y0 = p.margin + ((h - 2 * p.margin) - (rows - 1) * p.row_pitch) / 2;
  std::vector<double> ys;
  for (int r = 0; r < rows; ++r) ys.push_back(y0 + r * p.row_pitch);

  std::vector<InletSpec> specs = d.layers.inlets;
  if (specs.empty()) specs.push_back({0, Edge::West, (ys[0] + ys[1]) / 2});
  sheet.welds = build_seam(w, h, s, d.inlet_width, specs, kPairA, sheet.inlets);

  const double x_open_right = w - s - p.channel_width;  // U-wall end when opening right
  const double x_open_left = s + p.channel_width;
  const double x0 = std::max(p.margin, s + cc);
  const double period = p.cut_length + p.ligament;

  for (int r = 0; r < rows; ++r) {
    const double y = ys[r];
    const bool first = r == 0, last = r == rows - 1;
    const bool opens_right = (r % 2) == 1;
    double lo = x0, hi = w - x0;
    if (!first && !last) {
      if (opens_right) {
        hi = std::min(hi, x_open_right - cc);
        sheet.welds.push_back({Polyline{{{s, y - cc}, {x_open_right, y - cc}, {x_open_right, y + cc}, {s, y + cc}}, false},
                               WeldRole::Interior, {kPairA}});
        sheet.chambers.channels.push_back({r - 1, r, {x_open_right, y}, {w - s, y}, kPairA});
      } else {
        lo = std::max(lo, x_open_left + cc);
        sheet.welds.push_back({Polyline{{{w - s, y - cc}, {x_open_left, y - cc}, {x_open_left, y + cc}, {w - s, y + cc}}, false},
                               WeldRole::Interior, {kPairA}});
        sheet.chambers.channels.push_back({r - 1, r, {s, y}, {x_open_left, y}, kPairA});
      }
    } else if (first) {
      sheet.welds.push_back({Polyline{{{s, y + cc}, {w - s, y + cc}}, false}, WeldRole::Interior, {kPairA}});
    } else {
      sheet.welds.push_back({Polyline{{{s, y - cc}, {w - s, y - cc}}, false}, WeldRole::Interior, {kPairA}});
    }

    const double phase = (r % 2) ? period / 2 : 0.0;
    for (int k = 0;; ++k) {
      const double a = x0 + phase + k * period;
      if (a > hi) break;
      const double b = a + p.cut_length;
      if (a >= lo - geom::kCoordEps && b <= hi + geom::kCoordEps) {
        sheet.cuts.push_back(Polyline{{{a, y}, {b, y}}, false});
      }
    }
  }

  for (int k = 0; k + 1 < rows; ++k) {
    const double bottom = ys[k] + cc + half_weld, top = ys[k + 1] - cc - half_weld;
    sheet.chambers.chambers.push_back(
        {k, geom::rectangle(s + half_weld, bottom, w - s - half_weld, top), kPairA});
  }
  return sheet;
}

void add_layer_notes(PatternSheet& sheet, const MaterialTable* materials) {
  const ActuatorDesign& d = sheet.design;
  if (d.family != Family::BendingPneunet || d.layers.layers.size() != 2) return;
  const std::string& a = d.layers.layers[0];
  const std::string& b = d.layers.layers[1];
  bool same = a == b;
  if (!same && materials) {
    const Material* ma = materials->find(a);
    const Material* mb = materials->find(b);
    same = ma && mb && ma->areal_weight == mb->areal_weight && ma->areal_weight > 0;
  }
  if (same) {
    sheet.notes.push_back("SYMMETRIC_LAYERS: bending_pneunet layers " + a + " / " + b +
                          " have equal weight; no bending asymmetry expected");
  }
}

}  // namespace

PatternSheet gen_rect_pouch(double width, double height, double inlet_width,
                            const GeneratorSettings& settings) {
  ActuatorDesign d;
  d.name = "rect_pouch";
  d.family = Family::RectPouch;
  d.layers.layers = {"tpu_nylon_medium", "tpu_nylon_medium"};
  d.params = RectPouchParams{width, height};
  d.inlet_width = inlet_width;
  return generate(d, settings);
}

PatternSheet generate_unchecked(const ActuatorDesign& d, const GeneratorSettings& st,
                                const MaterialTable* materials) {
  PatternSheet sheet;
  switch (d.family) {
    case Family::RectPouch: {
      const auto& p = std::get<RectPouchParams>(d.params);
      sheet = rect_pouch(d, st, p.width, p.height);
      break;
    }
    case Family::LinearPneunet:
    case Family::BendingPneunet:
    case Family::AntagonisticPneunet: {
      const auto& p = std::get<PneunetParams>(d.params);
      const std::size_t want = d.family == Family::AntagonisticPneunet ? 3 : 2;
      if (d.layers.layers.size() != want) {
        throw Error(ErrorCode::BadValue, std::string(to_string(d.family)) + " needs " +
                                             std::to_string(want) + " layers");
      }
      if (d.family == Family::AntagonisticPneunet && d.layers.inlets.size() != 2) {
        throw Error(ErrorCode::BadValue, "antagonistic_pneunet needs exactly 2 inlets");
      }
      sheet = pneunet(d, st, p.width, p.length, p.pouch_pitch, p.channel_gap, 0.0);
      break;
    }
    case Family::TwistingPneunet: {
      const auto& p = std::get<TwistingParams>(d.params);
      if (!(p.incline_deg >= 0.0 && p.incline_deg < 90.0)) {
        throw Error(ErrorCode::BadValue, "incline_deg must satisfy 0 <= angle < 90");
      }
      sheet = pneunet(d, st, p.width, p.length, p.pouch_pitch, p.channel_gap, p.incline_deg);
      break;
    }
    case Family::Kirigami:
      sheet = kirigami(d, st, std::get<KirigamiParams>(d.params));
      break;
  }
  add_layer_notes(sheet, materials);
  return sheet;
}

PatternSheet generate(const ActuatorDesign& d, const GeneratorSettings& settings,
                      const MaterialTable* materials) {
  PatternSheet sheet = generate_unchecked(d, settings, materials);
  Tolerances tol;
  tol.cut_clearance = settings.cut_clearance;
  const ValidationReport report = validate_geometry(sheet, tol);
  for (const Finding& f : report.findings) {
    if (f.severity == Severity::Error) {
      throw Error(ErrorCode::ParamsInfeasible, f.code + ": " + f.message);
    }
  }
  return sheet;
}

geom::Polyline seam_loop(const PatternSheet& s) {
  const geom::Box b = geom::bounds(s.outline);
  const auto& pts = s.outline.points;
  const bool axis_rect = pts.size() == 4 &&
                         std::all_of(pts.begin(), pts.end(), [&](Point p) {
                           return (p.x == b.min.x || p.x == b.max.x) && (p.y == b.min.y || p.y == b.max.y);
                         });
  const double in = s.settings.seal_inset;
  if (axis_rect && b.min.x == 0.0 && b.min.y == 0.0) return rect_seam_loop(b.max.x, b.max.y, in);
  if (axis_rect) {
    return Polyline{{{b.min.x + in, b.min.y + in}, {b.max.x - in, b.min.y + in},
                     {b.max.x - in, b.max.y - in}, {b.min.x + in, b.max.y - in}},
                    true};
  }
  const auto parts = geom::offset(s.outline, -in);
  if (parts.empty()) return {};
  return geom::as_polyline(parts.front());
}

namespace {

std::string pt(Point p) { return fixed(p.x, 3) + "," + fixed(p.y, 3); }

std::string pts(const std::vector<Point>& v) {
  std::string out;
  for (const Point& p : v) out += " " + pt(p);
  return out;
}

std::string pair_text(LayerPair p) { return std::to_string(p.lower) + "-" + std::to_string(p.upper); }

}  // namespace

std::string dump_sheet(const PatternSheet& s) {
  std::ostringstream os;
  os << "pattern " << s.design.name << ' ' << to_string(s.design.family) << '\n';
  os << "origin " << pt(s.origin) << '\n';
  os << "settings seal_inset=" << fixed(s.settings.seal_inset, 3)
     << " weld_width=" << fixed(s.settings.weld_width, 3)
     << " cut_clearance=" << fixed(s.settings.cut_clearance, 3) << '\n';
  os << "outline" << pts(s.outline.points) << '\n';
  for (std::size_t i = 0; i < s.welds.size(); ++i) {
    const WeldPath& w = s.welds[i];
    os << "weld " << i << ' ' << (w.role == WeldRole::Seam ? "seam" : "interior") << " pairs=";
    for (std::size_t k = 0; k < w.pairs.size(); ++k) os << (k ? "," : "") << pair_text(w.pairs[k]);
    os << ' ' << (w.path.closed ? "closed" : "open") << pts(w.path.points) << '\n';
  }
  for (std::size_t i = 0; i < s.cuts.size(); ++i) os << "cut " << i << pts(s.cuts[i].points) << '\n';
  for (const Chamber& c : s.chambers.chambers) {
    os << "chamber " << c.id << " pair=" << pair_text(c.pair) << pts(c.region.points) << '\n';
  }
  for (const Channel& c : s.chambers.channels) {
    os << "channel " << c.a << ' ' << c.b << " pair=" << pair_text(c.pair)
       << " width=" << fixed(c.width(), 3) << ' ' << pt(c.p0) << ' ' << pt(c.p1) << '\n';
  }
  for (const Inlet& in : s.inlets) {
    os << "inlet " << in.chamber << ' ' << to_string(in.edge) << " pair=" << pair_text(in.pair) << ' '
       << pt(in.p0) << ' ' << pt(in.p1) << '\n';
  }
  for (const std::string& n : s.notes) os << "note " << n << '\n';
  return os.str();
}

}  // namespace pneufab
