#include "pneufab/preview.hpp"

#include <sstream>
#include <vector>

#include "pneufab/format.hpp"

namespace pneufab {

using geom::Point;

namespace {

std::string num(double v) { return fixed(v, 3); }

std::string stroke_attrs(const Stroke& s, const std::string& fill = "none") {
  std::string out = "fill=\"" + fill + "\" stroke=\"" + s.color + "\" stroke-width=\"" + trimmed(s.width, 3) + "\"";
  if (!s.dash.empty()) out += " stroke-dasharray=\"" + s.dash + "\"";
  return out;
}

std::string path_data(const std::vector<Point>& pts, bool closed) {
  std::string d;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    d += (i == 0 ? "M " : " L ");
    d += num(pts[i].x) + " " + num(pts[i].y);
  }
  if (closed) d += " Z";
  return d;
}

class Canvas {
 public:
  void include(Point p) {
    if (empty_) {
      box_ = {p, p};
      empty_ = false;
      return;
    }
    box_ = geom::merge(box_, geom::Box{p, p});
  }
  void include(const std::vector<Point>& pts) {
    for (const Point& p : pts) include(p);
  }

  std::string open(double pad) const {
    const geom::Box b = empty_ ? geom::Box{} : box_;
    const double x = b.min.x - pad, w = b.max.x - b.min.x + 2 * pad;
    const double y = -(b.max.y + pad), h = b.max.y - b.min.y + 2 * pad;
    std::ostringstream os;
    os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" << trimmed(w, 3) << "mm\" height=\""
       << trimmed(h, 3) << "mm\" viewBox=\"" << num(x) << ' ' << num(y) << ' ' << num(w) << ' ' << num(h) << "\">\n";
    os << "<g id=\"model\" transform=\"scale(1,-1)\">\n";
    return os.str();
  }
  static std::string close() { return "</g>\n</svg>\n"; }

 private:
  geom::Box box_{};
  bool empty_ = true;
};

void group(std::ostringstream& os, const std::string& id, const std::vector<std::string>& items) {
  os << "<g id=\"" << id << "\">\n";
  for (const std::string& s : items) os << s;
  os << "</g>\n";
}

std::string path_el(const std::string& id, const std::vector<Point>& pts, bool closed, const std::string& attrs) {
  return "<path id=\"" + id + "\" d=\"" + path_data(pts, closed) + "\" " + attrs + "/>\n";
}

std::string line_el(const std::string& id, Point a, Point b, const std::string& attrs) {
  return "<line id=\"" + id + "\" x1=\"" + num(a.x) + "\" y1=\"" + num(a.y) + "\" x2=\"" + num(b.x) + "\" y2=\"" +
         num(b.y) + "\" " + attrs + "/>\n";
}

std::string bed_el(Point at, const MachineProfile& m, const RenderStyle& style) {
  return "<rect id=\"bed-travel\" x=\"" + num(at.x) + "\" y=\"" + num(at.y) + "\" width=\"" + num(m.travel.x) +
         "\" height=\"" + num(m.travel.y) + "\" " + stroke_attrs(style.bed) + "/>\n";
}

}  // namespace

std::string render_svg(const PatternSheet& s, const RenderStyle& style, const MachineProfile* m) {
  Canvas canvas;
  canvas.include(s.outline.points);
  for (const WeldPath& w : s.welds) canvas.include(w.path.points);
  for (const geom::Polyline& c : s.cuts) canvas.include(c.points);
  const Point bed_at{-s.origin.x, -s.origin.y};
  if (m) {
    canvas.include(bed_at);
    canvas.include(bed_at + Point{m->travel.x, m->travel.y});
  }

  std::ostringstream os;
  os << canvas.open(style.padding);
  if (m) group(os, "bed", {bed_el(bed_at, *m, style)});

  std::vector<std::string> items;
  for (const Chamber& c : s.chambers.chambers) {
    items.push_back(path_el("chamber-" + std::to_string(c.id), c.region.points, true,
                            stroke_attrs(style.chamber, style.chamber_fill)));
  }
  group(os, "chambers", items);

  items.clear();
  for (std::size_t i = 0; i < s.welds.size(); ++i) {
    const WeldPath& w = s.welds[i];
    items.push_back(path_el("weld-" + std::to_string(i), w.path.points, w.path.closed, stroke_attrs(style.weld)));
  }
  group(os, "welds", items);

  items.clear();
  for (std::size_t i = 0; i < s.chambers.channels.size(); ++i) {
    const Channel& c = s.chambers.channels[i];
    items.push_back(line_el("channel-" + std::to_string(i), c.p0, c.p1, stroke_attrs(style.channel)));
  }
  group(os, "channels", items);

  items.clear();
  for (std::size_t i = 0; i < s.inlets.size(); ++i) {
    items.push_back(line_el("inlet-" + std::to_string(i), s.inlets[i].p0, s.inlets[i].p1, stroke_attrs(style.inlet)));
  }
  group(os, "inlets", items);

  items.clear();
  for (std::size_t i = 0; i < s.cuts.size(); ++i) {
    items.push_back(path_el("cut-" + std::to_string(i), s.cuts[i].points, s.cuts[i].closed,
                            stroke_attrs(style.interior_cut)));
  }
  group(os, "cuts", items);

  group(os, "outline", {path_el("outline-path", s.outline.points, true, stroke_attrs(style.outline))});
  os << Canvas::close();
  return os.str();
}

std::string render_svg(const Toolpath& tp, const RenderStyle& style, const MachineProfile* m) {
  // Positions reached after every action.
  std::vector<Point3> at(tp.actions.size() + 1);
  Point3 cur{};
  at[0] = cur;
  for (std::size_t i = 0; i < tp.actions.size(); ++i) {
    const ToolAction& a = tp.actions[i];
    if (a.kind == ToolAction::Kind::Rapid || a.kind == ToolAction::Kind::Move) cur = a.to;
    at[i + 1] = cur;
  }

  Canvas canvas;
  for (const Point3& p : at) canvas.include(Point{p.x, p.y});
  if (m) {
    canvas.include(Point{0, 0});
    canvas.include(Point{m->travel.x, m->travel.y});
  }

  std::ostringstream os;
  os << canvas.open(style.padding);
  if (m) group(os, "bed", {bed_el({0, 0}, *m, style)});

  std::vector<std::string> rapids;
  for (std::size_t i = 0; i < tp.actions.size(); ++i) {
    const ToolAction& a = tp.actions[i];
    if (a.kind != ToolAction::Kind::Rapid) continue;
    const Point from{at[i].x, at[i].y}, to{a.to.x, a.to.y};
    if (from == to) continue;
    rapids.push_back(line_el("rapid-" + std::to_string(i), from, to, stroke_attrs(style.rapid)));
  }
  group(os, "rapids", rapids);

  std::vector<std::string> welds, cuts, outline;
  for (std::size_t k = 0; k < tp.spans.size(); ++k) {
    const PathSpan& sp = tp.spans[k];
    std::vector<Point> pts;
    for (std::size_t i = sp.first; i < sp.last; ++i) {
      if (tp.actions[i].kind != ToolAction::Kind::Move) continue;
      const Point p{at[i + 1].x, at[i + 1].y};
      if (pts.empty() || !(pts.back() == p)) pts.push_back(p);
    }
    const std::string id = "pass-" + std::to_string(k);
    switch (sp.kind) {
      case PathSpan::Kind::Weld: welds.push_back(path_el(id, pts, false, stroke_attrs(style.weld))); break;
      case PathSpan::Kind::Cut: cuts.push_back(path_el(id, pts, false, stroke_attrs(style.interior_cut))); break;
      case PathSpan::Kind::Outline: outline.push_back(path_el(id, pts, false, stroke_attrs(style.outline))); break;
    }
  }
  group(os, "weld-passes", welds);
  group(os, "cut-passes", cuts);
  group(os, "outline-pass", outline);
  os << Canvas::close();
  return os.str();
}

}  // namespace pneufab
