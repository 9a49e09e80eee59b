#include <gtest/gtest.h>

#include <cmath>
#include <functional>
#include <map>
#include <numbers>
#include <set>

#include "pneufab/error.hpp"
#include "pneufab/patterns.hpp"
#include "pneufab/validate.hpp"
#include "support.hpp"

using namespace pneufab;
using testing_support::corpus_design;
using testing_support::corpus_names;

namespace {

ActuatorDesign base(Family f, std::vector<std::string> layers = {"tpu_nylon_medium", "tpu_nylon_medium"}) {
  ActuatorDesign d;
  d.name = "t";
  d.family = f;
  d.layers.layers = std::move(layers);
  return d;
}

ActuatorDesign linear(double w, double len, double pitch) {
  ActuatorDesign d = base(Family::LinearPneunet);
  PneunetParams p;
  p.width = w;
  p.length = len;
  p.pouch_pitch = pitch;
  d.params = p;
  return d;
}

ActuatorDesign twisting(double w, double len, double deg) {
  ActuatorDesign d = base(Family::TwistingPneunet);
  TwistingParams p;
  p.width = w;
  p.length = len;
  p.incline_deg = deg;
  d.params = p;
  return d;
}

ActuatorDesign kirigami(double w, double h) {
  ActuatorDesign d = base(Family::Kirigami);
  KirigamiParams p;
  p.width = w;
  p.height = h;
  d.params = p;
  return d;
}

ErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "expected an error";
  return ErrorCode::Io;
}

std::vector<const WeldPath*> interior(const PatternSheet& s) {
  std::vector<const WeldPath*> out;
  for (const WeldPath& w : s.welds)
    if (w.role == WeldRole::Interior) out.push_back(&w);
  return out;
}

double seam_length(const PatternSheet& s) {
  double total = 0.0;
  for (const WeldPath& w : s.welds)
    if (w.role == WeldRole::Seam) total += geom::length(w.path);
  return total;
}

// Path graph P_n: connected, n - 1 edges, no vertex of degree > 2.
bool is_path_graph(const ChamberGraph& g) {
  const std::size_t n = g.chambers.size();
  if (g.channels.size() + 1 != n) return false;
  std::map<int, std::vector<int>> adj;
  for (const Chamber& c : g.chambers) adj[c.id];
  for (const Channel& c : g.channels) {
    adj[c.a].push_back(c.b);
    adj[c.b].push_back(c.a);
  }
  for (const auto& [_, nb] : adj)
    if (nb.size() > 2) return false;
  std::set<int> seen{g.chambers.front().id};
  std::vector<int> stack{g.chambers.front().id};
  while (!stack.empty()) {
    const int v = stack.back();
    stack.pop_back();
    for (int u : adj[v])
      if (seen.insert(u).second) stack.push_back(u);
  }
  return seen.size() == n;
}

}  // namespace

TEST(RectPouch, PerimeterSeamAndChamber) {
  const PatternSheet s = gen_rect_pouch(60, 40, 8);
  EXPECT_DOUBLE_EQ(geom::perimeter(s.outline), 200.0);
  EXPECT_EQ(s.chambers.chambers.size(), 1u);
  EXPECT_EQ(s.inlets.size(), 1u);
  const double si = s.settings.seal_inset;
  EXPECT_NEAR(seam_length(s), 2 * (60 - 2 * si) + 2 * (40 - 2 * si) - 8, 1e-9);
  EXPECT_TRUE(validate_geometry(s).passed()) << validate_geometry(s).text();
}

TEST(RectPouch, InletAtLeastShortestEdgeIsInfeasible) {
  EXPECT_EQ(code_of([] { gen_rect_pouch(60, 40, 40); }), ErrorCode::ParamsInfeasible);
  EXPECT_EQ(code_of([] { gen_rect_pouch(60, 40, 55); }), ErrorCode::ParamsInfeasible);
}

TEST(RectPouch, InletGapMatchesWidth) {
  const PatternSheet s = gen_rect_pouch(60, 40, 8);
  EXPECT_NEAR(geom::distance(s.inlets[0].p0, s.inlets[0].p1), 8.0, 1e-12);
}

TEST(Pneunet, PouchCountOracle) {
  for (double len = 10; len <= 200; len += 0.5) {
    for (double pitch : {7.0, 10.0, 20.0, 33.0}) {
      const int expect = std::max(1, static_cast<int>(std::floor(len / pitch + 0.5)));
      EXPECT_EQ(pouch_count(len, pitch), expect) << len << " " << pitch;
    }
  }
  EXPECT_EQ(pouch_count(50, 20), 3);  // 2.5 rounds up
}

TEST(Pneunet, LinearCounts) {
  const PatternSheet s = generate(linear(40, 100, 20));
  EXPECT_EQ(s.chambers.chambers.size(), 5u);
  EXPECT_EQ(interior(s).size(), 4u);
  EXPECT_EQ(s.chambers.channels.size(), 4u);
  EXPECT_TRUE(is_path_graph(s.chambers));
}

TEST(Pneunet, SmallChainsArePathGraphs) {
  for (int n = 1; n <= 7; ++n) {
    const PatternSheet s = generate(linear(40, 20.0 * n, 20));
    EXPECT_EQ(s.chambers.chambers.size(), static_cast<std::size_t>(n));
    EXPECT_TRUE(is_path_graph(s.chambers)) << n;
  }
}

TEST(Pneunet, PitchAtLeastLengthIsOnePouch) {
  const PatternSheet s = generate(linear(40, 100, 100));
  EXPECT_EQ(s.chambers.chambers.size(), 1u);
  EXPECT_TRUE(interior(s).empty());
  const PatternSheet r = generate(linear(40, 100, 150));
  EXPECT_EQ(r.chambers.chambers.size(), 1u);
  EXPECT_TRUE(interior(r).empty());
}

TEST(Pneunet, GapsAlternateSides) {
  const PatternSheet s = generate(linear(40, 100, 20));
  const auto lines = interior(s);
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const double c0 = (lines[i - 1]->path.points.front().x + lines[i - 1]->path.points.back().x) / 2;
    const double c1 = (lines[i]->path.points.front().x + lines[i]->path.points.back().x) / 2;
    EXPECT_LT((c0 - 20) * (c1 - 20), 0.0);
  }
  for (const Channel& c : s.chambers.channels) EXPECT_GE(c.width(), 6.0 - 1e-9);
}

TEST(Twisting, ZeroAngleEqualsLinear) {
  const PatternSheet t = generate(twisting(40, 100, 0));
  const PatternSheet l = generate(linear(40, 100, 20));
  ASSERT_EQ(t.welds.size(), l.welds.size());
  for (std::size_t i = 0; i < t.welds.size(); ++i) {
    ASSERT_EQ(t.welds[i].path.points.size(), l.welds[i].path.points.size());
    for (std::size_t k = 0; k < t.welds[i].path.points.size(); ++k) {
      EXPECT_NEAR(t.welds[i].path.points[k].x, l.welds[i].path.points[k].x, 1e-9);
      EXPECT_NEAR(t.welds[i].path.points[k].y, l.welds[i].path.points[k].y, 1e-9);
    }
  }
  EXPECT_EQ(t.chambers.chambers.size(), l.chambers.chambers.size());
}

TEST(Twisting, InclinationAngleOnOutput) {
  for (double deg : {30.0, 60.0}) {
    const PatternSheet s = generate(twisting(40, 120, deg));
    const auto lines = interior(s);
    ASSERT_FALSE(lines.empty());
    for (const WeldPath* w : lines) {
      const geom::Point d = w->path.points.back() - w->path.points.front();
      const double angle = std::atan2(std::abs(d.y), std::abs(d.x)) * 180.0 / std::numbers::pi;
      EXPECT_NEAR(angle, deg, 1e-6);
    }
    for (const Channel& c : s.chambers.channels) EXPECT_GE(c.width(), 6.0 - 1e-9);
    EXPECT_TRUE(is_path_graph(s.chambers));
  }
}

TEST(Antagonistic, TwoNetworksOfNChambers) {
  const ActuatorDesign d = corpus_design("antagonistic_pneunet");
  const PatternSheet s = generate(d);
  const int n = pouch_count(100, 20);
  EXPECT_EQ(s.chambers.chambers.size(), static_cast<std::size_t>(2 * n));
  const auto nets = check_connectivity(s.chambers, s.inlets);
  ASSERT_EQ(nets.size(), 2u);
  for (const NetworkReach& r : nets) {
    EXPECT_EQ(r.reached.size(), static_cast<std::size_t>(n));
    EXPECT_TRUE(r.unreachable.empty());
  }
  EXPECT_NE(nets[0].pair, nets[1].pair);
  for (const Channel& c : s.chambers.channels) {
    EXPECT_EQ(s.chambers.find(c.a)->pair, c.pair);
    EXPECT_EQ(s.chambers.find(c.b)->pair, c.pair);
  }
  for (const WeldPath* w : interior(s)) EXPECT_EQ(w->pairs.size(), 2u);
}

TEST(Antagonistic, LayerCountChecked) {
  ActuatorDesign d = corpus_design("antagonistic_pneunet");
  d.layers.layers.pop_back();
  d.layers.inlets.clear();
  EXPECT_EQ(code_of([&] { generate(d); }), ErrorCode::BadValue);
}

TEST(Bending, EqualLayersAddSymmetryNote) {
  ActuatorDesign d = linear(40, 100, 20);
  d.family = Family::BendingPneunet;
  const PatternSheet s = generate(d);
  ASSERT_FALSE(s.notes.empty());
  EXPECT_NE(s.notes.front().find("SYMMETRIC_LAYERS"), std::string::npos);
  const PatternSheet l = generate(linear(40, 100, 20));
  EXPECT_EQ(s.welds.size(), l.welds.size());

  const PatternSheet b = generate(corpus_design("bending_pneunet"));
  EXPECT_TRUE(b.notes.empty());
}

TEST(Kirigami, RowCountOracle) {
  for (double w : {100.0, 125.0, 150.0}) {
    const PatternSheet s = generate(kirigami(w, 150));
    std::set<long> rows;
    for (const geom::Polyline& c : s.cuts) {
      EXPECT_DOUBLE_EQ(c.points.front().y, c.points.back().y);
      EXPECT_NEAR(geom::length(c), 20.0, 1e-12);
      rows.insert(std::lround(c.points.front().y * 1000));
    }
    EXPECT_EQ(rows.size(), static_cast<std::size_t>(std::floor((150 - 2 * 10.0) / 20.0) + 1));
    EXPECT_EQ(kirigami_row_count(std::get<KirigamiParams>(kirigami(w, 150).params)), 7);
    EXPECT_TRUE(validate_geometry(s).passed()) << validate_geometry(s).text();
  }
}

TEST(Kirigami, EveryCutClearsEveryWeld) {
  for (double w : {100.0, 125.0, 150.0}) {
    const PatternSheet s = generate(kirigami(w, 150));
    ASSERT_FALSE(s.cuts.empty());
    for (const geom::Polyline& c : s.cuts)
      for (const WeldPath& wp : s.welds) EXPECT_GE(geom::min_distance(c, wp.path), 3.0 - 1e-9);
  }
}

TEST(Kirigami, SinglePathChamberGraph) {
  const PatternSheet s = generate(kirigami(125, 150));
  EXPECT_TRUE(is_path_graph(s.chambers));
  EXPECT_EQ(s.inlets.size(), 1u);
  const auto nets = check_connectivity(s.chambers, s.inlets, 6.0);
  ASSERT_EQ(nets.size(), 1u);
  EXPECT_TRUE(nets[0].unreachable.empty());
}

TEST(Kirigami, TinyLigamentIsInfeasible) {
  ActuatorDesign d = kirigami(125, 150);
  std::get<KirigamiParams>(d.params).ligament = 0.1;
  EXPECT_EQ(code_of([&] { generate(d); }), ErrorCode::ParamsInfeasible);
}

TEST(Kirigami, ZeroRowsEqualsRectPouch) {
  const ActuatorDesign d = kirigami(125, 20);
  EXPECT_EQ(kirigami_row_count(std::get<KirigamiParams>(d.params)), 0);
  const PatternSheet k = generate(d);
  const PatternSheet r = gen_rect_pouch(125, 20, d.inlet_width);
  EXPECT_TRUE(k.cuts.empty());
  ASSERT_EQ(k.welds.size(), r.welds.size());
  for (std::size_t i = 0; i < k.welds.size(); ++i) EXPECT_EQ(k.welds[i].path, r.welds[i].path);
  EXPECT_EQ(k.outline, r.outline);
  EXPECT_EQ(k.chambers.chambers.size(), 1u);
}

TEST(Kirigami, AdjacentRowsStagger) {
  const PatternSheet s = generate(kirigami(150, 150));
  std::map<long, std::vector<std::pair<double, double>>> rows;
  for (const geom::Polyline& c : s.cuts) {
    const double a = std::min(c.points.front().x, c.points.back().x);
    const double b = std::max(c.points.front().x, c.points.back().x);
    rows[std::lround(c.points.front().y * 1000)].push_back({a, b});
  }
  const double limit = 20.0 - 5.0;
  for (auto it = rows.begin(); std::next(it) != rows.end(); ++it) {
    for (const auto& [a0, b0] : it->second)
      for (const auto& [a1, b1] : std::next(it)->second)
        EXPECT_LE(std::max(0.0, std::min(b0, b1) - std::max(a0, a1)), limit + 1e-9);
  }
}

TEST(PatternsProperty, ScalingAllLengths) {
  const double k = 1.5;
  for (const std::string& name : corpus_names()) {
    const ActuatorDesign d = corpus_design(name);
    ActuatorDesign big = d;
    std::visit([k](auto& p) {
      using P = std::decay_t<decltype(p)>;
      if constexpr (std::is_same_v<P, RectPouchParams>) {
        p.width *= k, p.height *= k;
      } else if constexpr (std::is_same_v<P, KirigamiParams>) {
        p.width *= k, p.height *= k, p.cut_length *= k, p.ligament *= k, p.row_pitch *= k, p.margin *= k,
            p.channel_width *= k;
      } else {
        p.width *= k, p.length *= k, p.pouch_pitch *= k, p.channel_gap *= k;
      }
    }, big.params);
    big.inlet_width *= k;
    for (InletSpec& in : big.layers.inlets) in.offset *= k;
    GeneratorSettings gs;
    GeneratorSettings bs{gs.seal_inset * k, gs.weld_width * k, gs.cut_clearance * k};
    const PatternSheet a = generate_unchecked(d, gs);
    const PatternSheet b = generate_unchecked(big, bs);
    ASSERT_EQ(a.welds.size(), b.welds.size()) << name;
    ASSERT_EQ(a.cuts.size(), b.cuts.size()) << name;
    for (std::size_t i = 0; i < a.welds.size(); ++i) {
      ASSERT_EQ(a.welds[i].path.points.size(), b.welds[i].path.points.size()) << name;
      for (std::size_t j = 0; j < a.welds[i].path.points.size(); ++j) {
        EXPECT_NEAR(a.welds[i].path.points[j].x * k, b.welds[i].path.points[j].x, 1e-9) << name;
        EXPECT_NEAR(a.welds[i].path.points[j].y * k, b.welds[i].path.points[j].y, 1e-9) << name;
      }
    }
    for (std::size_t i = 0; i < a.cuts.size(); ++i)
      for (std::size_t j = 0; j < a.cuts[i].points.size(); ++j)
        EXPECT_NEAR(a.cuts[i].points[j].x * k, b.cuts[i].points[j].x, 1e-9) << name;
  }
}

TEST(PatternsProperty, CorpusGeneratesAndValidates) {
  for (const std::string& name : corpus_names()) {
    const PatternSheet s = generate(corpus_design(name));
    const ValidationReport r = validate_geometry(s);
    EXPECT_TRUE(r.passed()) << name << "\n" << r.text();
    EXPECT_EQ(dump_sheet(s), dump_sheet(generate(corpus_design(name)))) << name;
  }
}

TEST(PatternsProperty, GenerateEitherValidatesOrRefuses) {
  int feasible = 0;
  for (double w = 30; w <= 80; w += 10)
    for (double len = 40; len <= 160; len += 20)
      for (double pitch : {12.0, 15.0, 20.0, 30.0}) {
        const ActuatorDesign d = linear(w, len, pitch);
        try {
          const PatternSheet s = generate(d);
          EXPECT_TRUE(validate_sheet(s, MachineProfile{}).passed()) << w << " " << len << " " << pitch;
          ++feasible;
          if (pitch >= 15.0) continue;
        } catch (const Error& e) {
          EXPECT_EQ(e.code(), ErrorCode::ParamsInfeasible);
          // Thin end pouches from the rounding remainder are the only refusals.
          EXPECT_EQ(pitch, 12.0) << w << " " << len;
        }
      }
  EXPECT_GT(feasible, 120);
}

TEST(Patterns, DumpFormat) {
  const std::string dump = dump_sheet(gen_rect_pouch(60, 40, 8));
  EXPECT_EQ(dump.rfind("pattern ", 0), 0u);
  EXPECT_NE(dump.find("\noutline "), std::string::npos);
  EXPECT_NE(dump.find("\nweld 0 seam"), std::string::npos);
  EXPECT_NE(dump.find("\ninlet "), std::string::npos);
}
