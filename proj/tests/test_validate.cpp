#include <gtest/gtest.h>

#include <random>

#include "pneufab/patterns.hpp"
#include "pneufab/validate.hpp"
#include "support.hpp"

using namespace pneufab;
using geom::Point;
using geom::Polyline;
using testing_support::corpus_design;
using testing_support::corpus_names;

namespace {

const MachineProfile kBed{};

Chamber chamber(int id, LayerPair pair = {}) {
  Chamber c;
  c.id = id;
  c.region = geom::rectangle(10.0 * id, 0, 10.0 * id + 8, 8);
  c.pair = pair;
  return c;
}

Channel channel(int a, int b, double width = 8.0, LayerPair pair = {}) {
  Channel c;
  c.a = a;
  c.b = b;
  c.p0 = {0, 0};
  c.p1 = {width, 0};
  c.pair = pair;
  return c;
}

Inlet inlet(int chamber_id, LayerPair pair = {}) {
  Inlet in;
  in.chamber = chamber_id;
  in.pair = pair;
  return in;
}

std::vector<std::string> fixed_codes(const ValidationReport& r) {
  std::vector<std::string> out;
  for (const Finding& f : r.findings)
    if (f.severity == Severity::Error && f.code != "CUT_CLEARANCE") out.push_back(f.code + " " + f.ref);
  return out;
}

}  // namespace

TEST(Validate, KirigamiOnDefaultBedPasses) {
  const ValidationReport r = validate_sheet(generate(corpus_design("kirigami_125")), kBed);
  EXPECT_TRUE(r.passed()) << r.text();
  EXPECT_EQ(r.count(Severity::Error), 0u);
}

TEST(Validate, CorpusPassesOnDefaultBed) {
  for (const std::string& name : corpus_names()) {
    const ValidationReport r = validate_sheet(generate(corpus_design(name)), kBed);
    EXPECT_TRUE(r.passed()) << name << "\n" << r.text();
  }
}

TEST(Validate, CutThroughChamber) {
  PatternSheet s = gen_rect_pouch(60, 40, 8);
  s.cuts.push_back(Polyline{{{20, 20}, {40, 20}}});
  const ValidationReport r = validate_sheet(s, kBed);
  EXPECT_FALSE(r.passed());
  EXPECT_TRUE(r.has("CUT_IN_CHAMBER"));
}

TEST(Validate, SeamWithoutInlet) {
  PatternSheet s = gen_rect_pouch(60, 40, 8);
  s.welds[0].path = geom::as_polyline(geom::rectangle(5, 5, 55, 35));
  s.inlets.clear();
  const ValidationReport r = validate_sheet(s, kBed);
  EXPECT_FALSE(r.passed());
  EXPECT_TRUE(r.has("NO_INLET"));
}

TEST(Validate, OpenSeamWithoutDeclaredInlet) {
  PatternSheet s = gen_rect_pouch(60, 40, 8);
  s.inlets.clear();
  const ValidationReport r = validate_sheet(s, kBed);
  EXPECT_TRUE(r.has("SEAM_OPEN") || r.has("NO_INLET")) << r.text();
}

TEST(Validate, CutTooCloseToWeld) {
  PatternSheet s = gen_rect_pouch(60, 40, 8);
  s.cuts.push_back(Polyline{{{10, 3}, {30, 3}}});
  const ValidationReport r = validate_sheet(s, kBed);
  EXPECT_TRUE(r.has("CUT_CLEARANCE")) << r.text();
}

TEST(Validate, NarrowInlet) {
  ActuatorDesign d = corpus_design("rect_pouch");
  d.inlet_width = 4;
  const PatternSheet s = generate_unchecked(d);
  const ValidationReport r = validate_sheet(s, kBed);
  EXPECT_TRUE(r.has("INLET_TOO_NARROW")) << r.text();
}

TEST(Validate, BedFit) {
  const PatternSheet fits = gen_rect_pouch(680, 380, 8);
  EXPECT_FALSE(validate_sheet(fits, kBed).has("BED_EXCEEDED"));
  PatternSheet big = gen_rect_pouch(720, 420, 8);
  EXPECT_TRUE(validate_sheet(big, kBed).has("BED_EXCEEDED"));
  EXPECT_FALSE(validate_geometry(big).has("BED_EXCEEDED"));
  big.origin = {0, 0};
  EXPECT_FALSE(validate_sheet(big, kBed).has("BED_EXCEEDED"));
  MachineProfile shifted;
  shifted.tool_offset = {30, 0};
  EXPECT_TRUE(validate_sheet(gen_rect_pouch(60, 40, 8), shifted).has("BED_EXCEEDED"));
}

TEST(Validate, ReportText) {
  ValidationReport r;
  EXPECT_TRUE(r.passed());
  r.findings.push_back({Severity::Note, "X", "just a note", ""});
  EXPECT_TRUE(r.passed());
  r.findings.push_back({Severity::Error, "CUT_IN_CHAMBER", "cut 0 enters chamber 0", "cut 0"});
  EXPECT_FALSE(r.passed());
  EXPECT_EQ(r.lines(), "note X just a note\nerror CUT_IN_CHAMBER cut 0 enters chamber 0\n");
  EXPECT_NE(r.text().find("FAILED"), std::string::npos);
}

TEST(Connectivity, PathGraphFromOneEnd) {
  ChamberGraph g;
  for (int i = 0; i < 5; ++i) g.chambers.push_back(chamber(i));
  for (int i = 0; i + 1 < 5; ++i) g.channels.push_back(channel(i, i + 1));
  const auto nets = check_connectivity(g, {inlet(0)});
  ASSERT_EQ(nets.size(), 1u);
  EXPECT_EQ(nets[0].reached.size(), 5u);
  EXPECT_TRUE(nets[0].unreachable.empty());
}

TEST(Connectivity, SecondComponentUnreachable) {
  ChamberGraph g;
  for (int i = 0; i < 4; ++i) g.chambers.push_back(chamber(i));
  g.channels.push_back(channel(0, 1));
  g.channels.push_back(channel(2, 3));
  const auto nets = check_connectivity(g, {inlet(0)});
  ASSERT_EQ(nets.size(), 1u);
  EXPECT_EQ(nets[0].unreachable, (std::vector<int>{2, 3}));
}

TEST(Connectivity, NarrowChannelsDoNotCount) {
  ChamberGraph g;
  for (int i = 0; i < 3; ++i) g.chambers.push_back(chamber(i));
  g.channels.push_back(channel(0, 1, 8.0));
  g.channels.push_back(channel(1, 2, 4.0));
  EXPECT_EQ(check_connectivity(g, {inlet(0)}, 6.0)[0].unreachable, (std::vector<int>{2}));
  EXPECT_TRUE(check_connectivity(g, {inlet(0)}, 0.0)[0].unreachable.empty());
}

TEST(Connectivity, NetworksAreSeparate) {
  ChamberGraph g;
  const LayerPair lo{0, 1}, hi{1, 2};
  g.chambers = {chamber(0, lo), chamber(1, lo), chamber(2, hi), chamber(3, hi)};
  g.channels = {channel(0, 1, 8, lo), channel(2, 3, 8, hi)};
  auto nets = check_connectivity(g, {inlet(0, lo)});
  ASSERT_EQ(nets.size(), 2u);
  EXPECT_TRUE(nets[0].unreachable.empty());
  EXPECT_EQ(nets[1].unreachable, (std::vector<int>{2, 3}));
  nets = check_connectivity(g, {inlet(0, lo), inlet(3, hi)});
  EXPECT_TRUE(nets[0].unreachable.empty());
  EXPECT_TRUE(nets[1].unreachable.empty());
}

TEST(Validate, AntagonisticHasNoCrossNetworkChannel) {
  const PatternSheet s = generate(corpus_design("antagonistic_pneunet"));
  const ValidationReport r = validate_sheet(s, kBed);
  EXPECT_FALSE(r.has("CHANNEL_CROSS_NETWORK"));
  PatternSheet bad = s;
  bad.chambers.channels.front().b = 9;
  EXPECT_TRUE(validate_sheet(bad, kBed).has("CHANNEL_CROSS_NETWORK"));
}

TEST(Validate, DroppedChannelLeavesChambersUnreachable) {
  PatternSheet s = generate(corpus_design("linear_pneunet"));
  s.chambers.channels.erase(s.chambers.channels.begin() + 2);
  EXPECT_TRUE(validate_sheet(s, kBed).has("UNREACHABLE_CHAMBER"));
}

TEST(ValidateProperty, ShrinkingClearanceOnlyAffectsClearance) {
  std::mt19937 rng(29);
  std::uniform_real_distribution<double> x(6, 119), y(6, 144);
  for (const char* name : {"kirigami_100", "kirigami_125", "kirigami_150", "rect_pouch"}) {
    for (int trial = 0; trial < 25; ++trial) {
      PatternSheet s = generate_unchecked(corpus_design(name));
      const double cx = x(rng), cy = y(rng);
      s.cuts.push_back(Polyline{{{cx, cy}, {cx + 0.5, cy}}});
      Tolerances tight;
      Tolerances loose = tight;
      loose.cut_clearance = tight.cut_clearance * std::uniform_real_distribution<double>(0.0, 1.0)(rng);
      const ValidationReport a = validate_sheet(s, kBed, tight);
      const ValidationReport b = validate_sheet(s, kBed, loose);
      EXPECT_EQ(fixed_codes(a), fixed_codes(b)) << name << " trial " << trial;
      EXPECT_LE(b.count(Severity::Error), a.count(Severity::Error));
    }
  }
}

TEST(ValidateProperty, Deterministic) {
  for (const std::string& name : corpus_names()) {
    PatternSheet s = generate(corpus_design(name));
    s.cuts.push_back(Polyline{{{1, 1}, {30, 30}}});
    EXPECT_EQ(validate_sheet(s, kBed).lines(), validate_sheet(s, kBed).lines());
  }
}
