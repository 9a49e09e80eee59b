// Acceptance run: one PASS/FAIL line per criterion, exit 1 if any fail.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <numbers>
#include <numeric>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "fuzz.hpp"
#include "pneufab/cli.hpp"
#include "pneufab/estimate.hpp"
#include "pneufab/gcode.hpp"
#include "pneufab/geometry.hpp"
#include "pneufab/patterns.hpp"
#include "pneufab/preview.hpp"
#include "pneufab/toolpath.hpp"
#include "pneufab/validate.hpp"
#include "support.hpp"

using namespace pneufab;
using namespace testing_support;
using geom::Point;
using geom::Polygon;
using geom::Polyline;

namespace {

struct Outcome {
  bool pass = true;
  std::vector<std::string> notes;
  void fail(const std::string& why) {
    pass = false;
    notes.push_back(why);
  }
  void note(const std::string& what) { notes.push_back(what); }
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string num(double v, int digits = 3) {
  std::ostringstream os;
  os.precision(digits);
  os << v;
  return os.str();
}

const MaterialTable& table() {
  static const MaterialTable t = builtin_table();
  return t;
}

// 1. Material fidelity.
Outcome material_fidelity() {
  Outcome o;
  const auto t0 = std::chrono::steady_clock::now();
  std::ostringstream out, err;
  const int code = run_cli({"materials"}, out, err);
  const double took = seconds_since(t0);
  if (code != 0) o.fail("materials exited " + std::to_string(code));
  struct Want {
    const char* name;
    const char* feed;
  };
  const Want want[] = {{"tpu_nylon_light", "200"}, {"tpu_nylon_medium", "160"}, {"tpu_nylon_heavy", "100"},
                       {"velostat", "250"},        {"pet_film", "120"}};
  std::istringstream in(out.str());
  std::vector<std::string> rows;
  for (std::string line; std::getline(in, line);) rows.push_back(line);
  for (const Want& w : want) {
    bool found = false;
    for (const std::string& row : rows) {
      std::istringstream fields(row);
      std::vector<std::string> f;
      for (std::string s; fields >> s;) f.push_back(s);
      if (f.empty() || f[0] != w.name) continue;
      found = true;
      const auto unit = std::find(f.begin(), f.end(), "mm/min");
      if (unit == f.begin() || unit == f.end() || *(unit - 1) != w.feed) o.fail(std::string(w.name) + " row: " + row);
    }
    if (!found) o.fail(std::string("no row for ") + w.name);
  }
  if (took >= 1.0) o.fail("took " + num(took) + " s");
  o.note(std::to_string(rows.size()) + " rows in " + num(took * 1000) + " ms");
  return o;
}

// 2. Reference corpus on the 720 x 420 profile.
Outcome corpus_pipeline() {
  Outcome o;
  MachineProfile m;
  if (m.travel.x != 720 || m.travel.y != 420) o.fail("default travel is not 720 x 420");
  const auto t0 = std::chrono::steady_clock::now();
  for (const std::string& name : corpus_names()) {
    try {
      const PatternSheet s = generate(corpus_design(name));
      const ValidationReport r = validate_sheet(s, m);
      if (r.count(Severity::Error) != 0) o.fail(name + ": " + std::to_string(r.count(Severity::Error)) + " errors");
      const Toolpath tp = plan(s, m, table());
      const std::string text = emit_text(tp, m, name);
      if (text.size() < 20 || text.substr(text.size() - 4) != "M30\n") o.fail(name + ": program not terminated");
    } catch (const Error& e) {
      o.fail(name + ": " + e.what());
    }
  }
  const double took = seconds_since(t0);
  if (took >= 5.0) o.fail("took " + num(took) + " s");
  o.note(std::to_string(corpus_names().size()) + " designs in " + num(took) + " s");
  return o;
}

// 3. Round trip.
Outcome round_trip() {
  Outcome o;
  const MachineProfile m;
  double worst_vertex = 0.0, worst_weld = 0.0;
  for (const std::string& name : corpus_names()) {
    const PatternSheet s = generate(corpus_design(name));
    const Toolpath tp = plan(s, m, table());
    const RoundTripReport r = roundtrip_check(tp, m);
    worst_vertex = std::max(worst_vertex, r.max_deviation);
    if (!r.vertex_count_matches) o.fail(name + ": vertex count differs");
    if (!r.channel_order_matches) o.fail(name + ": channel order differs");
    if (!(r.max_deviation < 1e-6)) o.fail(name + ": vertex deviation " + num(r.max_deviation));
    double sheet = 0.0;
    for (const WeldPath& w : s.welds) sheet += geom::length(w.path);
    const double diff = std::abs(r.simulated_weld_length - sheet);
    worst_weld = std::max(worst_weld, diff);
    if (!(diff <= 1e-6)) {
      o.fail(name + ": welder-on " + num(r.simulated_weld_length, 12) + " vs weld paths " + num(sheet, 12) +
             " (|d| = " + num(diff) + " mm; planned on the 1 um grid: " + num(r.planned_weld_length, 12) + ")");
    }
  }
  o.note("max vertex deviation " + num(worst_vertex) + " mm, max weld-length gap " + num(worst_weld) + " mm");
  return o;
}

// 4. Welder switching in pulsed mode.
Outcome welder_switching() {
  Outcome o;
  std::mt19937 rng(250);
  std::uniform_real_distribution<double> feed(60, 400), duty(0.05, 0.95), period(500, 4000);
  double shortest = 1e9;
  std::size_t intervals = 0;
  for (int i = 0; i < 50; ++i) {
    const std::string& name = corpus_names()[static_cast<std::size_t>(i) % corpus_names().size()];
    MachineProfile m;
    m.weld_feed = feed(rng);
    const WeldMode mode = WeldMode::pulse(duty(rng), period(rng));
    try {
      const Toolpath tp = plan(generate(corpus_design(name)), m, table(), mode);
      const SimReport r = simulate(emit(tp, m), m);
      const auto gaps = r.switch_intervals("welder_power");
      if (gaps.empty()) o.fail(name + ": no welder switching");
      for (double g : gaps) {
        shortest = std::min(shortest, g);
        ++intervals;
        if (g < 0.25) o.fail(name + " setting " + std::to_string(i) + ": interval " + num(g * 1000, 6) + " ms");
      }
    } catch (const Error& e) {
      o.fail(name + " setting " + std::to_string(i) + ": " + e.what());
    }
  }
  o.note(std::to_string(intervals) + " intervals, shortest " + num(shortest * 1000, 6) + " ms");
  return o;
}

std::vector<Polyline> random_segments(std::mt19937& rng, int n) {
  std::uniform_real_distribution<double> x(0, 700), y(0, 400), len(2, 40), ang(0, 2 * std::numbers::pi);
  std::vector<Polyline> out;
  for (int i = 0; i < n; ++i) {
    const Point a{x(rng), y(rng)};
    const double t = ang(rng), l = len(rng);
    out.push_back(Polyline{{a, {a.x + l * std::cos(t), a.y + l * std::sin(t)}}});
  }
  return out;
}

double exhaustive(const std::vector<Polyline>& paths, Point start) {
  std::vector<std::size_t> order(paths.size());
  std::iota(order.begin(), order.end(), 0);
  double best = 1e18;
  do {
    for (unsigned mask = 0; mask < (1u << paths.size()); ++mask) {
      std::vector<bool> rev(paths.size());
      for (std::size_t k = 0; k < paths.size(); ++k) rev[k] = (mask >> k) & 1u;
      best = std::min(best, order_travel(paths, start, order, rev));
    }
  } while (std::next_permutation(order.begin(), order.end()));
  return best;
}

// 5. Ordering quality.
Outcome ordering_quality() {
  Outcome o;
  for (unsigned seed = 1; seed <= 100; ++seed) {
    std::mt19937 rng(seed);
    const auto paths = random_segments(rng, 50);
    const double planned = order_paths(paths, {0, 0}).travel;
    const double nn = nearest_neighbor(paths, {0, 0}).travel;
    std::vector<std::size_t> order(paths.size());
    std::iota(order.begin(), order.end(), 0);
    std::shuffle(order.begin(), order.end(), rng);
    std::vector<bool> rev(paths.size());
    for (std::size_t k = 0; k < rev.size(); ++k) rev[k] = rng() & 1u;
    const double shuffled = order_travel(paths, {0, 0}, order, rev);
    if (!(planned <= nn && nn <= shuffled)) {
      o.fail("seed " + std::to_string(seed) + ": " + num(planned, 9) + " / " + num(nn, 9) + " / " + num(shuffled, 9));
    }
  }
  double worst = 0.0;
  int small = 0;
  for (unsigned seed = 1; seed <= 120; ++seed) {
    std::mt19937 rng(10000 + seed);
    const int n = 1 + static_cast<int>(seed % 6);
    const auto paths = random_segments(rng, n);
    const double opt = exhaustive(paths, {0, 0});
    const double got = order_paths(paths, {0, 0}).travel;
    const double ratio = opt > 0 ? got / opt : 1.0;
    worst = std::max(worst, ratio);
    ++small;
    if (ratio > 1.15) o.fail("small seed " + std::to_string(seed) + ": " + num(ratio, 6) + " x optimum");
  }
  o.note("100 large instances; " + std::to_string(small) + " small, worst " + num(worst, 6) + " x optimum");
  return o;
}

double raster_reference(const std::vector<Polyline>& a, const Polyline& b, double step) {
  double best = 1e18;
  for (const Polyline& p : a) {
    const double len = geom::length(p);
    const int n = std::max(1, static_cast<int>(std::ceil(len / step)));
    for (int i = 0; i <= n; ++i) best = std::min(best, geom::min_distance(geom::point_at(p, len * i / n), b));
  }
  return best;
}

// 6. Geometry kernel.
Outcome geometry_kernel() {
  Outcome o;
  std::mt19937 rng(6);
  std::uniform_real_distribution<double> r(1.0, 60.0), d(0.05, 10.0), ph(0.0, 1.0), stretch(0.3, 1.0);
  double worst_area = 0.0;
  for (int i = 0; i < 100; ++i) {
    const int n = 3 + i % 10;
    const double rr = r(rng), sy = stretch(rng), phase = ph(rng);
    Polygon p;
    for (int k = 0; k < n; ++k) {
      const double t = phase + 2 * std::numbers::pi * k / n;
      p.points.push_back({100 + rr * std::cos(t), 100 + sy * rr * std::sin(t)});
    }
    const double dd = d(rng);
    double got = 0.0;
    for (const Polygon& part : geom::offset(p, dd)) got += geom::area(part);
    const double expect = geom::area(p) + geom::perimeter(p) * dd + std::numbers::pi * dd * dd;
    worst_area = std::max(worst_area, std::abs(got - expect));
    if (!(std::abs(got - expect) <= 0.01)) o.fail("polygon " + std::to_string(i) + ": area off by " + num(got - expect));
  }
  std::uniform_real_distribution<double> c(0, 40), u(-12, 12);
  std::uniform_int_distribution<int> pts(2, 5);
  double worst_dist = 0.0;
  for (int i = 0; i < 200; ++i) {
    auto make = [&] {
      Polyline p;
      const Point centre{c(rng), c(rng)};
      const int k = pts(rng);
      for (int j = 0; j < k; ++j) p.points.push_back({centre.x + u(rng), centre.y + u(rng)});
      return p;
    };
    const Polyline a = make(), b = make();
    const double oracle = std::min(raster_reference({a}, b, 0.005), raster_reference({b}, a, 0.005));
    const double got = geom::min_distance(a, b);
    worst_dist = std::max(worst_dist, std::abs(got - oracle));
    if (!(std::abs(got - oracle) <= 0.02)) o.fail("pair " + std::to_string(i) + ": " + num(got) + " vs " + num(oracle));
  }
  o.note("worst area error " + num(worst_area) + " mm2, worst distance error " + num(worst_dist) + " mm");
  return o;
}

// 7. Estimator sanity band.
Outcome estimator_band() {
  Outcome o;
  // 2/pi as the chord-to-arc ratio of a half circle, by quadrature.
  const int n = 4000;
  double sum = 0.0;
  for (int i = 0; i <= n; ++i) {
    const double w = (i == 0 || i == n) ? 1 : (i % 2 ? 4 : 2);
    sum += w * std::cos(std::numbers::pi * (static_cast<double>(i) / n - 0.5));
  }
  const double ratio = sum / n / 3.0;
  const double ideal = contraction_for_fraction(1.0);
  if (std::abs(ideal - (1.0 - ratio)) > 1e-9) o.fail("ideal contraction " + num(ideal, 9) + " vs quadrature");
  const auto& ref = reference_table();
  const ReferenceResult* linear = nullptr;
  const ReferenceResult* conductive = nullptr;
  for (const ReferenceResult& r : ref) {
    if (r.family == Family::LinearPneunet && r.variant == "velostat") conductive = &r;
    else if (r.family == Family::LinearPneunet) linear = &r;
  }
  if (!linear || linear->strain != 0.34) o.fail("linear reference is not 0.34");
  if (!conductive || conductive->strain != 0.32) o.fail("conductive reference is not 0.32");
  if (linear && !(std::abs(ideal - linear->strain) < 0.05)) o.fail("model outside 0.05 of 0.34");
  o.note("model " + num(ideal, 4) + " vs measured 0.34");
  return o;
}

// 8. Determinism goldens.
Outcome goldens() {
  Outcome o;
  for (const std::string& name : corpus_names()) {
    const std::string g1 = corpus_gcode(name), g2 = corpus_gcode(name);
    const std::string s1 = corpus_svg(name), s2 = corpus_svg(name);
    if (g1 != g2 || s1 != s2) o.fail(name + ": output differs between runs");
    if (g1 != golden(name + ".gcode")) o.fail(name + ".gcode differs from golden");
    if (s1 != golden(name + ".svg")) o.fail(name + ".svg differs from golden");
  }
  o.note(std::to_string(2 * corpus_names().size()) + " golden files");
  return o;
}

// 9. Parser robustness.
Outcome parser_robustness() {
  Outcome o;
  std::vector<std::string> designs;
  for (const std::string& name : corpus_names()) designs.push_back(corpus_text(name));
  std::vector<std::string> programs;
  for (const char* name : {"rect_pouch", "linear_pneunet", "twisting_30"}) programs.push_back(corpus_gcode(name));
  const FuzzTally a = fuzz_design_parser(designs, 10000, 90001);
  const FuzzTally b = fuzz_gcode_parser(programs, 10000, 90002);
  if (a.cases != 10000 || a.unstructured) o.fail("design parser: " + a.first_unstructured);
  if (b.cases != 10000 || b.unstructured) o.fail("g-code parser: " + b.first_unstructured);
  o.note("design " + std::to_string(a.diagnosed) + " diagnosed / " + std::to_string(a.accepted) + " accepted; g-code " +
         std::to_string(b.diagnosed) + " / " + std::to_string(b.accepted));
  return o;
}

}  // namespace

int main() {
  struct Criterion {
    const char* title;
    std::function<Outcome()> run;
  };
  const std::vector<Criterion> criteria{
      {"material fidelity", material_fidelity},   {"corpus generates, validates, plans, emits", corpus_pipeline},
      {"round trip", round_trip},                 {"welder switching >= 250 ms", welder_switching},
      {"ordering quality", ordering_quality},     {"geometry kernel", geometry_kernel},
      {"estimator sanity band", estimator_band},  {"determinism goldens", goldens},
      {"parser robustness", parser_robustness},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].run();
    } catch (const std::exception& e) {
      o.fail(std::string("exception: ") + e.what());
    }
    if (!o.pass) ++failed;
    std::cout << "criterion " << i + 1 << ": " << (o.pass ? "PASS" : "FAIL") << "  " << criteria[i].title;
    if (!o.notes.empty()) std::cout << " (" << o.notes.back() << ")";
    std::cout << '\n';
    if (!o.pass)
      for (std::size_t k = 0; k + 1 < o.notes.size(); ++k) std::cout << "    " << o.notes[k] << '\n';
  }
  std::cout << (criteria.size() - static_cast<std::size_t>(failed)) << "/" << criteria.size() << " criteria passed\n";
  return failed ? 1 : 0;
}
