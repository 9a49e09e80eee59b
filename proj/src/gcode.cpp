#include "pneufab/gcode.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <optional>
#include <sstream>

#include "pneufab/error.hpp"
#include "pneufab/format.hpp"

namespace pneufab {

const GWord* GLine::find(char letter) const {
  for (const GWord& w : words)
    if (w.letter == letter) return &w;
  return nullptr;
}

// --- emit ----------------------------------------------------------------------

namespace {

std::string channel_line(const OutputChannel& c, bool on) {
  std::string s = "M" + std::to_string(on ? c.on_code : c.off_code);
  if (c.output >= 0) s += " P" + std::to_string(c.output);
  return s;
}

std::string clean_comment(std::string_view s) {
  std::string out;
  for (char c : s) out.push_back((c == '(' || c == ')' || c == '\n' || c == '\r') ? '_' : c);
  return out;
}

}  // namespace

std::string emit_text(const Toolpath& tp, const MachineProfile& m, std::string_view title) {
  std::ostringstream os;
  os << "(pneufab";
  if (!title.empty()) os << ' ' << clean_comment(title);
  os << ")\n";
  os << "G21 G90\n";

  Point3 at{};
  std::optional<double> feed;
  bool has_a = false;
  double pending_a = 0.0;
  for (const ToolAction& a : tp.actions) {
    switch (a.kind) {
      case ToolAction::Kind::Rapid:
      case ToolAction::Kind::Move: {
        const bool rapid = a.kind == ToolAction::Kind::Rapid;
        std::string line = rapid ? "G0" : "G1";
        const std::string x = fixed(a.to.x, 3), y = fixed(a.to.y, 3), z = fixed(a.to.z, 3);
        bool any = false;
        const bool dx = x != fixed(at.x, 3), dy = y != fixed(at.y, 3);
        // Rapids always position both planar axes.
        if (dx || (rapid && dy)) line += " X" + x, any = true;
        if (dy || (rapid && dx)) line += " Y" + y, any = true;
        if (z != fixed(at.z, 3)) line += " Z" + z, any = true;
        if (has_a) {
          line += " A" + fixed(pending_a, 3);
          has_a = false;
        } else if (!any) {
          line += " X" + x + " Y" + y;
        }
        if (!rapid && (!feed || *feed != a.feed)) {
          line += " F" + trimmed(a.feed, 3);
          feed = a.feed;
        }
        os << line << '\n';
        at = a.to;
        break;
      }
      case ToolAction::Kind::ToolSelect:
        os << "(tool: " << to_string(a.tool) << ")\n";
        break;
      case ToolAction::Kind::ChannelOn:
        os << channel_line(m.channel(a.channel), true) << '\n';
        break;
      case ToolAction::Kind::ChannelOff:
        os << channel_line(m.channel(a.channel), false) << '\n';
        break;
      case ToolAction::Kind::Dwell:
        os << "G4 P" << fixed(a.ms / 1000.0, 3) << '\n';
        break;
      case ToolAction::Kind::KnifeAngle:
        pending_a = a.deg;
        has_a = true;
        break;
    }
  }
  if (has_a) os << "G0 A" << fixed(pending_a, 3) << '\n';
  os << "M30\n";
  return os.str();
}

GProgram emit(const Toolpath& tp, const MachineProfile& m, std::string_view title) {
  return parse_gcode(emit_text(tp, m, title));
}

// --- parse ---------------------------------------------------------------------

namespace {

[[noreturn]] void syntax(int line, int col, const std::string& msg) {
  throw Error(ErrorCode::GcodeSyntax, msg, line, col);
}

bool allowed_g(int g) { return g == 0 || g == 1 || g == 4 || g == 21 || g == 90; }
bool allowed_m(int m) { return m == 30 || is_switch_code(m); }

}  // namespace

GProgram parse_gcode(std::string_view text) {
  GProgram prog;
  prog.source = std::string(text);
  int number = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view raw = text.substr(pos, end - pos);
    pos = end + 1;
    ++number;
    if (!raw.empty() && raw.back() == '\r') raw.remove_suffix(1);

    GLine line;
    line.number = number;
    std::size_t i = 0;
    auto col = [&] { return static_cast<int>(i) + 1; };
    while (i < raw.size()) {
      const char c = raw[i];
      if (c == ' ' || c == '\t') {
        ++i;
        continue;
      }
      if (c == '(') {
        const std::size_t close = raw.find(')', i);
        if (close == std::string_view::npos) syntax(number, col(), "unterminated comment");
        const std::string_view body = raw.substr(i + 1, close - i - 1);
        if (body.find('(') != std::string_view::npos) syntax(number, col(), "nested comment");
        if (!line.comment.empty()) line.comment += ' ';
        line.comment += std::string(body);
        i = close + 1;
        continue;
      }
      const unsigned char uc = static_cast<unsigned char>(c);
      if (!std::isalpha(uc)) syntax(number, col(), "expected a word letter");
      const char letter = static_cast<char>(std::toupper(uc));
      const int word_col = col();
      ++i;
      std::size_t j = i;
      if (j < raw.size() && (raw[j] == '+' || raw[j] == '-')) ++j;
      const std::size_t digits_start = j;
      while (j < raw.size() && (std::isdigit(static_cast<unsigned char>(raw[j])) || raw[j] == '.')) ++j;
      std::string_view num = raw.substr(i, j - i);
      if (j == digits_start || std::count(num.begin(), num.end(), '.') > 1 ||
          num.substr(digits_start - i) == ".") {
        syntax(number, word_col, std::string("word ") + letter + " needs a number");
      }
      std::string tmp(num);
      if (tmp.front() == '+') tmp.erase(0, 1);
      double v = 0.0;
      auto res = std::from_chars(tmp.data(), tmp.data() + tmp.size(), v);
      if (res.ec != std::errc() || res.ptr != tmp.data() + tmp.size() || !std::isfinite(v)) {
        syntax(number, word_col, "bad number '" + std::string(num) + "'");
      }
      i = j;
      switch (letter) {
        case 'G':
        case 'M': {
          if (std::floor(v) != v || v < 0) syntax(number, word_col, std::string(1, letter) + " code must be an integer");
          const int code = static_cast<int>(v);
          if (letter == 'G' ? !allowed_g(code) : !allowed_m(code)) {
            throw Error(ErrorCode::UnsupportedWord,
                        std::string(1, letter) + std::to_string(code) + " is outside the supported dialect", number,
                        word_col);
          }
          break;
        }
        case 'X': case 'Y': case 'Z': case 'A': case 'F': case 'P': break;
        default:
          throw Error(ErrorCode::UnsupportedWord, std::string("word ") + letter + " is not supported", number, word_col);
      }
      line.words.push_back({letter, v});
    }

    // Per-line structure.
    int motion = 0, m_words = 0;
    bool g4 = false, switching = false;
    for (std::size_t k = 0; k < line.words.size(); ++k) {
      const GWord& w = line.words[k];
      if (w.letter == 'G' && (w.value == 0 || w.value == 1 || w.value == 4)) ++motion;
      if (w.letter == 'G' && w.value == 4) g4 = true;
      if (w.letter == 'M') {
        ++m_words;
        if (w.value != 30) switching = true;
      }
      if (w.letter != 'G' && w.letter != 'M') {
        for (std::size_t q = 0; q < k; ++q) {
          if (line.words[q].letter == w.letter) syntax(number, 1, std::string("word ") + w.letter + " repeated");
        }
      }
    }
    if (motion > 1) syntax(number, 1, "more than one of G0/G1/G4 on a line");
    if (m_words > 1) syntax(number, 1, "more than one M word on a line");
    if (m_words && motion) syntax(number, 1, "M word mixed with a motion word");
    const GWord* p = line.find('P');
    if (p && !g4 && !switching) syntax(number, 1, "P word without G4 or an output M-code");
    if (g4 && (!p || p->value < 0)) syntax(number, 1, "G4 needs a non-negative P (seconds)");
    if (g4 && (line.find('X') || line.find('Y') || line.find('Z') || line.find('A'))) {
      syntax(number, 1, "G4 with axis words");
    }
    if (const GWord* f = line.find('F'); f && !(f->value > 0)) syntax(number, 1, "F must be > 0");
    if (m_words && (line.find('X') || line.find('Y') || line.find('Z') || line.find('A') || line.find('F'))) {
      syntax(number, 1, "M word mixed with axis words");
    }
    if (!line.words.empty() || !line.comment.empty()) prog.lines.push_back(std::move(line));
    if (end == text.size()) break;
  }
  return prog;
}

// --- simulate --------------------------------------------------------------------

namespace {

double dist3(Point3 a, Point3 b) {
  return std::sqrt((a.x - b.x) * (a.x - b.x) + (a.y - b.y) * (a.y - b.y) + (a.z - b.z) * (a.z - b.z));
}

std::string channel_name(const MachineProfile& m, int mcode, int output) {
  for (Output o : {Output::WelderPower, Output::WelderStage, Output::Knife}) {
    const OutputChannel& c = m.channel(o);
    if ((c.on_code == mcode || c.off_code == mcode) && c.output == output) return std::string(to_string(o));
  }
  return "";
}

}  // namespace

std::vector<double> SimReport::switch_intervals(std::string_view channel) const {
  std::vector<double> out;
  std::optional<double> last;
  for (const ChannelEvent& e : events) {
    if (e.name != channel) continue;
    if (last) out.push_back(e.t - *last);
    last = e.t;
  }
  return out;
}

std::string SimReport::summary() const {
  std::ostringstream os;
  os << "weld length: " << fixed(weld_length, 3) << " mm\n";
  os << "cut length: " << fixed(cut_length, 3) << " mm\n";
  os << "rapid length: " << fixed(rapid_length, 3) << " mm\n";
  os << "job time: " << fixed(job_time, 3) << " s\n";
  if (!excursions.empty()) {
    os << "envelope: " << excursions.size() << " excursion(s), max " << fixed(max_excursion, 3) << " mm\n";
  }
  return os.str();
}

SimReport simulate(const GProgram& g, const MachineProfile& m) {
  SimReport r;
  Point3 at{};
  double a = 0.0;
  std::optional<double> feed;
  int mode = -1;  // modal 0 or 1
  Tool tool = Tool::Weld;
  bool welder_on = false;
  double t = 0.0;
  WelderInterval open{};

  const OutputChannel& power = m.welder_power;
  auto check = [&](int line, char axis, double v, double lo, double hi) {
    const double beyond = v < lo ? lo - v : (v > hi ? v - hi : 0.0);
    if (beyond > 1e-9) {
      r.excursions.push_back({line, axis, v, beyond});
      r.max_excursion = std::max(r.max_excursion, beyond);
    }
  };

  for (const GLine& line : g.lines) {
    if (line.comment.rfind("tool: ", 0) == 0) {
      const std::string name = line.comment.substr(6);
      if (name == "weld") tool = Tool::Weld;
      if (name == "cut") tool = Tool::Cut;
    }
    if (line.words.empty()) continue;

    bool end = false;
    int motion = -1;
    bool dwell = false;
    for (const GWord& w : line.words) {
      if (w.letter == 'G') {
        if (w.value == 0) motion = 0;
        if (w.value == 1) motion = 1;
        if (w.value == 4) dwell = true;
      }
    }
    if (const GWord* f = line.find('F')) feed = f->value;

    if (const GWord* mw = line.find('M')) {
      const int code = static_cast<int>(mw->value);
      if (code == 30) {
        end = true;
      } else {
        const GWord* p = line.find('P');
        const int output = p ? static_cast<int>(p->value) : -1;
        ChannelEvent e{t, code, output, false, line.number, channel_name(m, code, output)};
        for (Output o : {Output::WelderPower, Output::WelderStage, Output::Knife}) {
          const OutputChannel& c = m.channel(o);
          if (c.output == output && (c.on_code == code || c.off_code == code)) e.on = c.on_code == code;
        }
        r.events.push_back(e);
        if (code == power.on_code && output == power.output && !welder_on) {
          welder_on = true;
          open = {t, t, 0.0};
        } else if (code == power.off_code && output == power.output && welder_on) {
          welder_on = false;
          open.t1 = t;
          r.welder.push_back(open);
        }
      }
    }
    if (dwell) {
      const double s = line.find('P')->value;
      t += s;
      r.dwell_time += s;
    }
    if (end) break;

    const bool has_axis = line.find('X') || line.find('Y') || line.find('Z') || line.find('A');
    if (motion >= 0) mode = motion;
    if (!has_axis) continue;
    if (mode < 0) syntax(line.number, 1, "axis words with no motion mode");
    if (mode == 1 && !feed) throw Error(ErrorCode::NoFeed, "G1 before any F word", line.number);

    SimSegment seg;
    seg.line = line.number;
    seg.rapid = mode == 0;
    seg.tool = tool;
    seg.from = at;
    Point3 to = at;
    if (const GWord* w = line.find('X')) to.x = w->value;
    if (const GWord* w = line.find('Y')) to.y = w->value;
    if (const GWord* w = line.find('Z')) to.z = w->value;
    if (const GWord* w = line.find('A')) a = w->value;
    seg.to = to;
    seg.a = a;
    seg.feed = seg.rapid ? m.rapid_rate : *feed;
    const double d = dist3(at, to);
    seg.seconds = d / seg.feed * 60.0;
    seg.welder_on = welder_on;
    t += seg.seconds;
    r.motion_time += seg.seconds;
    if (welder_on) {
      r.weld_length += d;
      open.length += d;
    }
    const double planar = std::hypot(to.x - at.x, to.y - at.y);
    if (seg.rapid) {
      r.rapid_length += planar;
    } else if (tool == Tool::Cut) {
      r.cut_length += planar;
    }
    check(line.number, 'X', to.x, 0.0, m.travel.x);
    check(line.number, 'Y', to.y, 0.0, m.travel.y);
    check(line.number, 'Z', to.z, m.z_min, m.z_min + m.travel.z);
    at = to;
    r.segments.push_back(seg);
  }
  if (welder_on) {
    open.t1 = t;
    r.welder.push_back(open);
  }
  r.job_time = t;
  return r;
}

// --- round trip ------------------------------------------------------------------

RoundTripReport compare_program(const Toolpath& tp, const MachineProfile& m, std::string_view text,
                                double tolerance) {
  RoundTripReport out;
  const SimReport sim = simulate(parse_gcode(text), m);

  std::vector<Point3> planned;
  std::vector<std::pair<std::string, bool>> planned_events;
  for (const ToolAction& a : tp.actions) {
    if (a.kind == ToolAction::Kind::Rapid || a.kind == ToolAction::Kind::Move) planned.push_back(a.to);
    if (a.kind == ToolAction::Kind::ChannelOn || a.kind == ToolAction::Kind::ChannelOff) {
      planned_events.emplace_back(std::string(to_string(a.channel)), a.kind == ToolAction::Kind::ChannelOn);
    }
  }
  // A trailing blade rotation is emitted as its own motion line.
  std::size_t sim_count = sim.segments.size();
  if (!tp.actions.empty() && tp.actions.back().kind == ToolAction::Kind::KnifeAngle && sim_count > 0) --sim_count;

  out.vertices = planned.size();
  out.vertex_count_matches = planned.size() == sim_count;
  const std::size_t n = std::min(planned.size(), sim_count);
  for (std::size_t i = 0; i < n; ++i) {
    const double d = dist3(planned[i], sim.segments[i].to);
    out.max_deviation = std::max(out.max_deviation, d);
    if (d > tolerance) out.deviations.push_back({i, sim.segments[i].line, planned[i], sim.segments[i].to, d});
  }

  std::vector<std::pair<std::string, bool>> sim_events;
  for (const ChannelEvent& e : sim.events) sim_events.emplace_back(e.name, e.on);
  out.channel_order_matches = sim_events == planned_events;

  for (const PathSpan& sp : tp.spans)
    if (sp.kind == PathSpan::Kind::Weld) out.planned_weld_length += sp.length;
  out.simulated_weld_length = sim.weld_length;
  return out;
}

RoundTripReport roundtrip_check(const Toolpath& tp, const MachineProfile& m, double tolerance) {
  return compare_program(tp, m, emit_text(tp, m), tolerance);
}

}  // namespace pneufab
