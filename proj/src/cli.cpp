#include "pneufab/cli.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iomanip>
#include <optional>
#include <ostream>
#include <sstream>

#include "pneufab/design.hpp"
#include "pneufab/error.hpp"
#include "pneufab/estimate.hpp"
#include "pneufab/format.hpp"
#include "pneufab/gcode.hpp"
#include "pneufab/machine.hpp"
#include "pneufab/materials.hpp"
#include "pneufab/patterns.hpp"
#include "pneufab/preview.hpp"
#include "pneufab/toolpath.hpp"
#include "pneufab/validate.hpp"

namespace pneufab {

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::Io, "cannot read '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out || !(out << text) || !out.flush()) throw Error(ErrorCode::Io, "cannot write '" + path + "'");
}

struct Options {
  std::string input;
  std::string machine;
  std::string materials;
  std::string out;
  std::string weld_mode = "continuous";
  std::string format = "svg";
};

struct Context {
  MachineProfile machine;
  MaterialTable materials;
};

Context load_context(const Options& o) {
  Context c;
  c.materials = builtin_table();
  if (!o.materials.empty()) c.materials = load_materials(read_file(o.materials), c.materials);
  if (!o.machine.empty()) c.machine = load_machine(read_file(o.machine));
  return c;
}

ActuatorDesign load_design(const Options& o, const Context& c) {
  return to_typed(parse_design(read_file(o.input)), c.materials);
}

WeldMode parse_weld_mode(const std::string& s) {
  if (s == "continuous") return WeldMode::continuous();
  const std::string prefix = "pulsed:";
  if (s.rfind(prefix, 0) == 0) {
    const std::string rest = s.substr(prefix.size());
    const auto colon = rest.find(':');
    if (colon != std::string::npos) {
      try {
        std::size_t a = 0, b = 0;
        const std::string duty_text = rest.substr(0, colon), period_text = rest.substr(colon + 1);
        const double duty = std::stod(duty_text, &a);
        const double period = std::stod(period_text, &b);
        if (a == duty_text.size() && b == period_text.size()) return WeldMode::pulse(duty / 100.0, period);
      } catch (const std::exception&) {
      }
    }
  }
  throw Error(ErrorCode::BadValue, "--weld-mode takes continuous or pulsed:<duty%>:<period_ms>");
}

std::string with_extension(const std::string& path, const std::string& ext) {
  return std::filesystem::path(path).replace_extension(ext).string();
}

std::string material_rows(const MaterialTable& t) {
  std::ostringstream os;
  for (const Material* m : t.list()) {
    os << std::left << std::setw(18) << m->name << ' ' << std::setw(10) << to_string(m->weight_class) << ' '
       << std::right << std::setw(4) << (m->areal_weight > 0 ? trimmed(m->areal_weight, 1) : std::string("-"))
       << " g/m2  " << std::setw(4) << trimmed(m->weld_feed, 3) << " mm/min  " << std::left << std::setw(4)
       << to_string(m->coating) << "  ptfe=" << m->ptfe_layers << '\n';
  }
  return os.str();
}

std::string action_listing(const Toolpath& tp, const MachineProfile& m) {
  std::ostringstream os;
  for (std::size_t i = 0; i < tp.actions.size(); ++i) {
    const ToolAction& a = tp.actions[i];
    os << i << ' ';
    switch (a.kind) {
      case ToolAction::Kind::Rapid:
        os << "rapid " << fixed(a.to.x, 3) << ' ' << fixed(a.to.y, 3) << ' ' << fixed(a.to.z, 3);
        break;
      case ToolAction::Kind::Move:
        os << "move " << fixed(a.to.x, 3) << ' ' << fixed(a.to.y, 3) << ' ' << fixed(a.to.z, 3) << " F"
           << trimmed(a.feed, 3);
        break;
      case ToolAction::Kind::ToolSelect: os << "tool " << to_string(a.tool); break;
      case ToolAction::Kind::ChannelOn: os << "on " << to_string(a.channel); break;
      case ToolAction::Kind::ChannelOff: os << "off " << to_string(a.channel); break;
      case ToolAction::Kind::Dwell: os << "dwell " << trimmed(a.ms, 3) << " ms"; break;
      case ToolAction::Kind::KnifeAngle: os << "knife " << fixed(a.deg, 3); break;
    }
    os << '\n';
  }
  const PathTotals t = totals(tp);
  os << "weld feed: " << trimmed(tp.weld_feed, 3) << " mm/min\n";
  os << "weld length: " << fixed(t.weld, 3) << " mm\n";
  os << "cut length: " << fixed(t.cut, 3) << " mm\n";
  os << "rapid length: " << fixed(t.rapid, 3) << " mm\n";
  (void)m;
  return os.str();
}

void emit_output(const Options& o, const std::string& text, std::ostream& out) {
  if (o.out.empty() || o.out == "-") {
    out << text;
  } else {
    write_file(o.out, text);
  }
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"pneufab: inflatable actuator designs to weld/cut G-code", "pneufab"};
  app.require_subcommand(1);
  Options o;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--machine", o.machine, "Machine profile file");
    sub->add_option("--materials", o.materials, "Extra material file");
  };

  CLI::App* materials = app.add_subcommand("materials", "List the material table");
  materials->add_option("--materials", o.materials, "Extra material file");

  CLI::App* validate = app.add_subcommand("validate", "Generate and validate a design");
  validate->add_option("design", o.input, "Design file")->required();
  add_common(validate);

  CLI::App* preview = app.add_subcommand("preview", "Render the pattern sheet");
  preview->add_option("design", o.input, "Design file")->required();
  preview->add_option("--out", o.out, "Output path (default: stdout)");
  preview->add_option("--format", o.format, "svg or txt")->check(CLI::IsMember({"svg", "txt"}));
  add_common(preview);

  CLI::App* plan_cmd = app.add_subcommand("plan", "Plan the toolpath and list its actions");
  plan_cmd->add_option("design", o.input, "Design file")->required();
  plan_cmd->add_option("--out", o.out, "Output path (default: stdout)");
  plan_cmd->add_option("--weld-mode", o.weld_mode, "continuous | pulsed:<duty%>:<period_ms>");
  add_common(plan_cmd);

  CLI::App* gcode = app.add_subcommand("gcode", "Compile a design to G-code");
  gcode->add_option("design", o.input, "Design file")->required();
  gcode->add_option("--out", o.out, "Output path (default: design path with .gcode)");
  gcode->add_option("--weld-mode", o.weld_mode, "continuous | pulsed:<duty%>:<period_ms>");
  add_common(gcode);

  CLI::App* sim = app.add_subcommand("simulate", "Simulate an existing G-code file");
  sim->add_option("program", o.input, "G-code file")->required();
  sim->add_option("--machine", o.machine, "Machine profile file");

  CLI::App* est = app.add_subcommand("estimate", "Contraction estimate and reference data");
  est->add_option("design", o.input, "Design file")->required();
  add_common(est);

  std::vector<std::string> argv = args;
  std::reverse(argv.begin(), argv.end());
  try {
    app.parse(argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "pneufab: " << e.what() << '\n';
    return 1;
  }

  try {
    const Context ctx = load_context(o);

    if (*materials) {
      out << material_rows(ctx.materials);
      return 0;
    }
    if (*sim) {
      const SimReport r = simulate(parse_gcode(read_file(o.input)), ctx.machine);
      out << r.summary();
      for (const Excursion& x : r.excursions) {
        out << "excursion line " << x.line << ' ' << x.axis << '=' << fixed(x.value, 3) << " ("
            << fixed(x.beyond, 3) << " mm outside)\n";
      }
      return r.excursions.empty() ? 0 : 2;
    }

    const ActuatorDesign design = load_design(o, ctx);
    if (*est) {
      out << estimate_report(design);
      return 0;
    }

    const PatternSheet sheet = generate_unchecked(design, {}, &ctx.materials);
    if (*validate) {
      const ValidationReport report = validate_sheet(sheet, ctx.machine);
      out << report.text();
      return report.passed() ? 0 : 2;
    }
    if (*preview) {
      emit_output(o, o.format == "txt" ? dump_sheet(sheet) : render_svg(sheet, {}, nullptr), out);
      return 0;
    }

    const ValidationReport report = validate_sheet(sheet, ctx.machine);
    if (!report.passed()) {
      err << report.text();
      return 2;
    }
    const Toolpath tp = plan(sheet, ctx.machine, ctx.materials, parse_weld_mode(o.weld_mode));
    if (*plan_cmd) {
      emit_output(o, action_listing(tp, ctx.machine), out);
      return 0;
    }
    // gcode
    const std::string title = design.name + " " + std::string(to_string(design.family));
    const std::string text = emit_text(tp, ctx.machine, title);
    const std::string path = o.out.empty() ? with_extension(o.input, ".gcode") : o.out;
    if (path == "-") {
      out << text;
    } else {
      write_file(path, text);
      out << "wrote " << path << '\n';
    }
    const SimReport r = simulate(parse_gcode(text), ctx.machine);
    (path == "-" ? err : out) << r.summary();
    if (mixed_feed_stack(ctx.materials, design.layers.layers)) {
      (path == "-" ? err : out) << "note: mixed stack welded at the slowest feed, " << trimmed(tp.weld_feed, 3)
                                << " mm/min\n";
    }
    return 0;
  } catch (const Error& e) {
    err << "pneufab: " << (o.input.empty() ? "" : o.input + ": ") << e.what() << '\n';
    return 1;
  }
}

}  // namespace pneufab
