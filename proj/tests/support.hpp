#pragma once

#include <algorithm>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "pneufab/design.hpp"
#include "pneufab/gcode.hpp"
#include "pneufab/materials.hpp"
#include "pneufab/patterns.hpp"
#include "pneufab/preview.hpp"
#include "pneufab/toolpath.hpp"

namespace testing_support {

inline std::string source_path(const std::string& rel) { return std::string(PNEUFAB_SOURCE_DIR) + "/" + rel; }

inline std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline const std::vector<std::string>& corpus_names() {
  static const std::vector<std::string> names{
      "rect_pouch",   "linear_pneunet", "bending_pneunet", "antagonistic_pneunet", "twisting_30",
      "twisting_60",  "kirigami_100",   "kirigami_125",    "kirigami_150",
  };
  return names;
}

inline std::string corpus_text(const std::string& name) { return read_text(source_path("corpus/" + name + ".pf")); }

inline pneufab::ActuatorDesign corpus_design(const std::string& name) {
  static const pneufab::MaterialTable table = pneufab::builtin_table();
  return pneufab::to_typed(pneufab::parse_design(corpus_text(name)), table);
}

inline std::string lf(std::string s) {
  s.erase(std::remove(s.begin(), s.end(), '\r'), s.end());
  return s;
}

/// The program `pneufab gcode` writes for a corpus design.
inline std::string corpus_gcode(const std::string& name) {
  const pneufab::ActuatorDesign d = corpus_design(name);
  const pneufab::MachineProfile m;
  const pneufab::Toolpath tp = pneufab::plan(pneufab::generate(d), m, pneufab::builtin_table());
  return pneufab::emit_text(tp, m, d.name + " " + std::string(pneufab::to_string(d.family)));
}

/// The preview `pneufab preview` writes for a corpus design.
inline std::string corpus_svg(const std::string& name) {
  return pneufab::render_svg(pneufab::generate_unchecked(corpus_design(name)));
}

inline std::string golden(const std::string& file) { return lf(read_text(source_path("tests/golden/" + file))); }

}  // namespace testing_support
