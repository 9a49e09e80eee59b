#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace pneufab {

// Line-oriented `[section]` / `key = value` text format shared by design,
// material and machine-profile files:
//
//   line    := blank | comment | section | entry
//   section := "[" ident "]"
//   entry   := ident "=" value ("," value)*
//   value   := number | ident | quoted-string
//   comment := "#" to end of line (may trail a section or entry)
//
// Numbers are `-?digits(.digits)?`; there is no exponent form.

struct Value {
  enum class Kind { Number, Ident, String };
  Kind kind = Kind::Ident;
  std::string text;  // unescaped for strings
  int column = 0;
};

struct Entry {
  std::string key;
  std::string raw;  // value text as written, comment stripped, trimmed
  std::vector<Value> items;
  int line = 0;
  int column = 0;
};

struct Section {
  std::string name;
  int line = 0;
  std::vector<Entry> entries;

  const Entry* find(std::string_view key) const;
};

struct DesignDocument {
  std::vector<Section> sections;

  const Section* find(std::string_view name) const;
};

/// Parses the grammar above. Throws pneufab::Error with E_SYNTAX,
/// E_DUP_KEY or E_DUP_SECTION; every diagnostic carries a line number.
DesignDocument parse_document(std::string_view text);

/// Design files use the plain document grammar.
inline DesignDocument parse_design(std::string_view text) { return parse_document(text); }

bool is_ident(std::string_view s);

}  // namespace pneufab
