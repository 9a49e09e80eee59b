#pragma once

// Typed access to document entries. Used by the design, material and
// machine-profile readers; all failures are E_BAD_VALUE with a line.

#include <string>
#include <string_view>
#include <vector>

#include "pneufab/document.hpp"

namespace pneufab {

double to_number(const Value& v, int line);

double single_number(const Entry& e);
double positive_number(const Entry& e);
long integer(const Entry& e);
const std::string& single_ident(const Entry& e);
/// Identifier or quoted string.
const std::string& single_text(const Entry& e);
std::vector<double> number_list(const Entry& e, std::size_t count);

/// Hands out entries of one section and rejects whatever was not taken.
class KeyReader {
 public:
  explicit KeyReader(const Section& s) : section_(s), taken_(s.entries.size(), false) {}

  const Entry* take(std::string_view key);
  /// Throws E_MISSING_KEY.
  const Entry& require(std::string_view key);
  /// Entries whose key starts with `prefix`, in file order.
  std::vector<const Entry*> take_prefixed(std::string_view prefix);
  /// Throws E_UNKNOWN_KEY for the first entry never taken.
  void finish() const;

 private:
  const Section& section_;
  std::vector<bool> taken_;
};

}  // namespace pneufab
