#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace pneufab {

enum class ErrorCode {
  // design files
  Syntax,
  DupKey,
  DupSection,
  UnknownKey,
  MissingKey,
  BadValue,
  UnknownMaterial,
  // geometry and generators
  Degenerate,
  ParamsInfeasible,
  // planning
  BedExceeded,
  NotValidated,
  PulseTooShort,
  // g-code
  GcodeSyntax,
  UnsupportedWord,
  NoFeed,
  // estimates
  UnsupportedFamily,
  // cli
  Io,
};

/// Stable textual code, e.g. "E_DUP_KEY".
std::string_view code_name(ErrorCode code);

/// Every failure the library reports is one of these. `line` and `column`
/// are 1-based source positions when the error came from a text input.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, std::string message, std::optional<int> line = {},
        std::optional<int> column = {}, std::vector<int> related_lines = {});

  ErrorCode code() const noexcept { return code_; }
  const std::string& message() const noexcept { return message_; }
  std::optional<int> line() const noexcept { return line_; }
  std::optional<int> column() const noexcept { return column_; }
  /// Other source lines involved (e.g. the first definition of a duplicate).
  const std::vector<int>& related_lines() const noexcept { return related_; }

 private:
  ErrorCode code_;
  std::string message_;
  std::optional<int> line_;
  std::optional<int> column_;
  std::vector<int> related_;
};

}  // namespace pneufab
