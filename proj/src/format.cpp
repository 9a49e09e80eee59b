#include "pneufab/format.hpp"
#include "pneufab/error.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>

namespace pneufab {

std::string_view code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::Syntax: return "E_SYNTAX";
    case ErrorCode::DupKey: return "E_DUP_KEY";
    case ErrorCode::DupSection: return "E_DUP_SECTION";
    case ErrorCode::UnknownKey: return "E_UNKNOWN_KEY";
    case ErrorCode::MissingKey: return "E_MISSING_KEY";
    case ErrorCode::BadValue: return "E_BAD_VALUE";
    case ErrorCode::UnknownMaterial: return "E_UNKNOWN_MATERIAL";
    case ErrorCode::Degenerate: return "E_DEGENERATE";
    case ErrorCode::ParamsInfeasible: return "E_PARAMS_INFEASIBLE";
    case ErrorCode::BedExceeded: return "E_BED_EXCEEDED";
    case ErrorCode::NotValidated: return "E_NOT_VALIDATED";
    case ErrorCode::PulseTooShort: return "E_PULSE_TOO_SHORT";
    case ErrorCode::GcodeSyntax: return "E_GCODE_SYNTAX";
    case ErrorCode::UnsupportedWord: return "E_UNSUPPORTED_WORD";
    case ErrorCode::NoFeed: return "E_NO_FEED";
    case ErrorCode::UnsupportedFamily: return "E_UNSUPPORTED_FAMILY";
    case ErrorCode::Io: return "E_IO";
  }
  return "E_UNKNOWN";
}

namespace {

std::string describe(ErrorCode code, const std::string& message,
                     std::optional<int> line, std::optional<int> column) {
  std::string out(code_name(code));
  if (line) {
    out += ": line " + std::to_string(*line);
    if (column) out += ", column " + std::to_string(*column);
  }
  out += ": " + message;
  return out;
}

}  // namespace

Error::Error(ErrorCode code, std::string message, std::optional<int> line,
             std::optional<int> column, std::vector<int> related_lines)
    : std::runtime_error(describe(code, message, line, column)),
      code_(code),
      message_(std::move(message)),
      line_(line),
      column_(column),
      related_(std::move(related_lines)) {}

std::string fixed(double value, int decimals) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", decimals, value);
  std::string s(buf);
  if (s[0] == '-' && s.find_first_not_of("-0.") == std::string::npos) {
    s.erase(0, 1);
  }
  return s;
}

std::string minimal_decimal(double value) {
  if (value == 0.0) return "0";
  char buf[400];
  auto res = std::to_chars(buf, buf + sizeof buf, value, std::chars_format::fixed);
  return std::string(buf, res.ptr);
}

std::string trimmed(double value, int max_decimals) {
  const double scale = std::pow(10.0, max_decimals);
  return minimal_decimal(std::round(value * scale) / scale);
}

}  // namespace pneufab
