#include "pneufab/values.hpp"

#include <charconv>
#include <cmath>

#include "pneufab/error.hpp"

namespace pneufab {

double to_number(const Value& v, int line) {
  if (v.kind != Value::Kind::Number) {
    throw Error(ErrorCode::BadValue, "expected a number, got '" + v.text + "'", line, v.column);
  }
  double out = 0.0;
  const char* first = v.text.data();
  const char* last = first + v.text.size();
  auto res = std::from_chars(first, last, out);
  if (res.ec != std::errc() || res.ptr != last || !std::isfinite(out)) {
    throw Error(ErrorCode::BadValue, "number out of range '" + v.text + "'", line, v.column);
  }
  return out;
}

namespace {

const Value& single(const Entry& e) {
  if (e.items.size() != 1) {
    throw Error(ErrorCode::BadValue, "'" + e.key + "' takes a single value", e.line, e.column);
  }
  return e.items.front();
}

}  // namespace

double single_number(const Entry& e) { return to_number(single(e), e.line); }

double positive_number(const Entry& e) {
  const double v = single_number(e);
  if (!(v > 0.0)) throw Error(ErrorCode::BadValue, "'" + e.key + "' must be > 0", e.line, e.column);
  return v;
}

long integer(const Entry& e) {
  const Value& v = single(e);
  const double d = to_number(v, e.line);
  if (v.text.find('.') != std::string::npos || std::abs(d) > 1e9) {
    throw Error(ErrorCode::BadValue, "'" + e.key + "' must be an integer", e.line, v.column);
  }
  return static_cast<long>(d);
}

const std::string& single_ident(const Entry& e) {
  const Value& v = single(e);
  if (v.kind != Value::Kind::Ident) {
    throw Error(ErrorCode::BadValue, "'" + e.key + "' must be an identifier", e.line, v.column);
  }
  return v.text;
}

const std::string& single_text(const Entry& e) {
  const Value& v = single(e);
  if (v.kind == Value::Kind::Number) {
    throw Error(ErrorCode::BadValue, "'" + e.key + "' must be a name or quoted string", e.line,
                v.column);
  }
  return v.text;
}

std::vector<double> number_list(const Entry& e, std::size_t count) {
  if (e.items.size() != count) {
    throw Error(ErrorCode::BadValue,
                "'" + e.key + "' takes " + std::to_string(count) + " comma-separated numbers",
                e.line, e.column);
  }
  std::vector<double> out;
  for (const Value& v : e.items) out.push_back(to_number(v, e.line));
  return out;
}

const Entry* KeyReader::take(std::string_view key) {
  for (std::size_t i = 0; i < section_.entries.size(); ++i) {
    if (section_.entries[i].key == key) {
      taken_[i] = true;
      return &section_.entries[i];
    }
  }
  return nullptr;
}

const Entry& KeyReader::require(std::string_view key) {
  if (const Entry* e = take(key)) return *e;
  throw Error(ErrorCode::MissingKey,
              "missing key '" + std::string(key) + "' in [" + section_.name + "]", section_.line);
}

std::vector<const Entry*> KeyReader::take_prefixed(std::string_view prefix) {
  std::vector<const Entry*> out;
  for (std::size_t i = 0; i < section_.entries.size(); ++i) {
    if (!taken_[i] && section_.entries[i].key.starts_with(prefix)) {
      taken_[i] = true;
      out.push_back(&section_.entries[i]);
    }
  }
  return out;
}

void KeyReader::finish() const {
  for (std::size_t i = 0; i < section_.entries.size(); ++i) {
    if (!taken_[i]) {
      const Entry& e = section_.entries[i];
      throw Error(ErrorCode::UnknownKey,
                  "unknown key '" + e.key + "' in [" + section_.name + "]", e.line, e.column);
    }
  }
}

}  // namespace pneufab
