#include "pneufab/document.hpp"

#include <cctype>
#include <optional>

#include "pneufab/error.hpp"

namespace pneufab {

const Entry* Section::find(std::string_view key) const {
  for (const auto& e : entries)
    if (e.key == key) return &e;
  return nullptr;
}

const Section* DesignDocument::find(std::string_view name) const {
  for (const auto& s : sections)
    if (s.name == name) return &s;
  return nullptr;
}

namespace {

bool ident_start(char c) {
  return std::isalpha(static_cast<unsigned char>(c)) || c == '_';
}
bool ident_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
}
bool blank(char c) { return c == ' ' || c == '\t'; }

// Returns the byte offset of the first invalid UTF-8 sequence, if any.
std::optional<size_t> invalid_utf8(std::string_view s) {
  size_t i = 0;
  while (i < s.size()) {
    const auto c = static_cast<unsigned char>(s[i]);
    int extra = 0;
    if (c < 0x80) {
      ++i;
      continue;
    } else if ((c & 0xE0) == 0xC0 && c >= 0xC2) {
      extra = 1;
    } else if ((c & 0xF0) == 0xE0) {
      extra = 2;
    } else if ((c & 0xF8) == 0xF0 && c <= 0xF4) {
      extra = 3;
    } else {
      return i;
    }
    if (i + extra >= s.size()) return i;
    for (int k = 1; k <= extra; ++k) {
      if ((static_cast<unsigned char>(s[i + k]) & 0xC0) != 0x80) return i;
    }
    i += extra + 1;
  }
  return std::nullopt;
}

class LineParser {
 public:
  LineParser(std::string_view line, int line_no) : s_(line), line_(line_no) {}

  [[noreturn]] void fail(const std::string& what) const {
    throw Error(ErrorCode::Syntax, what, line_, static_cast<int>(pos_) + 1);
  }

  void skip_blank() {
    while (pos_ < s_.size() && blank(s_[pos_])) ++pos_;
  }
  bool at_end_or_comment() {
    skip_blank();
    return pos_ >= s_.size() || s_[pos_] == '#';
  }
  char peek() const { return pos_ < s_.size() ? s_[pos_] : '\0'; }
  size_t pos() const { return pos_; }

  std::string ident() {
    if (!ident_start(peek())) fail("expected identifier");
    const size_t start = pos_;
    while (pos_ < s_.size() && ident_char(s_[pos_])) ++pos_;
    return std::string(s_.substr(start, pos_ - start));
  }

  void expect(char c) {
    if (peek() != c) fail(std::string("expected '") + c + "'");
    ++pos_;
  }

  Value value() {
    Value v;
    v.column = static_cast<int>(pos_) + 1;
    const char c = peek();
    if (c == '"') {
      v.kind = Value::Kind::String;
      ++pos_;
      while (true) {
        if (pos_ >= s_.size()) fail("unterminated string");
        char ch = s_[pos_++];
        if (ch == '"') break;
        if (ch == '\\') {
          if (pos_ >= s_.size()) fail("unterminated escape");
          ch = s_[pos_++];
          if (ch != '"' && ch != '\\') fail("unsupported escape");
        }
        v.text.push_back(ch);
      }
    } else if (c == '-' || std::isdigit(static_cast<unsigned char>(c))) {
      v.kind = Value::Kind::Number;
      const size_t start = pos_;
      if (c == '-') ++pos_;
      if (!std::isdigit(static_cast<unsigned char>(peek()))) fail("malformed number");
      while (std::isdigit(static_cast<unsigned char>(peek()))) ++pos_;
      if (peek() == '.') {
        ++pos_;
        if (!std::isdigit(static_cast<unsigned char>(peek()))) fail("malformed number");
        while (std::isdigit(static_cast<unsigned char>(peek()))) ++pos_;
      }
      if (ident_char(peek()) || peek() == '.') fail("malformed number");
      v.text = std::string(s_.substr(start, pos_ - start));
    } else if (ident_start(c)) {
      v.kind = Value::Kind::Ident;
      v.text = ident();
    } else {
      fail("expected value");
    }
    return v;
  }

 private:
  std::string_view s_;
  int line_;
  size_t pos_ = 0;
};

std::string_view trim(std::string_view s) {
  while (!s.empty() && blank(s.front())) s.remove_prefix(1);
  while (!s.empty() && blank(s.back())) s.remove_suffix(1);
  return s;
}

}  // namespace

bool is_ident(std::string_view s) {
  if (s.empty() || !ident_start(s.front())) return false;
  for (char c : s)
    if (!ident_char(c)) return false;
  return true;
}

DesignDocument parse_document(std::string_view text) {
  DesignDocument doc;
  Section* current = nullptr;

  int line_no = 0;
  size_t start = 0;
  while (start <= text.size()) {
    size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(start, end - start);
    ++line_no;
    start = end + 1;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);

    if (auto bad = invalid_utf8(line)) {
      throw Error(ErrorCode::Syntax, "invalid UTF-8", line_no, static_cast<int>(*bad) + 1);
    }
    for (size_t i = 0; i < line.size(); ++i) {
      const auto c = static_cast<unsigned char>(line[i]);
      if ((c < 0x20 && c != '\t') || c == 0x7F) {
        throw Error(ErrorCode::Syntax, "control character", line_no, static_cast<int>(i) + 1);
      }
    }

    LineParser p(line, line_no);
    if (p.at_end_or_comment()) {
      if (end == text.size()) break;
      continue;
    }

    if (p.peek() == '[') {
      p.expect('[');
      p.skip_blank();
      std::string name = p.ident();
      p.skip_blank();
      p.expect(']');
      if (!p.at_end_or_comment()) p.fail("unexpected text after section header");
      if (const Section* prev = doc.find(name)) {
        throw Error(ErrorCode::DupSection, "duplicate section [" + name + "]", line_no, 1,
                    {prev->line, line_no});
      }
      doc.sections.push_back(Section{std::move(name), line_no, {}});
      current = &doc.sections.back();
    } else {
      const int key_col = static_cast<int>(p.pos()) + 1;
      std::string key = p.ident();
      p.skip_blank();
      p.expect('=');
      p.skip_blank();
      const size_t value_start = p.pos();
      std::vector<Value> items;
      while (true) {
        p.skip_blank();
        items.push_back(p.value());
        p.skip_blank();
        if (p.peek() == ',') {
          p.expect(',');
          continue;
        }
        break;
      }
      const size_t value_end = p.pos();
      if (!p.at_end_or_comment()) p.fail("unexpected text after value");
      if (current == nullptr) {
        throw Error(ErrorCode::Syntax, "entry '" + key + "' before any [section]", line_no,
                    key_col);
      }
      if (const Entry* prev = current->find(key)) {
        throw Error(ErrorCode::DupKey,
                    "duplicate key '" + key + "' in [" + current->name + "] (first at line " +
                        std::to_string(prev->line) + ")",
                    line_no, key_col, {prev->line, line_no});
      }
      Entry e;
      e.key = std::move(key);
      e.raw = std::string(trim(line.substr(value_start, value_end - value_start)));
      e.items = std::move(items);
      e.line = line_no;
      e.column = key_col;
      current->entries.push_back(std::move(e));
    }
    if (end == text.size()) break;
  }
  return doc;
}

}  // namespace pneufab
