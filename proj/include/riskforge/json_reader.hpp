#pragma once

/// @file json_reader.hpp
/// Minimal JSON reader that keeps the line and column of every value and
/// object key, so schema and reference errors in model files can point at
/// the offending bytes.  Strict RFC 8259: no comments, no trailing commas,
/// duplicate object keys rejected.

#include <cstdint>
#include <memory>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace riskforge::json {

struct Position {
  int line = 1;
  int column = 1;  ///< 1-based byte column
};

class SyntaxError : public std::runtime_error {
 public:
  SyntaxError(Position position, const std::string& message)
      : std::runtime_error(message), position_(position) {}
  Position position() const noexcept { return position_; }

 private:
  Position position_;
};

enum class Kind { kNull, kBool, kInteger, kReal, kString, kArray, kObject };

inline std::string_view to_string(Kind kind) noexcept {
  switch (kind) {
    case Kind::kNull: return "null";
    case Kind::kBool: return "boolean";
    case Kind::kInteger: return "integer";
    case Kind::kReal: return "number";
    case Kind::kString: return "string";
    case Kind::kArray: return "array";
    case Kind::kObject: return "object";
  }
  return "";
}

struct Value;

struct Member {
  std::string key;
  Position key_position;
  std::unique_ptr<Value> value;
};

struct Value {
  Kind kind = Kind::kNull;
  Position position;
  bool boolean = false;
  std::int64_t integer = 0;
  bool integer_overflow = false;  ///< integral literal outside int64
  std::string text;               ///< string payload, or number literal
  std::vector<Value> items;
  std::vector<Member> members;

  const Member* find(std::string_view key) const noexcept {
    for (const auto& member : members) {
      if (member.key == key) return &member;
    }
    return nullptr;
  }
};

namespace detail {

class Reader {
 public:
  explicit Reader(std::string_view text) : text_(text) {}

  Value document() {
    skip_space();
    Value root = value(0);
    skip_space();
    if (offset_ != text_.size()) fail("trailing content after document");
    return root;
  }

 private:
  static constexpr int kMaxDepth = 256;

  [[noreturn]] void fail(const std::string& message) const {
    throw SyntaxError(here(), message);
  }

  Position here() const noexcept { return {line_, column_}; }

  bool at_end() const noexcept { return offset_ >= text_.size(); }
  char peek() const noexcept { return at_end() ? '\0' : text_[offset_]; }

  void advance() noexcept {
    if (text_[offset_] == '\n') {
      ++line_;
      column_ = 1;
    } else {
      ++column_;
    }
    ++offset_;
  }

  void skip_space() noexcept {
    while (!at_end()) {
      char ch = peek();
      if (ch != ' ' && ch != '\t' && ch != '\n' && ch != '\r') break;
      advance();
    }
  }

  void expect_literal(std::string_view literal) {
    if (text_.substr(offset_, literal.size()) != literal) {
      fail("invalid literal");
    }
    for (std::size_t i = 0; i < literal.size(); ++i) advance();
  }

  Value value(int depth) {
    if (depth > kMaxDepth) fail("document nested too deeply");
    if (at_end()) fail("unexpected end of input");
    Value out;
    out.position = here();
    switch (peek()) {
      case '{': object(out, depth); break;
      case '[': array(out, depth); break;
      case '"':
        out.kind = Kind::kString;
        out.text = string();
        break;
      case 't':
        expect_literal("true");
        out.kind = Kind::kBool;
        out.boolean = true;
        break;
      case 'f':
        expect_literal("false");
        out.kind = Kind::kBool;
        break;
      case 'n':
        expect_literal("null");
        out.kind = Kind::kNull;
        break;
      default:
        if (peek() == '-' || (peek() >= '0' && peek() <= '9')) {
          number(out);
        } else {
          fail(std::string("unexpected character '") + peek() + "'");
        }
    }
    return out;
  }

  void object(Value& out, int depth) {
    out.kind = Kind::kObject;
    advance();  // {
    skip_space();
    if (peek() == '}') {
      advance();
      return;
    }
    while (true) {
      skip_space();
      if (peek() != '"') fail("expected object key");
      Member member;
      member.key_position = here();
      member.key = string();
      for (const auto& existing : out.members) {
        if (existing.key == member.key) {
          throw SyntaxError(member.key_position,
                            "duplicate key \"" + member.key + "\"");
        }
      }
      skip_space();
      if (peek() != ':') fail("expected ':' after object key");
      advance();
      skip_space();
      member.value = std::make_unique<Value>(value(depth + 1));
      out.members.push_back(std::move(member));
      skip_space();
      if (peek() == ',') {
        advance();
        continue;
      }
      if (peek() == '}') {
        advance();
        return;
      }
      fail("expected ',' or '}' in object");
    }
  }

  void array(Value& out, int depth) {
    out.kind = Kind::kArray;
    advance();  // [
    skip_space();
    if (peek() == ']') {
      advance();
      return;
    }
    while (true) {
      skip_space();
      out.items.push_back(value(depth + 1));
      skip_space();
      if (peek() == ',') {
        advance();
        continue;
      }
      if (peek() == ']') {
        advance();
        return;
      }
      fail("expected ',' or ']' in array");
    }
  }

  void number(Value& out) {
    std::size_t start = offset_;
    bool integral = true;
    if (peek() == '-') advance();
    if (peek() == '0') {
      advance();
    } else if (peek() >= '1' && peek() <= '9') {
      while (peek() >= '0' && peek() <= '9') advance();
    } else {
      fail("invalid number");
    }
    if (peek() == '.') {
      integral = false;
      advance();
      if (!(peek() >= '0' && peek() <= '9')) fail("invalid number");
      while (peek() >= '0' && peek() <= '9') advance();
    }
    if (peek() == 'e' || peek() == 'E') {
      integral = false;
      advance();
      if (peek() == '+' || peek() == '-') advance();
      if (!(peek() >= '0' && peek() <= '9')) fail("invalid number");
      while (peek() >= '0' && peek() <= '9') advance();
    }
    out.text = std::string(text_.substr(start, offset_ - start));
    if (!integral) {
      out.kind = Kind::kReal;
      return;
    }
    out.kind = Kind::kInteger;
    try {
      std::size_t used = 0;
      out.integer = std::stoll(out.text, &used);
    } catch (const std::out_of_range&) {
      out.integer_overflow = true;
    }
  }

  unsigned hex4() {
    unsigned code = 0;
    for (int i = 0; i < 4; ++i) {
      char ch = peek();
      unsigned digit;
      if (ch >= '0' && ch <= '9') {
        digit = static_cast<unsigned>(ch - '0');
      } else if (ch >= 'a' && ch <= 'f') {
        digit = static_cast<unsigned>(ch - 'a' + 10);
      } else if (ch >= 'A' && ch <= 'F') {
        digit = static_cast<unsigned>(ch - 'A' + 10);
      } else {
        fail("invalid \\u escape");
      }
      code = code * 16 + digit;
      advance();
    }
    return code;
  }

  static void append_utf8(std::string& out, unsigned code) {
    if (code < 0x80) {
      out += static_cast<char>(code);
    } else if (code < 0x800) {
      out += static_cast<char>(0xC0 | (code >> 6));
      out += static_cast<char>(0x80 | (code & 0x3F));
    } else if (code < 0x10000) {
      out += static_cast<char>(0xE0 | (code >> 12));
      out += static_cast<char>(0x80 | ((code >> 6) & 0x3F));
      out += static_cast<char>(0x80 | (code & 0x3F));
    } else {
      out += static_cast<char>(0xF0 | (code >> 18));
      out += static_cast<char>(0x80 | ((code >> 12) & 0x3F));
      out += static_cast<char>(0x80 | ((code >> 6) & 0x3F));
      out += static_cast<char>(0x80 | (code & 0x3F));
    }
  }

  // Validates one UTF-8 sequence starting at the cursor and copies it.
  void utf8_sequence(std::string& out) {
    auto lead = static_cast<unsigned char>(peek());
    int length = 0;
    unsigned min_code = 0;
    unsigned code = 0;
    if (lead >= 0xC2 && lead <= 0xDF) {
      length = 2;
      min_code = 0x80;
      code = lead & 0x1F;
    } else if (lead >= 0xE0 && lead <= 0xEF) {
      length = 3;
      min_code = 0x800;
      code = lead & 0x0F;
    } else if (lead >= 0xF0 && lead <= 0xF4) {
      length = 4;
      min_code = 0x10000;
      code = lead & 0x07;
    } else {
      fail("invalid UTF-8 byte");
    }
    if (offset_ + static_cast<std::size_t>(length) > text_.size()) {
      fail("truncated UTF-8 sequence");
    }
    for (int i = 1; i < length; ++i) {
      auto next = static_cast<unsigned char>(text_[offset_ + i]);
      if ((next & 0xC0) != 0x80) fail("invalid UTF-8 continuation byte");
      code = (code << 6) | (next & 0x3F);
    }
    if (code < min_code || code > 0x10FFFF ||
        (code >= 0xD800 && code <= 0xDFFF)) {
      fail("invalid UTF-8 sequence");
    }
    out.append(text_.substr(offset_, static_cast<std::size_t>(length)));
    offset_ += static_cast<std::size_t>(length);
    column_ += length;
  }

  std::string string() {
    advance();  // opening quote
    std::string out;
    while (true) {
      if (at_end()) fail("unterminated string");
      char ch = peek();
      if (ch == '"') {
        advance();
        return out;
      }
      if (static_cast<unsigned char>(ch) < 0x20) {
        fail("control character in string");
      }
      if (static_cast<unsigned char>(ch) >= 0x80) {
        utf8_sequence(out);
        continue;
      }
      if (ch != '\\') {
        out += ch;
        advance();
        continue;
      }
      advance();
      if (at_end()) fail("unterminated escape");
      char esc = peek();
      advance();
      switch (esc) {
        case '"': out += '"'; break;
        case '\\': out += '\\'; break;
        case '/': out += '/'; break;
        case 'b': out += '\b'; break;
        case 'f': out += '\f'; break;
        case 'n': out += '\n'; break;
        case 'r': out += '\r'; break;
        case 't': out += '\t'; break;
        case 'u': {
          unsigned code = hex4();
          if (code >= 0xD800 && code <= 0xDBFF) {
            if (peek() != '\\') fail("unpaired surrogate");
            advance();
            if (peek() != 'u') fail("unpaired surrogate");
            advance();
            unsigned low = hex4();
            if (low < 0xDC00 || low > 0xDFFF) fail("unpaired surrogate");
            code = 0x10000 + ((code - 0xD800) << 10) + (low - 0xDC00);
          } else if (code >= 0xDC00 && code <= 0xDFFF) {
            fail("unpaired surrogate");
          }
          append_utf8(out, code);
          break;
        }
        default:
          fail("invalid escape sequence");
      }
    }
  }

  std::string_view text_;
  std::size_t offset_ = 0;
  int line_ = 1;
  int column_ = 1;
};

}  // namespace detail

/// Throws SyntaxError with the position of the first offending byte.
inline Value parse(std::string_view text) {
  return detail::Reader(text).document();
}

}  // namespace riskforge::json
