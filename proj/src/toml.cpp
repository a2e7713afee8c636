#include "affgeo/toml.hpp"

#include <cmath>
#include <cstdlib>
#include <cerrno>
#include <limits>
#include <set>
#include <string>
#include <vector>

#include "affgeo/errors.hpp"

namespace affgeo {

namespace {

using json = nlohmann::ordered_json;

class Reader {
 public:
  explicit Reader(std::string_view text) : s_(text) {}

  json document() {
    json root = json::object();
    json* table = &root;
    while (true) {
      skip_blank_lines();
      if (eof()) break;
      if (peek() == '[') {
        table = header(root);
      } else {
        key_value(*table);
      }
      end_of_line();
    }
    return root;
  }

 private:
  [[noreturn]] void error(const std::string& what) const { error_at(pos_, what); }
  [[noreturn]] void error_at(std::size_t at, const std::string& what) const {
    std::size_t line = 1;
    for (std::size_t i = 0; i < at && i < s_.size(); ++i) line += s_[i] == '\n';
    throw ParseError(at, "TOML: " + what + " (line " + std::to_string(line) + ")");
  }

  bool eof() const { return pos_ >= s_.size(); }
  char peek() const { return eof() ? '\0' : s_[pos_]; }

  void skip_ws() {
    while (!eof() && (peek() == ' ' || peek() == '\t')) ++pos_;
  }
  void skip_comment() {
    if (peek() == '#')
      while (!eof() && peek() != '\n') ++pos_;
  }
  void skip_blank_lines() {
    while (true) {
      skip_ws();
      skip_comment();
      if (peek() == '\n' || peek() == '\r') {
        ++pos_;
        continue;
      }
      return;
    }
  }
  // Whitespace, comments and newlines inside arrays.
  void skip_array_space() { skip_blank_lines(); }

  void end_of_line() {
    skip_ws();
    skip_comment();
    if (eof()) return;
    if (peek() == '\r') ++pos_;
    if (peek() != '\n') error("expected end of line");
    ++pos_;
  }

  void expect(char c) {
    if (peek() != c) error(std::string("expected '") + c + "'");
    ++pos_;
  }

  static bool bare_char(char c) {
    return (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') || c == '_' || c == '-';
  }

  std::string key_part() {
    skip_ws();
    if (peek() == '"') return basic_string();
    if (peek() == '\'') return literal_string();
    const std::size_t start = pos_;
    while (!eof() && bare_char(peek())) ++pos_;
    if (pos_ == start) error("expected a key");
    return std::string(s_.substr(start, pos_ - start));
  }

  std::vector<std::string> dotted_key() {
    std::vector<std::string> parts{key_part()};
    skip_ws();
    while (peek() == '.') {
      ++pos_;
      parts.push_back(key_part());
      skip_ws();
    }
    return parts;
  }

  // Descends into (creating) nested tables; the last element of an array of
  // tables is the current one.
  json* descend(json* at, const std::string& key, std::size_t where) {
    if (!at->contains(key)) (*at)[key] = json::object();
    json& next = (*at)[key];
    if (next.is_array() && !next.empty() && next.back().is_object()) return &next.back();
    if (!next.is_object()) error_at(where, "key '" + key + "' is not a table");
    return &next;
  }

  json* header(json& root) {
    const std::size_t where = pos_;
    ++pos_;
    const bool array = peek() == '[';
    if (array) ++pos_;
    const auto parts = dotted_key();
    expect(']');
    if (array) expect(']');
    json* at = &root;
    for (std::size_t i = 0; i + 1 < parts.size(); ++i) at = descend(at, parts[i], where);
    const std::string& last = parts.back();
    if (array) {
      if (!at->contains(last)) (*at)[last] = json::array();
      json& arr = (*at)[last];
      if (!arr.is_array()) error_at(where, "key '" + last + "' is not an array of tables");
      arr.push_back(json::object());
      return &arr.back();
    }
    std::string path;
    for (const auto& p : parts) path += p + '\x1f';
    if (!defined_.insert(path).second) error_at(where, "table '" + last + "' defined twice");
    return descend(at, last, where);
  }

  void key_value(json& table) {
    const std::size_t where = pos_;
    const auto parts = dotted_key();
    skip_ws();
    expect('=');
    skip_ws();
    json* at = &table;
    for (std::size_t i = 0; i + 1 < parts.size(); ++i) at = descend(at, parts[i], where);
    if (at->contains(parts.back())) error_at(where, "duplicate key '" + parts.back() + "'");
    (*at)[parts.back()] = value();
  }

  json value() {
    const char c = peek();
    if (c == '"') return basic_string();
    if (c == '\'') return literal_string();
    if (c == '[') return array();
    if (c == '{') return inline_table();
    if (s_.substr(pos_, 4) == "true" && !bare_char(at(pos_ + 4))) {
      pos_ += 4;
      return true;
    }
    if (s_.substr(pos_, 5) == "false" && !bare_char(at(pos_ + 5))) {
      pos_ += 5;
      return false;
    }
    return number();
  }

  char at(std::size_t i) const { return i < s_.size() ? s_[i] : '\0'; }

  json number() {
    const std::size_t start = pos_;
    std::string text;
    while (!eof()) {
      const char c = peek();
      if (bare_char(c) || c == '+' || c == '.') {
        if (c != '_') text += c;
        ++pos_;
      } else {
        break;
      }
    }
    if (text.empty()) error("expected a value");
    std::string body = text;
    double sign = 1.0;
    if (body[0] == '+' || body[0] == '-') {
      if (body[0] == '-') sign = -1.0;
      body = body.substr(1);
    }
    if (body == "inf") return sign * std::numeric_limits<double>::infinity();
    if (body == "nan") return std::numeric_limits<double>::quiet_NaN();
    const bool is_float = text.find_first_of(".eE") != std::string::npos;
    char* end = nullptr;
    if (is_float) {
      const double v = std::strtod(text.c_str(), &end);
      if (*end != '\0' || text.back() == '.' || text.find("..") != std::string::npos)
        error_at(start, "invalid number '" + text + "'");
      return v;
    }
    errno = 0;
    const long long v = std::strtoll(text.c_str(), &end, 10);
    if (*end != '\0' || errno == ERANGE) error_at(start, "invalid number '" + text + "'");
    return v;
  }

  std::string basic_string() {
    expect('"');
    if (peek() == '"' && at(pos_ + 1) == '"') error("multi-line strings are not supported");
    std::string out;
    while (true) {
      if (eof() || peek() == '\n') error("unterminated string");
      const char c = s_[pos_++];
      if (c == '"') break;
      if (c != '\\') {
        out += c;
        continue;
      }
      const char e = s_[pos_++];
      switch (e) {
        case '"': out += '"'; break;
        case '\\': out += '\\'; break;
        case 'n': out += '\n'; break;
        case 't': out += '\t'; break;
        case 'r': out += '\r'; break;
        case 'b': out += '\b'; break;
        case 'f': out += '\f'; break;
        case 'u': {
          if (pos_ + 4 > s_.size()) error("truncated \\u escape");
          const unsigned long cp = std::strtoul(std::string(s_.substr(pos_, 4)).c_str(), nullptr, 16);
          pos_ += 4;
          append_utf8(out, cp);
          break;
        }
        default: error_at(pos_ - 1, "invalid escape");
      }
    }
    return out;
  }

  static void append_utf8(std::string& out, unsigned long cp) {
    if (cp < 0x80) {
      out += static_cast<char>(cp);
    } else if (cp < 0x800) {
      out += static_cast<char>(0xC0 | (cp >> 6));
      out += static_cast<char>(0x80 | (cp & 0x3F));
    } else {
      out += static_cast<char>(0xE0 | (cp >> 12));
      out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
      out += static_cast<char>(0x80 | (cp & 0x3F));
    }
  }

  std::string literal_string() {
    expect('\'');
    const std::size_t start = pos_;
    while (!eof() && peek() != '\'' && peek() != '\n') ++pos_;
    if (peek() != '\'') error("unterminated string");
    ++pos_;
    return std::string(s_.substr(start, pos_ - start - 1));
  }

  json array() {
    expect('[');
    json out = json::array();
    while (true) {
      skip_array_space();
      if (peek() == ']') {
        ++pos_;
        return out;
      }
      out.push_back(value());
      skip_array_space();
      if (peek() == ',') {
        ++pos_;
        continue;
      }
      skip_array_space();
      expect(']');
      return out;
    }
  }

  json inline_table() {
    expect('{');
    json out = json::object();
    skip_ws();
    if (peek() == '}') {
      ++pos_;
      return out;
    }
    while (true) {
      key_value(out);
      skip_ws();
      if (peek() == ',') {
        ++pos_;
        continue;
      }
      expect('}');
      return out;
    }
  }

  std::string_view s_;
  std::size_t pos_ = 0;
  std::set<std::string> defined_;
};

}  // namespace

nlohmann::ordered_json parse_toml(std::string_view text) { return Reader(text).document(); }

}  // namespace affgeo
