#pragma once

#include <cctype>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>

#include <json.hpp>

namespace vclab::toml {

struct ParseError : std::runtime_error {
  explicit ParseError(const std::string& msg) : std::runtime_error(msg) {}
};

// Minimal TOML reader covering what experiment configs need: comments,
// [table] headers (dotted allowed), bare/quoted keys, basic strings,
// integers, floats, booleans, and (nested, multi-line) arrays. Anything
// else is a parse error, never a silent guess.
class Parser {
 public:
  explicit Parser(std::string_view text) : text_(text) {}

  nlohmann::json parse() {
    nlohmann::json root = nlohmann::json::object();
    nlohmann::json* table = &root;
    for (;;) {
      skip_blank();
      if (eof()) break;
      if (peek() == '[') {
        table = open_table(root);
        continue;
      }
      parse_key_value(*table);
    }
    return root;
  }

 private:
  bool eof() const { return pos_ >= text_.size(); }
  char peek() const { return text_[pos_]; }
  char take() {
    const char c = text_[pos_++];
    if (c == '\n') ++line_;
    return c;
  }

  [[noreturn]] void fail(const std::string& what) const {
    throw ParseError("toml parse error at line " + std::to_string(line_) + ": " + what);
  }

  void skip_ws_inline() {
    while (!eof() && (peek() == ' ' || peek() == '\t')) take();
  }

  // whitespace, newlines, and comments
  void skip_blank() {
    for (;;) {
      skip_ws_inline();
      if (eof()) return;
      if (peek() == '#') {
        while (!eof() && peek() != '\n') take();
      } else if (peek() == '\n' || peek() == '\r') {
        take();
      } else {
        return;
      }
    }
  }

  void expect_line_end() {
    skip_ws_inline();
    if (eof()) return;
    if (peek() == '#') {
      while (!eof() && peek() != '\n') take();
    }
    if (eof()) return;
    if (peek() == '\n' || peek() == '\r') {
      take();
      return;
    }
    fail("expected end of line");
  }

  std::string parse_key() {
    skip_ws_inline();
    if (eof()) fail("expected key");
    if (peek() == '"') return parse_basic_string();
    std::string key;
    while (!eof() && (std::isalnum(static_cast<unsigned char>(peek())) || peek() == '_' || peek() == '-'))
      key.push_back(take());
    if (key.empty()) fail("expected key");
    return key;
  }

  std::string parse_basic_string() {
    if (take() != '"') fail("expected '\"'");
    std::string out;
    for (;;) {
      if (eof()) fail("unterminated string");
      char c = take();
      if (c == '"') return out;
      if (c == '\n') fail("newline in string");
      if (c == '\\') {
        if (eof()) fail("unterminated escape");
        const char e = take();
        switch (e) {
          case '"': out.push_back('"'); break;
          case '\\': out.push_back('\\'); break;
          case 'n': out.push_back('\n'); break;
          case 't': out.push_back('\t'); break;
          case 'r': out.push_back('\r'); break;
          default: fail("unsupported escape sequence");
        }
      } else {
        out.push_back(c);
      }
    }
  }

  nlohmann::json* open_table(nlohmann::json& root) {
    take();  // '['
    nlohmann::json* node = &root;
    for (;;) {
      const std::string part = parse_key();
      if (!node->contains(part)) (*node)[part] = nlohmann::json::object();
      node = &(*node)[part];
      if (!node->is_object()) fail("table name collides with a value: " + part);
      skip_ws_inline();
      if (!eof() && peek() == '.') {
        take();
        continue;
      }
      break;
    }
    if (eof() || take() != ']') fail("expected ']'");
    expect_line_end();
    return node;
  }

  void parse_key_value(nlohmann::json& table) {
    const std::string key = parse_key();
    skip_ws_inline();
    if (eof() || take() != '=') fail("expected '=' after key " + key);
    skip_ws_inline();
    if (table.contains(key)) fail("duplicate key: " + key);
    table[key] = parse_value();
    expect_line_end();
  }

  nlohmann::json parse_value() {
    if (eof()) fail("expected value");
    const char c = peek();
    if (c == '"') return parse_basic_string();
    if (c == '[') return parse_array();
    if (c == 't' || c == 'f') return parse_bool();
    return parse_number();
  }

  nlohmann::json parse_array() {
    take();  // '['
    nlohmann::json arr = nlohmann::json::array();
    for (;;) {
      skip_blank();
      if (eof()) fail("unterminated array");
      if (peek() == ']') {
        take();
        return arr;
      }
      arr.push_back(parse_value());
      skip_blank();
      if (eof()) fail("unterminated array");
      if (peek() == ',') {
        take();
        continue;
      }
      if (peek() == ']') {
        take();
        return arr;
      }
      fail("expected ',' or ']' in array");
    }
  }

  nlohmann::json parse_bool() {
    if (text_.substr(pos_, 4) == "true") {
      pos_ += 4;
      return true;
    }
    if (text_.substr(pos_, 5) == "false") {
      pos_ += 5;
      return false;
    }
    fail("expected boolean");
  }

  nlohmann::json parse_number() {
    std::string tok;
    while (!eof()) {
      const char c = peek();
      if (std::isdigit(static_cast<unsigned char>(c)) || c == '+' || c == '-' || c == '.' ||
          c == 'e' || c == 'E') {
        tok.push_back(take());
      } else {
        break;
      }
    }
    if (tok.empty()) fail("expected value");
    const bool is_float = tok.find_first_of(".eE") != std::string::npos;
    try {
      std::size_t used = 0;
      if (is_float) {
        const double v = std::stod(tok, &used);
        if (used != tok.size()) throw std::invalid_argument(tok);
        return v;
      }
      const long long v = std::stoll(tok, &used);
      if (used != tok.size()) throw std::invalid_argument(tok);
      return v;
    } catch (const std::exception&) {
      fail("malformed number: " + tok);
    }
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  int line_ = 1;
};

inline nlohmann::json parse(std::string_view text) { return Parser(text).parse(); }

inline nlohmann::json parse_file(const std::string& path) {
  std::ifstream in(path);
  if (!in.good()) throw ParseError("cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse(ss.str());
}

}  // namespace vclab::toml
