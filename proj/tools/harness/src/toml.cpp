#include "metastab/harness/toml.hpp"

#include <cctype>
#include <charconv>
#include <limits>
#include <sstream>

#include "metastab/error.hpp"

namespace metastab::harness {

namespace {

using nlohmann::json;

struct Cursor {
  const std::string& s;
  std::size_t i = 0;
  int line;

  [[noreturn]] void error(const std::string& msg) const {
    fail(Errc::ConfigError, "toml line " + std::to_string(line) + ": " + msg);
  }
  void skip_ws() {
    while (i < s.size() && (s[i] == ' ' || s[i] == '\t')) ++i;
  }
  bool done() {
    skip_ws();
    return i >= s.size() || s[i] == '#';
  }
};

std::string parse_key(Cursor& c) {
  c.skip_ws();
  if (c.i < c.s.size() && c.s[c.i] == '"') {
    std::string out;
    for (++c.i; c.i < c.s.size() && c.s[c.i] != '"'; ++c.i) out += c.s[c.i];
    if (c.i >= c.s.size()) c.error("unterminated quoted key");
    ++c.i;
    return out;
  }
  const std::size_t start = c.i;
  while (c.i < c.s.size() && (std::isalnum(static_cast<unsigned char>(c.s[c.i])) || c.s[c.i] == '_' || c.s[c.i] == '-'))
    ++c.i;
  if (c.i == start) c.error("expected a key");
  return c.s.substr(start, c.i - start);
}

json parse_value(Cursor& c);

json parse_string(Cursor& c) {
  std::string out;
  for (++c.i; c.i < c.s.size(); ++c.i) {
    const char ch = c.s[c.i];
    if (ch == '"') {
      ++c.i;
      return out;
    }
    if (ch == '\\') {
      if (++c.i >= c.s.size()) break;
      switch (c.s[c.i]) {
        case 'n': out += '\n'; break;
        case 't': out += '\t'; break;
        case '\\': out += '\\'; break;
        case '"': out += '"'; break;
        default: c.error("unsupported escape");
      }
    } else {
      out += ch;
    }
  }
  c.error("unterminated string");
}

json parse_number(Cursor& c) {
  std::size_t end = c.i;
  while (end < c.s.size() && (std::isalnum(static_cast<unsigned char>(c.s[end])) || c.s[end] == '.' ||
                              c.s[end] == '+' || c.s[end] == '-' || c.s[end] == '_'))
    ++end;
  std::string tok;
  for (std::size_t k = c.i; k < end; ++k)
    if (c.s[k] != '_') tok += c.s[k];
  c.i = end;
  if (tok == "inf" || tok == "+inf") return std::numeric_limits<double>::infinity();
  if (tok == "-inf") return -std::numeric_limits<double>::infinity();
  const bool is_float = tok.find_first_of(".eE") != std::string::npos;
  if (!is_float) {
    std::int64_t v = 0;
    const char* b = tok.data() + (tok[0] == '+' ? 1 : 0);
    auto [p, ec] = std::from_chars(b, tok.data() + tok.size(), v);
    if (ec == std::errc() && p == tok.data() + tok.size()) return v;
  } else {
    double v = 0;
    const char* b = tok.data() + (tok[0] == '+' ? 1 : 0);
    auto [p, ec] = std::from_chars(b, tok.data() + tok.size(), v);
    if (ec == std::errc() && p == tok.data() + tok.size()) return v;
  }
  c.error("bad value '" + tok + "'");
}

json parse_value(Cursor& c) {
  c.skip_ws();
  if (c.i >= c.s.size()) c.error("missing value");
  const char ch = c.s[c.i];
  if (ch == '"') return parse_string(c);
  if (ch == '[') {
    json arr = json::array();
    ++c.i;
    for (;;) {
      c.skip_ws();
      if (c.i < c.s.size() && c.s[c.i] == ']') {
        ++c.i;
        return arr;
      }
      arr.push_back(parse_value(c));
      c.skip_ws();
      if (c.i < c.s.size() && c.s[c.i] == ',') {
        ++c.i;
        continue;
      }
      if (c.i < c.s.size() && c.s[c.i] == ']') continue;
      c.error("expected ',' or ']' (arrays must fit on one line)");
    }
  }
  if (c.s.compare(c.i, 4, "true") == 0) {
    c.i += 4;
    return true;
  }
  if (c.s.compare(c.i, 5, "false") == 0) {
    c.i += 5;
    return false;
  }
  return parse_number(c);
}

}  // namespace

nlohmann::json parse_toml(const std::string& text) {
  json root = json::object();
  json* table = &root;
  std::istringstream in(text);
  std::string raw;
  int lineno = 0;
  while (std::getline(in, raw)) {
    ++lineno;
    Cursor c{raw, 0, lineno};
    if (c.done()) continue;
    if (raw[c.i] == '[') {
      ++c.i;
      const std::string name = parse_key(c);
      c.skip_ws();
      if (c.i >= raw.size() || raw[c.i] != ']') c.error("expected ']'");
      ++c.i;
      if (!c.done()) c.error("trailing characters after table header");
      if (root.contains(name)) c.error("table '" + name + "' defined twice");
      root[name] = json::object();
      table = &root[name];
      continue;
    }
    const std::string key = parse_key(c);
    c.skip_ws();
    if (c.i >= raw.size() || raw[c.i] != '=') c.error("expected '=' after key");
    ++c.i;
    json v = parse_value(c);
    if (!c.done()) c.error("trailing characters after value");
    if (table->contains(key)) c.error("duplicate key '" + key + "'");
    (*table)[key] = std::move(v);
  }
  return root;
}

}  // namespace metastab::harness
