#include "suntrack/toml_lite.hpp"

#include <cctype>
#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string_view>

namespace suntrack::toml {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) {
    s.remove_prefix(1);
  }
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) {
    s.remove_suffix(1);
  }
  return s;
}

bool bare_key_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-';
}

bool valid_bare_key(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s) {
    if (!bare_key_char(c)) return false;
  }
  return true;
}

/// Cuts a trailing # comment, ignoring # inside double-quoted strings.
std::string_view strip_comment(std::string_view s) {
  bool in_string = false;
  for (std::size_t i = 0; i < s.size(); ++i) {
    const char c = s[i];
    if (in_string) {
      if (c == '\\') {
        ++i;
      } else if (c == '"') {
        in_string = false;
      }
    } else if (c == '"') {
      in_string = true;
    } else if (c == '#') {
      return s.substr(0, i);
    }
  }
  return s;
}

std::string parse_string_literal(std::string_view raw, int line) {
  if (raw.size() < 2 || raw.front() != '"' || raw.back() != '"') {
    throw ParseError(line, "unterminated string");
  }
  std::string out;
  for (std::size_t i = 1; i + 1 < raw.size(); ++i) {
    const char c = raw[i];
    if (c != '\\') {
      if (c == '"') throw ParseError(line, "unexpected '\"' inside string");
      out.push_back(c);
      continue;
    }
    if (i + 2 >= raw.size()) throw ParseError(line, "dangling escape");
    const char esc = raw[++i];
    switch (esc) {
      case '"': out.push_back('"'); break;
      case '\\': out.push_back('\\'); break;
      case 'n': out.push_back('\n'); break;
      case 't': out.push_back('\t'); break;
      default:
        throw ParseError(line, std::string("unsupported escape '\\") + esc +
                                   "'");
    }
  }
  return out;
}

bool looks_integer(std::string_view s) {
  std::size_t i = (s[0] == '+' || s[0] == '-') ? 1 : 0;
  if (i == s.size()) return false;
  for (; i < s.size(); ++i) {
    if (!std::isdigit(static_cast<unsigned char>(s[i]))) return false;
  }
  return true;
}

/// Splits a one-line array body on top-level commas.
std::vector<std::string_view> split_array_items(std::string_view body,
                                                int line) {
  std::vector<std::string_view> out;
  int depth = 0;
  bool in_string = false;
  std::size_t start = 0;
  for (std::size_t i = 0; i < body.size(); ++i) {
    const char c = body[i];
    if (in_string) {
      if (c == '\\') {
        ++i;
      } else if (c == '"') {
        in_string = false;
      }
      continue;
    }
    if (c == '"') {
      in_string = true;
    } else if (c == '[') {
      ++depth;
    } else if (c == ']') {
      if (--depth < 0) throw ParseError(line, "unbalanced ']' in array");
    } else if (c == ',' && depth == 0) {
      out.push_back(body.substr(start, i - start));
      start = i + 1;
    }
  }
  if (in_string) throw ParseError(line, "unterminated string in array");
  if (depth != 0) throw ParseError(line, "unbalanced '[' in array");
  out.push_back(body.substr(start));
  return out;
}

Value parse_value(std::string_view raw, int line);

Value parse_array(std::string_view raw, int line) {
  const std::string_view body = trim(raw.substr(1, raw.size() - 2));
  Value v = Value::array_value({});
  v.line = line;
  if (body.empty()) return v;
  for (std::string_view item : split_array_items(body, line)) {
    const std::string_view trimmed = trim(item);
    if (trimmed.empty()) throw ParseError(line, "empty array element");
    v.items.push_back(parse_value(trimmed, line));
  }
  return v;
}

Value parse_value(std::string_view raw, int line) {
  if (raw.empty()) throw ParseError(line, "missing value");
  Value v;
  v.line = line;
  if (raw == "true" || raw == "false") {
    v = Value::boolean_value(raw == "true");
    v.line = line;
    return v;
  }
  if (raw.front() == '"') {
    v = Value::string_value(parse_string_literal(raw, line));
    v.line = line;
    return v;
  }
  if (raw.front() == '[') {
    if (raw.back() != ']') throw ParseError(line, "unterminated array");
    return parse_array(raw, line);
  }
  const std::string text(raw);
  if (looks_integer(raw)) {
    errno = 0;
    char* end = nullptr;
    const long long n = std::strtoll(text.c_str(), &end, 10);
    if (errno == 0 && end == text.c_str() + text.size()) {
      v = Value::integer_value(n);
      v.line = line;
      return v;
    }
    // fall through to float on overflow
  }
  errno = 0;
  char* end = nullptr;
  const double d = std::strtod(text.c_str(), &end);
  if (end != text.c_str() + text.size() || !std::isfinite(d)) {
    throw ParseError(line, "invalid value '" + text + "'");
  }
  v = Value::float_value(d);
  v.line = line;
  return v;
}

std::string format_float(double d) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", d);
  std::string out(buf);
  // keep floats reparsing as floats
  if (out.find_first_of(".eE") == std::string::npos) out += ".0";
  return out;
}

std::string serialize_value(const Value& v) {
  switch (v.kind) {
    case Value::Kind::Boolean:
      return v.boolean ? "true" : "false";
    case Value::Kind::Integer:
      return std::to_string(v.integer);
    case Value::Kind::Float:
      return format_float(v.number);
    case Value::Kind::String: {
      std::string out = "\"";
      for (char c : v.text) {
        switch (c) {
          case '"': out += "\\\""; break;
          case '\\': out += "\\\\"; break;
          case '\n': out += "\\n"; break;
          case '\t': out += "\\t"; break;
          default: out.push_back(c);
        }
      }
      out += '"';
      return out;
    }
    case Value::Kind::Array: {
      std::string out = "[";
      for (std::size_t i = 0; i < v.items.size(); ++i) {
        if (i) out += ", ";
        out += serialize_value(v.items[i]);
      }
      out += ']';
      return out;
    }
  }
  return {};
}

}  // namespace

Value Value::boolean_value(bool b) {
  Value v;
  v.kind = Kind::Boolean;
  v.boolean = b;
  return v;
}

Value Value::integer_value(long long n) {
  Value v;
  v.kind = Kind::Integer;
  v.integer = n;
  return v;
}

Value Value::float_value(double d) {
  Value v;
  v.kind = Kind::Float;
  v.number = d;
  return v;
}

Value Value::string_value(std::string s) {
  Value v;
  v.kind = Kind::String;
  v.text = std::move(s);
  return v;
}

Value Value::array_value(std::vector<Value> items) {
  Value v;
  v.kind = Kind::Array;
  v.items = std::move(items);
  return v;
}

double Value::as_number() const {
  if (kind == Kind::Integer) return static_cast<double>(integer);
  if (kind == Kind::Float) return number;
  throw ParseError(line, "expected a number");
}

const Value* Table::find(const std::string& key) const {
  for (const auto& [k, v] : entries) {
    if (k == key) return &v;
  }
  return nullptr;
}

Value* Table::find(const std::string& key) {
  for (auto& [k, v] : entries) {
    if (k == key) return &v;
  }
  return nullptr;
}

void Table::set(const std::string& key, Value v) {
  if (Value* existing = find(key)) {
    v.line = existing->line;
    *existing = std::move(v);
    return;
  }
  entries.emplace_back(key, std::move(v));
}

const Table* Document::find(const std::string& name) const {
  for (const Table& t : tables) {
    if (t.name == name) return &t;
  }
  return nullptr;
}

Table* Document::find(const std::string& name) {
  for (Table& t : tables) {
    if (t.name == name) return &t;
  }
  return nullptr;
}

Table& Document::get_or_add(const std::string& name) {
  if (Table* t = find(name)) return *t;
  tables.push_back(Table{name, 0, {}});
  return tables.back();
}

Document parse(const std::string& text) {
  Document doc;
  Table* current = nullptr;
  std::istringstream in(text);
  std::string raw;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    const std::string_view body = trim(strip_comment(raw));
    if (body.empty()) continue;

    if (body.front() == '[') {
      if (body.back() != ']') {
        throw ParseError(line_no, "unterminated table header");
      }
      const std::string_view name = trim(body.substr(1, body.size() - 2));
      if (!valid_bare_key(name)) {
        throw ParseError(line_no,
                         "invalid table name '" + std::string(name) + "'");
      }
      const std::string name_str(name);
      if (doc.find(name_str)) {
        throw ParseError(line_no, "duplicate table [" + name_str + "]");
      }
      doc.tables.push_back(Table{name_str, line_no, {}});
      current = &doc.tables.back();
      continue;
    }

    // key = value, with '=' located outside of strings
    std::size_t eq = std::string_view::npos;
    bool in_string = false;
    for (std::size_t i = 0; i < body.size(); ++i) {
      const char c = body[i];
      if (in_string) {
        if (c == '\\') {
          ++i;
        } else if (c == '"') {
          in_string = false;
        }
      } else if (c == '"') {
        in_string = true;
      } else if (c == '=') {
        eq = i;
        break;
      }
    }
    if (eq == std::string_view::npos) {
      throw ParseError(line_no, "expected 'key = value' or '[table]'");
    }
    const std::string key(trim(body.substr(0, eq)));
    if (!valid_bare_key(key)) {
      throw ParseError(line_no, "invalid key '" + key + "'");
    }
    if (!current) {
      throw ParseError(line_no,
                       "key '" + key + "' appears before any [table]");
    }
    if (current->find(key)) {
      throw ParseError(line_no, "duplicate key '" + key + "' in [" +
                                    current->name + "]");
    }
    current->entries.emplace_back(key,
                                  parse_value(trim(body.substr(eq + 1)),
                                              line_no));
  }
  return doc;
}

Document parse_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse(buf.str());
}

std::string serialize(const Document& doc) {
  std::string out;
  bool first = true;
  for (const Table& t : doc.tables) {
    if (!first) out += '\n';
    first = false;
    out += '[' + t.name + "]\n";
    for (const auto& [k, v] : t.entries) {
      out += k + " = " + serialize_value(v) + '\n';
    }
  }
  return out;
}

void write_file(const Document& doc, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  out << serialize(doc);
}

void set_scalar(Document& doc, const std::string& path, double value) {
  const std::size_t dot = path.find('.');
  if (dot == std::string::npos || dot == 0 || dot + 1 == path.size()) {
    throw ParseError(0, "parameter path must look like table.key, got '" +
                            path + "'");
  }
  const std::string table_name = path.substr(0, dot);
  const std::string key = path.substr(dot + 1);
  Table* t = doc.find(table_name);
  if (!t) throw ParseError(0, "no [" + table_name + "] table in the scenario");
  Value* v = t->find(key);
  if (!v) {
    throw ParseError(0, "no key '" + key + "' in [" + table_name + "]");
  }
  Value repl = Value::float_value(value);
  repl.line = v->line;
  *v = repl;
}

}  // namespace suntrack::toml
