#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace suntrack::toml {

/// Parse/lookup failure with the 1-based source line when one is known
/// (line 0 means "whole document", e.g. a missing table).
struct ParseError : std::runtime_error {
  int line = 0;
  ParseError(int line_, const std::string& msg)
      : std::runtime_error(line_ > 0
                               ? "line " + std::to_string(line_) + ": " + msg
                               : msg),
        line(line_) {}
};

struct Value {
  enum class Kind { Boolean, Integer, Float, String, Array };

  Kind kind = Kind::Float;
  bool boolean = false;
  long long integer = 0;
  double number = 0.0;
  std::string text;
  std::vector<Value> items;
  int line = 0;

  static Value boolean_value(bool b);
  static Value integer_value(long long v);
  static Value float_value(double v);
  static Value string_value(std::string s);
  static Value array_value(std::vector<Value> v);

  bool is_number() const {
    return kind == Kind::Integer || kind == Kind::Float;
  }
  /// Integer or Float as double; throws ParseError otherwise.
  double as_number() const;
};

/// One [name] block; entries keep file order so a document survives a
/// parse/serialize round trip with its layout intact.
struct Table {
  std::string name;
  int line = 0;
  std::vector<std::pair<std::string, Value>> entries;

  const Value* find(const std::string& key) const;
  Value* find(const std::string& key);
  void set(const std::string& key, Value v);
};

struct Document {
  std::vector<Table> tables;

  const Table* find(const std::string& name) const;
  Table* find(const std::string& name);
  Table& get_or_add(const std::string& name);
};

/// Line-oriented subset: [table] headers, key = value pairs, # comments,
/// booleans, integers, floats, quoted strings and one-line arrays.
/// Duplicate tables or keys and malformed lines raise ParseError with the
/// offending line number.
Document parse(const std::string& text);
Document parse_file(const std::string& path);

std::string serialize(const Document& doc);
void write_file(const Document& doc, const std::string& path);

/// Replaces the scalar at dotted "table.key" with a float value (parameter
/// sweeps). Throws ParseError when the table or key is absent.
void set_scalar(Document& doc, const std::string& path, double value);

}  // namespace suntrack::toml
