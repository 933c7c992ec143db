#pragma once

// Uniform first-order representation of parsed JSON, XML and CSV documents.

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <memory>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "structprov/box.hpp"
#include "structprov/error.hpp"

namespace structprov {

/// Record name used for every JSON object and CSV row, and field name used
/// for XML element content.
inline const std::string kBullet = "\xE2\x80\xA2";

class DataValue;

class DataValue {
 public:
  struct Int {
    std::int64_t value;
    // Set by textual ingestion for "0"/"1"; lets inference pick the bit shape.
    // Not part of equality.
    bool bit_candidate = false;
  };
  struct Float {
    double value;
  };
  struct String {
    std::string value;
  };
  struct Bool {
    bool value;
  };
  struct Null {};
  struct List {
    std::shared_ptr<const std::vector<DataValue>> items;
  };
  struct Record {
    std::string name;
    std::shared_ptr<const std::vector<std::pair<std::string, DataValue>>> fields;
  };
  using Variant = std::variant<Int, Float, String, Bool, Null, List, Record>;

  DataValue() : v_(Null{}) {}

  static DataValue integer(std::int64_t i, bool bit_candidate = false) { return DataValue(Int{i, bit_candidate}); }
  static DataValue floating(double f) {
    if (!std::isfinite(f)) throw UnrepresentableNumber("non-finite number has no shape");
    return DataValue(Float{f});
  }
  static DataValue string(std::string s) { return DataValue(String{std::move(s)}); }
  static DataValue boolean(bool b) { return DataValue(Bool{b}); }
  static DataValue null() { return DataValue(Null{}); }
  static DataValue list(std::vector<DataValue> items) {
    return DataValue(List{std::make_shared<const std::vector<DataValue>>(std::move(items))});
  }
  /// Field names must be pairwise distinct.
  static DataValue record(std::string name, std::vector<std::pair<std::string, DataValue>> fields) {
    if (name.empty()) throw std::invalid_argument("record name must be nonempty");
    for (std::size_t i = 0; i < fields.size(); ++i) {
      if (fields[i].first.empty()) throw std::invalid_argument("field name must be nonempty");
      for (std::size_t j = 0; j < i; ++j) {
        if (fields[j].first == fields[i].first)
          throw std::invalid_argument("duplicate field '" + fields[i].first + "' in record " + name);
      }
    }
    return DataValue(
        Record{std::move(name), std::make_shared<const std::vector<std::pair<std::string, DataValue>>>(std::move(fields))});
  }

  const Variant& value() const noexcept { return v_; }

  bool is_int() const noexcept { return std::holds_alternative<Int>(v_); }
  bool is_float() const noexcept { return std::holds_alternative<Float>(v_); }
  bool is_string() const noexcept { return std::holds_alternative<String>(v_); }
  bool is_bool() const noexcept { return std::holds_alternative<Bool>(v_); }
  bool is_null() const noexcept { return std::holds_alternative<Null>(v_); }
  bool is_list() const noexcept { return std::holds_alternative<List>(v_); }
  bool is_record() const noexcept { return std::holds_alternative<Record>(v_); }
  bool is_primitive() const noexcept { return is_int() || is_float() || is_string() || is_bool(); }

  std::int64_t as_int() const { return std::get<Int>(v_).value; }
  bool bit_candidate() const { return std::get<Int>(v_).bit_candidate; }
  double as_float() const { return std::get<Float>(v_).value; }
  const std::string& as_string() const { return std::get<String>(v_).value; }
  bool as_bool() const { return std::get<Bool>(v_).value; }
  const std::vector<DataValue>& items() const { return *std::get<List>(v_).items; }
  const std::string& record_name() const { return std::get<Record>(v_).name; }
  const std::vector<std::pair<std::string, DataValue>>& fields() const { return *std::get<Record>(v_).fields; }

  const DataValue* field(std::string_view name) const {
    for (const auto& [n, v] : fields()) {
      if (n == name) return &v;
    }
    return nullptr;
  }

 private:
  explicit DataValue(Variant v) : v_(std::move(v)) {}
  Variant v_;
};

/// Structural equality: records compare as unordered field maps, lists are
/// ordered, and integers never equal floats.
inline bool data_equal(const DataValue& a, const DataValue& b) {
  if (a.value().index() != b.value().index()) return false;
  if (a.is_int()) return a.as_int() == b.as_int();
  if (a.is_float()) return a.as_float() == b.as_float();
  if (a.is_string()) return a.as_string() == b.as_string();
  if (a.is_bool()) return a.as_bool() == b.as_bool();
  if (a.is_null()) return true;
  if (a.is_list()) {
    const auto& xs = a.items();
    const auto& ys = b.items();
    if (xs.size() != ys.size()) return false;
    for (std::size_t i = 0; i < xs.size(); ++i) {
      if (!data_equal(xs[i], ys[i])) return false;
    }
    return true;
  }
  if (a.record_name() != b.record_name()) return false;
  if (a.fields().size() != b.fields().size()) return false;
  for (const auto& [name, value] : a.fields()) {
    const DataValue* other = b.field(name);
    if (other == nullptr || !data_equal(value, *other)) return false;
  }
  return true;
}

namespace detail {

inline void append_quoted(std::string& out, std::string_view s) {
  out += '"';
  for (unsigned char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\r': out += "\\r"; break;
      case '\t': out += "\\t"; break;
      default:
        if (c < 0x20) {
          static constexpr char kHex[] = "0123456789abcdef";
          out += "\\u00";
          out += kHex[c >> 4];
          out += kHex[c & 0xF];
        } else {
          out += static_cast<char>(c);
        }
    }
  }
  out += '"';
}

inline bool is_name_start(unsigned char c) { return std::isalpha(c) || c == '_' || c >= 0x80; }
inline bool is_name_char(unsigned char c) {
  return std::isalnum(c) || c == '_' || c == '-' || c == '.' || c == ':' || c >= 0x80;
}

inline bool is_bare_name(std::string_view s) {
  if (s.empty() || !is_name_start(static_cast<unsigned char>(s[0]))) return false;
  return std::all_of(s.begin(), s.end(), [](char c) { return is_name_char(static_cast<unsigned char>(c)); });
}

/// Names print bare when they are identifier-like, quoted otherwise.
inline void append_name(std::string& out, std::string_view s) {
  if (is_bare_name(s) && s != "true" && s != "false" && s != "null") {
    out += s;
  } else {
    append_quoted(out, s);
  }
}

/// Shortest round-trip form that always reads back as a float.
inline std::string format_float(double f) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, f);
  std::string s(buf, end);
  if (s.find_first_of(".eE") == std::string::npos) s += ".0";
  return s;
}

inline void append_canonical(std::string& out, const DataValue& d) {
  std::visit(Overloaded{
                 [&](const DataValue::Int& i) { out += std::to_string(i.value); },
                 [&](const DataValue::Float& f) { out += format_float(f.value); },
                 [&](const DataValue::String& s) { append_quoted(out, s.value); },
                 [&](const DataValue::Bool& b) { out += b.value ? "true" : "false"; },
                 [&](const DataValue::Null&) { out += "null"; },
                 [&](const DataValue::List& l) {
                   out += '[';
                   for (std::size_t i = 0; i < l.items->size(); ++i) {
                     if (i) out += "; ";
                     append_canonical(out, (*l.items)[i]);
                   }
                   out += ']';
                 },
                 [&](const DataValue::Record& r) {
                   append_name(out, r.name);
                   if (r.fields->empty()) {
                     out += " {}";
                     return;
                   }
                   std::vector<const std::pair<std::string, DataValue>*> sorted;
                   for (const auto& f : *r.fields) sorted.push_back(&f);
                   std::sort(sorted.begin(), sorted.end(), [](auto* x, auto* y) { return x->first < y->first; });
                   out += " { ";
                   for (std::size_t i = 0; i < sorted.size(); ++i) {
                     if (i) out += ", ";
                     append_name(out, sorted[i]->first);
                     out += " \xE2\x86\xA6 ";  // ↦
                     append_canonical(out, sorted[i]->second);
                   }
                   out += " }";
                 },
             },
             d.value());
}

}  // namespace detail

/// Deterministic single-line rendering: lists as `[d1; d2]`, records as
/// `name { f ↦ d, ... }` with fields sorted by name.
inline std::string canonical_text(const DataValue& d) {
  std::string out;
  detail::append_canonical(out, d);
  return out;
}

}  // namespace structprov
