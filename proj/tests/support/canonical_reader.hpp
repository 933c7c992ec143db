#pragma once

// Test-only reader for canonical_text output.

#include <charconv>
#include <stdexcept>
#include <string>
#include <string_view>

#include "structprov/data_value.hpp"

namespace testsupport {

class CanonicalReader {
 public:
  explicit CanonicalReader(std::string_view s) : s_(s) {}

  structprov::DataValue read_all() {
    structprov::DataValue v = value();
    ws();
    if (p_ != s_.size()) fail("trailing text");
    return v;
  }

 private:
  static constexpr std::string_view kMapsTo = "\xE2\x86\xA6";

  [[noreturn]] void fail(const std::string& why) const {
    throw std::runtime_error("canonical reader: " + why + " at offset " + std::to_string(p_));
  }
  void ws() {
    while (p_ < s_.size() && s_[p_] == ' ') ++p_;
  }
  bool eat(std::string_view t) {
    ws();
    if (s_.substr(p_, t.size()) == t) {
      p_ += t.size();
      return true;
    }
    return false;
  }
  void expect(std::string_view t) {
    if (!eat(t)) fail("expected '" + std::string(t) + "'");
  }

  std::string quoted() {
    expect("\"");
    std::string out;
    while (p_ < s_.size() && s_[p_] != '"') {
      char c = s_[p_++];
      if (c != '\\') {
        out += c;
        continue;
      }
      char e = s_[p_++];
      switch (e) {
        case 'n': out += '\n'; break;
        case 'r': out += '\r'; break;
        case 't': out += '\t'; break;
        case 'u': out += static_cast<char>(std::stoi(std::string(s_.substr(p_, 4)), nullptr, 16)); p_ += 4; break;
        default: out += e;
      }
    }
    expect("\"");
    return out;
  }

  static bool name_char(unsigned char c) {
    return std::isalnum(c) || c == '_' || c == '-' || c == '.' || c == ':' || c >= 0x80;
  }

  std::string name() {
    ws();
    if (p_ < s_.size() && s_[p_] == '"') return quoted();
    std::size_t start = p_;
    while (p_ < s_.size() && name_char(static_cast<unsigned char>(s_[p_])) && s_.substr(p_, 3) != kMapsTo) ++p_;
    if (start == p_) fail("expected a name");
    return std::string(s_.substr(start, p_ - start));
  }

  structprov::DataValue record_body(std::string rname) {
    std::vector<std::pair<std::string, structprov::DataValue>> fields;
    if (eat("{}")) return structprov::DataValue::record(std::move(rname), {});
    expect("{");
    do {
      std::string f = name();
      expect(kMapsTo);
      fields.push_back({f, value()});
    } while (eat(","));
    expect("}");
    return structprov::DataValue::record(std::move(rname), std::move(fields));
  }

  structprov::DataValue value() {
    using structprov::DataValue;
    ws();
    if (p_ >= s_.size()) fail("unexpected end");
    char c = s_[p_];
    if (c == '[') {
      ++p_;
      std::vector<DataValue> items;
      if (eat("]")) return DataValue::list({});
      do items.push_back(value());
      while (eat(";"));
      expect("]");
      return DataValue::list(std::move(items));
    }
    if (c == '"') {
      std::size_t save = p_;
      std::string s = quoted();
      ws();
      if (p_ < s_.size() && s_[p_] == '{') return record_body(s);
      (void)save;
      return DataValue::string(s);
    }
    if (c == '-' || std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t start = p_++;
      while (p_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[p_])) || s_[p_] == '.' || s_[p_] == '-' || s_[p_] == '+')) ++p_;
      std::string_view num = s_.substr(start, p_ - start);
      if (num.find_first_of(".eEin") != std::string_view::npos) {
        double d = 0;
        std::from_chars(num.data(), num.data() + num.size(), d);
        return DataValue::floating(d);
      }
      std::int64_t i = 0;
      std::from_chars(num.data(), num.data() + num.size(), i);
      return DataValue::integer(i);
    }
    if (eat("true")) return DataValue::boolean(true);
    if (eat("false")) return DataValue::boolean(false);
    if (eat("null")) return DataValue::null();
    return record_body(name());
  }

  std::string_view s_;
  std::size_t p_ = 0;
};

inline structprov::DataValue read_canonical(std::string_view s) { return CanonicalReader(s).read_all(); }

}  // namespace testsupport
