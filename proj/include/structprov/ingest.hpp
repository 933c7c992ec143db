#pragma once

// Parsers turning JSON, XML and CSV text into DataValue.

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "structprov/data_value.hpp"
#include "structprov/error.hpp"
#include "structprov/lexical.hpp"

namespace structprov {

enum class SourceFormat { Json, Xml, Csv };

inline std::string_view format_name(SourceFormat f) {
  switch (f) {
    case SourceFormat::Json: return "json";
    case SourceFormat::Xml: return "xml";
    case SourceFormat::Csv: return "csv";
  }
  return "?";
}

inline std::optional<SourceFormat> parse_format_name(std::string_view s) {
  if (lexical::iequals(s, "json")) return SourceFormat::Json;
  if (lexical::iequals(s, "xml")) return SourceFormat::Xml;
  if (lexical::iequals(s, "csv")) return SourceFormat::Csv;
  return std::nullopt;
}

/// Format implied by a file extension, if unambiguous.
inline std::optional<SourceFormat> format_from_extension(const std::filesystem::path& path) {
  std::string ext = path.extension().string();
  if (!ext.empty()) ext.erase(0, 1);
  return parse_format_name(ext);
}

struct IngestConfig {
  std::set<std::string> missing_tokens{"", "#N/A", "NA", "null"};
  // Only "YYYY-MM-DD" is recognised. Dates stay textual values.
  std::vector<std::string> date_formats{"YYYY-MM-DD"};
  // Whether inference may read numbers and booleans out of JSON string
  // literals. Consumed by InferenceConfig; kept here because it is a
  // property of how the source is read.
  bool parse_json_strings = true;
  bool bit_inference = true;
};

inline void validate(const IngestConfig& cfg, SourceFormat format) {
  if (format == SourceFormat::Csv && cfg.missing_tokens.empty())
    throw std::invalid_argument("CSV ingestion needs at least one missing-value token");
  for (const auto& f : cfg.date_formats) {
    if (f != "YYYY-MM-DD") throw std::invalid_argument("unsupported date format '" + f + "'");
  }
}

inline bool is_date_text(std::string_view text, const IngestConfig& cfg) {
  return std::any_of(cfg.date_formats.begin(), cfg.date_formats.end(),
                     [&](const std::string& f) { return f == "YYYY-MM-DD" && lexical::is_iso_date(text); });
}

/// Reads a primitive out of untyped text. Total: anything unrecognised is a
/// string.
inline DataValue infer_primitive_text(std::string_view cell, const IngestConfig& cfg) {
  std::string_view text = lexical::trim(cell);
  if (cfg.missing_tokens.count(std::string(text)) != 0) return DataValue::null();
  if (auto i = lexical::parse_int(text)) return DataValue::integer(*i, cfg.bit_inference && (*i == 0 || *i == 1));
  if (auto f = lexical::parse_float(text)) return DataValue::floating(*f);
  if (auto b = lexical::parse_bool(text)) return DataValue::boolean(*b);
  // Dates are recognised but carried as text; there is no date shape.
  return DataValue::string(std::string(text));
}

namespace detail {

inline std::pair<std::size_t, std::size_t> line_column(std::string_view text, std::size_t offset) {
  std::size_t line = 1;
  std::size_t column = 1;
  for (std::size_t i = 0; i < std::min(offset, text.size()); ++i) {
    if (text[i] == '\n') {
      ++line;
      column = 1;
    } else {
      ++column;
    }
  }
  return {line, column};
}

class JsonBuilder : public nlohmann::json_sax<nlohmann::json> {
 public:
  explicit JsonBuilder(std::string_view text) : text_(text) {}

  bool null() override { return emit(DataValue::null()); }
  bool boolean(bool b) override { return emit(DataValue::boolean(b)); }
  bool number_integer(number_integer_t v) override { return emit(DataValue::integer(v)); }
  bool number_unsigned(number_unsigned_t v) override {
    if (v > static_cast<number_unsigned_t>(INT64_MAX)) return emit(DataValue::floating(static_cast<double>(v)));
    return emit(DataValue::integer(static_cast<std::int64_t>(v)));
  }
  bool number_float(number_float_t v, const string_t&) override { return emit(DataValue::floating(v)); }
  bool string(string_t& s) override { return emit(DataValue::string(s)); }
  bool binary(binary_t&) override { return false; }
  bool start_object(std::size_t) override {
    stack_.push_back(Frame{true, {}, {}, {}});
    return true;
  }
  bool key(string_t& k) override {
    stack_.back().pending_key = k;
    return true;
  }
  bool end_object() override {
    Frame f = std::move(stack_.back());
    stack_.pop_back();
    return emit(DataValue::record(kBullet, std::move(f.fields)));
  }
  bool start_array(std::size_t) override {
    stack_.push_back(Frame{false, {}, {}, {}});
    return true;
  }
  bool end_array() override {
    Frame f = std::move(stack_.back());
    stack_.pop_back();
    return emit(DataValue::list(std::move(f.items)));
  }
  bool parse_error(std::size_t position, const std::string&, const nlohmann::detail::exception& ex) override {
    std::size_t offset = position == 0 ? 0 : position - 1;
    for (std::size_t start : {offset, offset == 0 ? 0 : offset - 1}) {
      std::string_view rest = text_.substr(std::min(start, text_.size()));
      if (rest.rfind("NaN", 0) == 0 || rest.rfind("Infinity", 0) == 0 || rest.rfind("-Infinity", 0) == 0)
        throw UnrepresentableNumber("non-finite numeric literal in JSON");
    }
    if (ex.id == 406) throw UnrepresentableNumber(std::string("numeric literal out of range: ") + ex.what());
    auto [line, column] = line_column(text_, offset);
    throw MalformedDocument(std::string("invalid JSON: ") + ex.what(), line, column);
  }

  DataValue result() const { return result_.value_or(DataValue::null()); }

 private:
  struct Frame {
    bool is_object;
    std::vector<DataValue> items;
    std::vector<std::pair<std::string, DataValue>> fields;
    std::string pending_key;
  };

  bool emit(DataValue v) {
    if (stack_.empty()) {
      result_ = std::move(v);
      return true;
    }
    Frame& f = stack_.back();
    if (!f.is_object) {
      f.items.push_back(std::move(v));
      return true;
    }
    auto it = std::find_if(f.fields.begin(), f.fields.end(), [&](const auto& p) { return p.first == f.pending_key; });
    if (it != f.fields.end()) {
      it->second = std::move(v);  // later duplicate key wins
    } else if (f.pending_key.empty()) {
      auto [line, column] = line_column(text_, 0);
      throw MalformedDocument("empty JSON object key", line, column);
    } else {
      f.fields.emplace_back(f.pending_key, std::move(v));
    }
    return true;
  }

  std::string_view text_;
  std::vector<Frame> stack_;
  std::optional<DataValue> result_;
};

}  // namespace detail

/// Objects become records named "•", arrays lists; strings are kept verbatim.
inline DataValue parse_json(std::string_view text, const IngestConfig& = {}) {
  detail::JsonBuilder builder(text);
  nlohmann::json::sax_parse(text.begin(), text.end(), &builder);
  return builder.result();
}

namespace detail {

class XmlReader {
 public:
  // Bit candidates come from CSV cells only; an XML attribute such as
  // id="1" stays an integer.
  XmlReader(std::string_view text, const IngestConfig& cfg) : text_(text), cfg_(cfg) { cfg_.bit_inference = false; }

  DataValue document() {
    skip_misc();
    if (at_end() || peek() != '<') fail("expected root element");
    DataValue root = element();
    skip_misc();
    if (!at_end()) fail("content after the root element");
    return root;
  }

 private:
  [[noreturn]] void fail(const std::string& message) const {
    auto [line, column] = line_column(text_, pos_);
    throw MalformedDocument("invalid XML: " + message, line, column);
  }

  bool at_end() const { return pos_ >= text_.size(); }
  char peek() const { return text_[pos_]; }
  bool starts_with(std::string_view s) const { return text_.substr(pos_, s.size()) == s; }

  void expect(std::string_view s) {
    if (!starts_with(s)) fail("expected '" + std::string(s) + "'");
    pos_ += s.size();
  }

  void skip_space() {
    while (!at_end() && std::isspace(static_cast<unsigned char>(peek()))) ++pos_;
  }

  void skip_until(std::string_view terminator) {
    std::size_t end = text_.find(terminator, pos_);
    if (end == std::string_view::npos) fail("unterminated construct, missing '" + std::string(terminator) + "'");
    pos_ = end + terminator.size();
  }

  // Whitespace, comments, processing instructions and DOCTYPE.
  void skip_misc() {
    for (;;) {
      skip_space();
      if (starts_with("<!--")) {
        skip_until("-->");
      } else if (starts_with("<?")) {
        skip_until("?>");
      } else if (starts_with("<!DOCTYPE")) {
        skip_doctype();
      } else {
        return;
      }
    }
  }

  void skip_doctype() {
    int depth = 0;
    while (!at_end()) {
      char c = text_[pos_++];
      if (c == '[') ++depth;
      if (c == ']') --depth;
      if (c == '>' && depth == 0) return;
    }
    fail("unterminated DOCTYPE");
  }

  std::string name() {
    std::size_t start = pos_;
    if (at_end() || !is_name_start(static_cast<unsigned char>(peek()))) fail("expected a name");
    while (!at_end() && is_name_char(static_cast<unsigned char>(peek()))) ++pos_;
    std::string n(text_.substr(start, pos_ - start));
    if (n == kBullet) fail("the name '\xE2\x80\xA2' is reserved");
    return n;
  }

  static void append_utf8(std::string& out, std::uint32_t cp) {
    if (cp < 0x80) {
      out += static_cast<char>(cp);
    } else if (cp < 0x800) {
      out += static_cast<char>(0xC0 | (cp >> 6));
      out += static_cast<char>(0x80 | (cp & 0x3F));
    } else if (cp < 0x10000) {
      out += static_cast<char>(0xE0 | (cp >> 12));
      out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
      out += static_cast<char>(0x80 | (cp & 0x3F));
    } else {
      out += static_cast<char>(0xF0 | (cp >> 18));
      out += static_cast<char>(0x80 | ((cp >> 12) & 0x3F));
      out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
      out += static_cast<char>(0x80 | (cp & 0x3F));
    }
  }

  void entity(std::string& out) {
    std::size_t end = text_.find(';', pos_);
    if (end == std::string_view::npos || end - pos_ > 12) fail("malformed entity reference");
    std::string_view ref = text_.substr(pos_ + 1, end - pos_ - 1);
    if (ref == "lt") out += '<';
    else if (ref == "gt") out += '>';
    else if (ref == "amp") out += '&';
    else if (ref == "quot") out += '"';
    else if (ref == "apos") out += '\'';
    else if (ref.size() > 1 && ref[0] == '#') {
      std::uint32_t cp = 0;
      bool hex = ref[1] == 'x' || ref[1] == 'X';
      std::string_view digits = ref.substr(hex ? 2 : 1);
      auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), cp, hex ? 16 : 10);
      if (digits.empty() || ec != std::errc() || ptr != digits.data() + digits.size() || cp > 0x10FFFF)
        fail("bad character reference");
      append_utf8(out, cp);
    } else {
      fail("unknown entity '&" + std::string(ref) + ";'");
    }
    pos_ = end + 1;
  }

  std::string attribute_value() {
    if (at_end() || (peek() != '"' && peek() != '\'')) fail("expected quoted attribute value");
    char quote = text_[pos_++];
    std::string out;
    while (!at_end() && peek() != quote) {
      if (peek() == '<') fail("'<' in attribute value");
      if (peek() == '&') {
        entity(out);
      } else {
        out += text_[pos_++];
      }
    }
    if (at_end()) fail("unterminated attribute value");
    ++pos_;
    return out;
  }

  DataValue element() {
    expect("<");
    std::string tag = name();
    std::vector<std::pair<std::string, DataValue>> fields;
    for (;;) {
      skip_space();
      if (at_end()) fail("unterminated start tag");
      if (starts_with("/>")) {
        pos_ += 2;
        return DataValue::record(tag, std::move(fields));
      }
      if (peek() == '>') {
        ++pos_;
        break;
      }
      std::string attr = name();
      skip_space();
      expect("=");
      skip_space();
      std::string value = attribute_value();
      if (std::any_of(fields.begin(), fields.end(), [&](const auto& f) { return f.first == attr; }))
        fail("duplicate attribute '" + attr + "'");
      fields.emplace_back(attr, infer_primitive_text(value, cfg_));
    }

    std::vector<DataValue> children;
    std::string text;
    for (;;) {
      if (at_end()) fail("missing end tag for <" + tag + ">");
      if (starts_with("</")) {
        pos_ += 2;
        std::string closing = name();
        if (closing != tag) fail("end tag </" + closing + "> does not match <" + tag + ">");
        skip_space();
        expect(">");
        break;
      }
      if (starts_with("<!--")) {
        skip_until("-->");
      } else if (starts_with("<![CDATA[")) {
        pos_ += 9;
        std::size_t end = text_.find("]]>", pos_);
        if (end == std::string_view::npos) fail("unterminated CDATA section");
        text += text_.substr(pos_, end - pos_);
        pos_ = end + 3;
      } else if (starts_with("<?")) {
        skip_until("?>");
      } else if (peek() == '<') {
        children.push_back(element());
      } else if (peek() == '&') {
        entity(text);
      } else {
        text += text_[pos_++];
      }
    }
    // Child elements win over free text in mixed content.
    if (!children.empty()) {
      fields.emplace_back(kBullet, DataValue::list(std::move(children)));
    } else if (!lexical::trim(text).empty()) {
      fields.emplace_back(kBullet, infer_primitive_text(text, cfg_));
    }
    return DataValue::record(tag, std::move(fields));
  }

  std::string_view text_;
  IngestConfig cfg_;
  std::size_t pos_ = 0;
};

}  // namespace detail

/// Elements become records named by their tag; attributes become fields and
/// element content becomes the field "•".
inline DataValue parse_xml(std::string_view text, const IngestConfig& cfg = {}) {
  return detail::XmlReader(text, cfg).document();
}

namespace detail {

struct CsvRow {
  std::vector<std::string> cells;
  std::size_t line;
};

inline std::vector<CsvRow> split_csv(std::string_view text) {
  std::vector<CsvRow> rows;
  std::vector<std::string> cells;
  std::string cell;
  bool quoted_cell = false;
  bool row_has_content = false;
  std::size_t line = 1;
  std::size_t row_line = 1;
  std::size_t i = 0;

  auto finish_cell = [&] {
    cells.push_back(quoted_cell ? cell : std::string(lexical::trim(cell)));
    cell.clear();
    quoted_cell = false;
  };
  auto finish_row = [&] {
    finish_cell();
    if (row_has_content) rows.push_back(CsvRow{std::move(cells), row_line});
    cells.clear();
    row_has_content = false;
  };

  while (i < text.size()) {
    char c = text[i];
    if (c == '"' && lexical::trim(cell).empty() && !quoted_cell) {
      cell.clear();
      quoted_cell = true;
      row_has_content = true;
      ++i;
      for (;;) {
        if (i >= text.size()) {
          auto [l, col] = line_column(text, i);
          throw MalformedDocument("unterminated quoted CSV field", l, col);
        }
        if (text[i] == '"') {
          if (i + 1 < text.size() && text[i + 1] == '"') {
            cell += '"';
            i += 2;
            continue;
          }
          ++i;
          break;
        }
        if (text[i] == '\n') ++line;
        cell += text[i++];
      }
      while (i < text.size() && (text[i] == ' ' || text[i] == '\t')) ++i;
      if (i < text.size() && text[i] != ',' && text[i] != '\n' && text[i] != '\r') {
        auto [l, col] = line_column(text, i);
        throw MalformedDocument("unexpected character after quoted CSV field", l, col);
      }
      continue;
    }
    if (c == ',') {
      finish_cell();
      row_has_content = true;
      ++i;
    } else if (c == '\r' || c == '\n') {
      finish_row();
      if (c == '\r' && i + 1 < text.size() && text[i + 1] == '\n') ++i;
      ++i;
      ++line;
      row_line = line;
    } else {
      if (!std::isspace(static_cast<unsigned char>(c))) row_has_content = true;
      cell += c;
      ++i;
    }
  }
  finish_row();
  return rows;
}

}  // namespace detail

/// A list of records named "•", one per data row, keyed by the header.
inline DataValue parse_csv(std::string_view text, const IngestConfig& cfg = {}) {
  validate(cfg, SourceFormat::Csv);
  std::vector<detail::CsvRow> rows = detail::split_csv(text);
  if (rows.empty()) throw EmptyInput("CSV input has no header row");

  std::vector<std::string> header;
  for (std::size_t c = 0; c < rows[0].cells.size(); ++c) {
    std::string h = rows[0].cells[c];
    if (h.empty()) h = "Column" + std::to_string(c + 1);
    if (std::find(header.begin(), header.end(), h) != header.end())
      throw MalformedDocument("duplicate CSV column '" + h + "'", rows[0].line, c + 1);
    header.push_back(std::move(h));
  }

  std::vector<DataValue> records;
  for (std::size_t r = 1; r < rows.size(); ++r) {
    const auto& row = rows[r];
    if (row.cells.size() != header.size()) {
      throw MalformedDocument("row has " + std::to_string(row.cells.size()) + " cells but the header has " +
                                  std::to_string(header.size()),
                              row.line, std::min(row.cells.size(), header.size()) + 1);
    }
    std::vector<std::pair<std::string, DataValue>> fields;
    for (std::size_t c = 0; c < header.size(); ++c) fields.emplace_back(header[c], infer_primitive_text(row.cells[c], cfg));
    records.push_back(DataValue::record(kBullet, std::move(fields)));
  }
  return DataValue::list(std::move(records));
}

inline DataValue parse_document(std::string_view text, SourceFormat format, const IngestConfig& cfg = {}) {
  switch (format) {
    case SourceFormat::Json: return parse_json(text, cfg);
    case SourceFormat::Xml: return parse_xml(text, cfg);
    case SourceFormat::Csv: return parse_csv(text, cfg);
  }
  throw std::invalid_argument("unknown source format");
}

}  // namespace structprov
