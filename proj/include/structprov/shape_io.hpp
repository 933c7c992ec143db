#pragma once

// Shape serialization: the `.shape` JSON file and a reader for the textual
// notation produced by to_string.

#include <optional>
#include <string>
#include <string_view>

#include <nlohmann/json.hpp>

#include "structprov/error.hpp"
#include "structprov/shape.hpp"

namespace structprov {

inline constexpr int kShapeFileVersion = 1;

inline nlohmann::json shape_to_json(const Shape& s) {
  using nlohmann::json;
  switch (s.kind()) {
    case ShapeKind::Bot: return {{"kind", "bot"}};
    case ShapeKind::Null: return {{"kind", "null"}};
    case ShapeKind::Bool: return {{"kind", "bool"}};
    case ShapeKind::Bit: return {{"kind", "bit"}};
    case ShapeKind::Int: return {{"kind", "int"}};
    case ShapeKind::Float: return {{"kind", "float"}};
    case ShapeKind::Text: return {{"kind", "string"}};
    case ShapeKind::Nullable: return {{"kind", "nullable"}, {"inner", shape_to_json(s.inner())}};
    case ShapeKind::Any: {
      json labels = json::array();
      for (const auto& l : s.labels()) labels.push_back(shape_to_json(l));
      return {{"kind", "any"}, {"labels", labels}};
    }
    case ShapeKind::Collection: {
      json items = json::array();
      for (const auto& e : s.items())
        items.push_back({{"shape", shape_to_json(e.shape)}, {"multiplicity", multiplicity_text(e.multiplicity)}});
      return {{"kind", "collection"}, {"items", items}};
    }
    case ShapeKind::Record: {
      json fields = json::array();
      for (const auto& f : s.fields()) fields.push_back({{"name", f.name}, {"shape", shape_to_json(f.shape)}});
      return {{"kind", "record"}, {"name", s.record_name()}, {"fields", fields}};
    }
  }
  return {};
}

inline Shape shape_from_json(const nlohmann::json& j) {
  auto bad = [](const std::string& why) { return MalformedDocument("invalid shape: " + why, 0, 0); };
  if (!j.is_object() || !j.contains("kind") || !j["kind"].is_string()) throw bad("expected an object with a kind");
  const std::string kind = j["kind"];
  try {
    if (kind == "bot") return Shape::bot();
    if (kind == "null") return Shape::null();
    if (kind == "bool") return Shape::boolean();
    if (kind == "bit") return Shape::bit();
    if (kind == "int") return Shape::integer();
    if (kind == "float") return Shape::floating();
    if (kind == "string") return Shape::text();
    if (kind == "nullable") return Shape::nullable(shape_from_json(j.at("inner")));
    if (kind == "any") {
      std::vector<Shape> labels;
      for (const auto& l : j.at("labels")) labels.push_back(shape_from_json(l));
      return Shape::any(std::move(labels));
    }
    if (kind == "collection") {
      std::vector<HeteroEntry> items;
      for (const auto& e : j.at("items")) {
        const std::string m = e.at("multiplicity");
        Multiplicity mult = m == "1" ? Multiplicity::One
                            : m == "1?" ? Multiplicity::ZeroOrOne
                            : m == "*" ? Multiplicity::Many
                                       : throw bad("unknown multiplicity '" + m + "'");
        items.push_back({shape_from_json(e.at("shape")), mult});
      }
      return Shape::collection(std::move(items));
    }
    if (kind == "record") {
      std::vector<ShapeField> fields;
      for (const auto& f : j.at("fields")) fields.push_back({f.at("name").get<std::string>(), shape_from_json(f.at("shape"))});
      return Shape::record(j.at("name").get<std::string>(), std::move(fields));
    }
  } catch (const nlohmann::json::exception& e) {
    throw bad(e.what());
  } catch (const std::invalid_argument& e) {
    throw bad(e.what());
  }
  throw bad("unknown kind '" + kind + "'");
}

/// `name` is the type name hint for the root, usually the sample's stem.
inline std::string write_shape_file(const Shape& s, const std::optional<std::string>& name = std::nullopt) {
  nlohmann::json doc = {{"format", "structprov-shape"}, {"version", kShapeFileVersion}, {"shape", shape_to_json(s)}};
  if (name) doc["name"] = *name;
  return doc.dump(2) + "\n";
}

struct ShapeFile {
  Shape shape;
  std::optional<std::string> name;
};

inline ShapeFile read_shape_file_entry(std::string_view text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw MalformedDocument(std::string("shape file is not JSON: ") + e.what(), 0, 0);
  }
  if (!doc.is_object() || doc.value("format", "") != "structprov-shape")
    throw MalformedDocument("not a structprov shape file", 0, 0);
  if (doc.value("version", 0) != kShapeFileVersion)
    throw MalformedDocument("unsupported shape file version", 0, 0);
  if (!doc.contains("shape")) throw MalformedDocument("shape file has no shape", 0, 0);
  ShapeFile out{shape_from_json(doc.at("shape")), std::nullopt};
  if (doc.contains("name") && doc["name"].is_string()) out.name = doc["name"].get<std::string>();
  return out;
}

inline Shape read_shape_file(std::string_view text) { return read_shape_file_entry(text).shape; }

namespace detail {

class ShapeTextReader {
 public:
  explicit ShapeTextReader(std::string_view text) : s_(text) {}

  Shape read_all() {
    Shape out = read();
    skip_ws();
    if (p_ != s_.size()) fail("trailing input");
    return out;
  }

 private:
  static constexpr std::string_view kBot = "\xE2\x8A\xA5";

  [[noreturn]] void fail(const std::string& what) const {
    throw MalformedDocument("shape notation: " + what + " at offset " + std::to_string(p_), 1, p_ + 1);
  }
  void skip_ws() {
    while (p_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[p_]))) ++p_;
  }
  bool peek(std::string_view t) {
    skip_ws();
    return s_.substr(p_, t.size()) == t;
  }
  bool accept(std::string_view t) {
    if (!peek(t)) return false;
    p_ += t.size();
    return true;
  }
  void expect(std::string_view t) {
    if (!accept(t)) fail("expected '" + std::string(t) + "'");
  }

  std::string read_name() {
    skip_ws();
    if (p_ < s_.size() && s_[p_] == '"') {
      ++p_;
      std::string out;
      while (p_ < s_.size() && s_[p_] != '"') {
        if (s_[p_] == '\\' && p_ + 1 < s_.size()) {
          ++p_;
          char c = s_[p_];
          out += c == 'n' ? '\n' : c == 't' ? '\t' : c == 'r' ? '\r' : c;
        } else {
          out += s_[p_];
        }
        ++p_;
      }
      if (p_ >= s_.size()) fail("unterminated name");
      ++p_;
      return out;
    }
    std::size_t start = p_;
    while (p_ < s_.size() && is_shape_name_char(static_cast<unsigned char>(s_[p_]))) ++p_;
    if (start == p_) fail("expected a name");
    return std::string(s_.substr(start, p_ - start));
  }

  Multiplicity read_multiplicity() {
    if (accept("1?")) return Multiplicity::ZeroOrOne;
    if (accept("1")) return Multiplicity::One;
    if (accept("*")) return Multiplicity::Many;
    fail("expected a multiplicity");
  }

  Shape read_record(std::string name) {
    expect("{");
    std::vector<ShapeField> fields;
    if (!accept("}")) {
      do {
        std::string f = read_name();
        expect(":");
        fields.push_back({std::move(f), read()});
      } while (accept(","));
      expect("}");
    }
    return Shape::record(std::move(name), std::move(fields));
  }

  Shape read() {
    skip_ws();
    try {
      if (accept("[")) {
        if (accept(kBot)) {
          expect("]");
          return Shape::collection({});
        }
        Shape first = read();
        if (accept("]")) return Shape::list_of(std::move(first));
        std::vector<HeteroEntry> items;
        expect(",");
        items.push_back({std::move(first), read_multiplicity()});
        while (accept("|")) {
          Shape s = read();
          expect(",");
          items.push_back({std::move(s), read_multiplicity()});
        }
        expect("]");
        return Shape::collection(std::move(items));
      }
      if (peek("\"")) return read_record(read_name());
      if (accept(kBot)) return Shape::bot();
      std::string word = read_name();
      if (peek("{")) return read_record(std::move(word));
      if (word == "null") return Shape::null();
      if (word == "bool") return Shape::boolean();
      if (word == "bit") return Shape::bit();
      if (word == "int") return Shape::integer();
      if (word == "float") return Shape::floating();
      if (word == "string") return Shape::text();
      if (word == "nullable") {
        expect("<");
        Shape inner = read();
        expect(">");
        return Shape::nullable(std::move(inner));
      }
      if (word == "any") {
        std::vector<Shape> labels;
        if (accept("<")) {
          do labels.push_back(read());
          while (accept(","));
          expect(">");
        }
        return Shape::any(std::move(labels));
      }
      fail("unknown shape '" + word + "'");
    } catch (const std::invalid_argument& e) {
      fail(e.what());
    }
  }

  std::string_view s_;
  std::size_t p_ = 0;
};

}  // namespace detail

/// Reads the notation written by to_string.
inline Shape parse_shape_text(std::string_view text) { return detail::ShapeTextReader(text).read_all(); }

}  // namespace structprov
