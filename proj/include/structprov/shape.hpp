#pragma once

// The shape algebra: structural descriptions of data inferred from samples.

#include <algorithm>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "structprov/box.hpp"
#include "structprov/data_value.hpp"
#include "structprov/error.hpp"

namespace structprov {

/// How many elements of one tag a heterogeneous collection holds.
enum class Multiplicity { One, ZeroOrOne, Many };

inline std::string_view multiplicity_text(Multiplicity m) {
  switch (m) {
    case Multiplicity::One: return "1";
    case Multiplicity::ZeroOrOne: return "1?";
    case Multiplicity::Many: return "*";
  }
  return "?";
}

/// 1 < 1? < *
inline bool multiplicity_le(Multiplicity a, Multiplicity b) { return static_cast<int>(a) <= static_cast<int>(b); }

class Shape;
struct ShapeField;
struct HeteroEntry;

enum class ShapeKind { Bot, Null, Any, Bool, Bit, Int, Float, Text, Nullable, Collection, Record };

class Shape {
 public:
  struct Bot {};
  struct Null {};
  struct Any {
    std::vector<Shape> labels;
  };
  struct Bool {};
  struct Bit {};
  struct Int {};
  struct Float {};
  struct Text {};
  struct Nullable {
    Box<Shape> inner;
  };
  struct Collection {
    std::vector<HeteroEntry> items;
  };
  struct Record {
    std::string name;
    std::vector<ShapeField> fields;
  };
  // Alternative order matches ShapeKind.
  using Variant = std::variant<Bot, Null, Any, Bool, Bit, Int, Float, Text, Nullable, Collection, Record>;

  Shape() : v_(Bot{}) {}

  static Shape bot() { return Shape(Bot{}); }
  static Shape null() { return Shape(Null{}); }
  static Shape any(std::vector<Shape> labels = {});
  static Shape boolean() { return Shape(Bool{}); }
  static Shape bit() { return Shape(Bit{}); }
  static Shape integer() { return Shape(Int{}); }
  static Shape floating() { return Shape(Float{}); }
  static Shape text() { return Shape(Text{}); }
  /// Wraps a non-nullable shape (record or primitive).
  static Shape nullable(Shape inner);
  static Shape collection(std::vector<HeteroEntry> items);
  /// The homogeneous collection [σ]; [⊥] has no entries.
  static Shape list_of(Shape element);
  static Shape record(std::string name, std::vector<ShapeField> fields);

  ShapeKind kind() const noexcept { return static_cast<ShapeKind>(v_.index()); }
  const Variant& value() const noexcept { return v_; }

  bool is(ShapeKind k) const noexcept { return kind() == k; }
  bool is_primitive() const noexcept {
    auto k = kind();
    return k == ShapeKind::Bool || k == ShapeKind::Bit || k == ShapeKind::Int || k == ShapeKind::Float ||
           k == ShapeKind::Text;
  }
  /// Records and primitives: shapes whose values are never null.
  bool is_non_nullable() const noexcept { return is_primitive() || is(ShapeKind::Record); }

  const std::vector<Shape>& labels() const { return std::get<Any>(v_).labels; }
  const Shape& inner() const { return *std::get<Nullable>(v_).inner; }
  const std::vector<HeteroEntry>& items() const { return std::get<Collection>(v_).items; }
  const std::string& record_name() const { return std::get<Record>(v_).name; }
  const std::vector<ShapeField>& fields() const { return std::get<Record>(v_).fields; }
  const Shape* field(std::string_view name) const;

  /// A collection with no entries or a single Many entry.
  bool is_homogeneous() const;

 private:
  explicit Shape(Variant v) : v_(std::move(v)) {}
  Variant v_;
};

struct ShapeField {
  std::string name;
  Shape shape;
};

struct HeteroEntry {
  Shape shape;
  Multiplicity multiplicity;
};

/// Coarse classifier grouping shapes that have a non-top common shape.
struct ShapeTag {
  enum class Kind { Collection, Nullable, Number, String, Bool, Any, Record };
  Kind kind;
  std::string record_name;  // only for Record

  friend bool operator==(const ShapeTag& a, const ShapeTag& b) {
    return a.kind == b.kind && (a.kind != Kind::Record || a.record_name == b.record_name);
  }
};

inline std::string tag_text(const ShapeTag& t) {
  switch (t.kind) {
    case ShapeTag::Kind::Collection: return "collection";
    case ShapeTag::Kind::Nullable: return "nullable";
    case ShapeTag::Kind::Number: return "number";
    case ShapeTag::Kind::String: return "string";
    case ShapeTag::Kind::Bool: return "bool";
    case ShapeTag::Kind::Any: return "any";
    case ShapeTag::Kind::Record: return t.record_name;
  }
  return "?";
}

inline ShapeTag tag_of(const Shape& s) {
  using K = ShapeTag::Kind;
  switch (s.kind()) {
    case ShapeKind::Bot: throw UndefinedTag("the bottom shape has no tag");
    case ShapeKind::Null: throw UndefinedTag("the null shape has no tag");
    case ShapeKind::Any: return {K::Any, {}};
    case ShapeKind::Bool: return {K::Bool, {}};
    case ShapeKind::Bit:
    case ShapeKind::Int:
    case ShapeKind::Float: return {K::Number, {}};
    case ShapeKind::Text: return {K::String, {}};
    case ShapeKind::Nullable: return {K::Nullable, {}};
    case ShapeKind::Collection: return {K::Collection, {}};
    case ShapeKind::Record: return {K::Record, s.record_name()};
  }
  throw std::logic_error("unreachable");
}

/// Member name used for a tag when a provided class exposes one case per tag
/// (labelled tops and heterogeneous collections).
inline std::string tag_member_name(const ShapeTag& t) {
  switch (t.kind) {
    case ShapeTag::Kind::Collection: return "Array";
    case ShapeTag::Kind::Nullable: return "Nullable";
    case ShapeTag::Kind::Number: return "Number";
    case ShapeTag::Kind::String: return "String";
    case ShapeTag::Kind::Bool: return "Boolean";
    case ShapeTag::Kind::Any: return "Any";
    case ShapeTag::Kind::Record: return t.record_name == kBullet ? "Record" : t.record_name;
  }
  return "?";
}

inline Shape Shape::any(std::vector<Shape> labels) {
  for (std::size_t i = 0; i < labels.size(); ++i) {
    const Shape& l = labels[i];
    if (!l.is_non_nullable() && !l.is(ShapeKind::Collection))
      throw std::invalid_argument("any<...> labels must be records, primitives or collections");
    for (std::size_t j = 0; j < i; ++j) {
      if (tag_of(labels[j]) == tag_of(l)) throw std::invalid_argument("any<...> labels must have distinct tags");
    }
  }
  return Shape(Any{std::move(labels)});
}

inline Shape Shape::nullable(Shape inner) {
  if (!inner.is_non_nullable()) throw std::invalid_argument("nullable<...> wraps records and primitives only");
  return Shape(Nullable{Box<Shape>(std::move(inner))});
}

inline Shape Shape::collection(std::vector<HeteroEntry> items) {
  for (std::size_t i = 0; i < items.size(); ++i) {
    const Shape& s = items[i].shape;
    if (s.is(ShapeKind::Bot) || s.is(ShapeKind::Null) || s.is(ShapeKind::Nullable))
      throw std::invalid_argument("collection entries must be non-nullable");
    for (std::size_t j = 0; j < i; ++j) {
      if (tag_of(items[j].shape) == tag_of(s)) throw std::invalid_argument("collection entries must have distinct tags");
    }
  }
  return Shape(Collection{std::move(items)});
}

inline Shape Shape::list_of(Shape element) {
  if (element.is(ShapeKind::Bot)) return collection({});
  return collection({HeteroEntry{std::move(element), Multiplicity::Many}});
}

inline Shape Shape::record(std::string name, std::vector<ShapeField> fields) {
  for (std::size_t i = 0; i < fields.size(); ++i) {
    for (std::size_t j = 0; j < i; ++j) {
      if (fields[j].name == fields[i].name) throw std::invalid_argument("duplicate field '" + fields[i].name + "'");
    }
  }
  return Shape(Record{std::move(name), std::move(fields)});
}

inline const Shape* Shape::field(std::string_view name) const {
  for (const auto& f : fields()) {
    if (f.name == name) return &f.shape;
  }
  return nullptr;
}

inline bool Shape::is_homogeneous() const {
  const auto& xs = items();
  return xs.empty() || (xs.size() == 1 && xs[0].multiplicity == Multiplicity::Many);
}

/// Structural equality: record fields, labels and collection entries are
/// compared as sets (fields by name, labels and entries by tag).
inline bool shape_equal(const Shape& a, const Shape& b) {
  if (a.kind() != b.kind()) return false;
  switch (a.kind()) {
    case ShapeKind::Any: {
      if (a.labels().size() != b.labels().size()) return false;
      for (const Shape& l : a.labels()) {
        auto it = std::find_if(b.labels().begin(), b.labels().end(),
                               [&](const Shape& m) { return tag_of(m) == tag_of(l); });
        if (it == b.labels().end() || !shape_equal(l, *it)) return false;
      }
      return true;
    }
    case ShapeKind::Nullable: return shape_equal(a.inner(), b.inner());
    case ShapeKind::Collection: {
      if (a.items().size() != b.items().size()) return false;
      for (const HeteroEntry& e : a.items()) {
        auto it = std::find_if(b.items().begin(), b.items().end(),
                               [&](const HeteroEntry& f) { return tag_of(f.shape) == tag_of(e.shape); });
        if (it == b.items().end() || it->multiplicity != e.multiplicity || !shape_equal(e.shape, it->shape))
          return false;
      }
      return true;
    }
    case ShapeKind::Record: {
      if (a.record_name() != b.record_name() || a.fields().size() != b.fields().size()) return false;
      for (const ShapeField& f : a.fields()) {
        const Shape* other = b.field(f.name);
        if (other == nullptr || !shape_equal(f.shape, *other)) return false;
      }
      return true;
    }
    default: return true;
  }
}

/// ⟨σ⟩?: wraps non-nullable shapes; a collection becomes its nullable
/// version by relaxing exactly-one entries to zero-or-one, since null reads
/// as the empty collection. Everything else is returned unchanged.
inline Shape add_nullable(const Shape& s) {
  if (s.is_non_nullable()) return Shape::nullable(s);
  if (s.is(ShapeKind::Collection)) {
    std::vector<HeteroEntry> items = s.items();
    for (auto& e : items) {
      if (e.multiplicity == Multiplicity::One) e.multiplicity = Multiplicity::ZeroOrOne;
    }
    return Shape::collection(std::move(items));
  }
  return s;
}

/// ⌊σ⌋: unwraps one nullable layer.
inline Shape drop_nullable(const Shape& s) { return s.is(ShapeKind::Nullable) ? s.inner() : s; }

namespace detail {

inline bool is_shape_name_char(unsigned char c) { return c != ':' && is_name_char(c); }

// Like append_name, but ':' separates a field from its shape here.
inline void append_shape_name(std::string& out, std::string_view s) {
  bool bare = is_bare_name(s) && s.find(':') == std::string_view::npos && s != "true" && s != "false" && s != "null";
  if (bare) {
    out += s;
  } else {
    append_quoted(out, s);
  }
}

inline void append_shape(std::string& out, const Shape& s, bool sorted);

inline std::string shape_text_impl(const Shape& s, bool sorted) {
  std::string out;
  append_shape(out, s, sorted);
  return out;
}

inline void append_shape(std::string& out, const Shape& s, bool sorted) {
  switch (s.kind()) {
    case ShapeKind::Bot: out += "\xE2\x8A\xA5"; return;  // ⊥
    case ShapeKind::Null: out += "null"; return;
    case ShapeKind::Bool: out += "bool"; return;
    case ShapeKind::Bit: out += "bit"; return;
    case ShapeKind::Int: out += "int"; return;
    case ShapeKind::Float: out += "float"; return;
    case ShapeKind::Text: out += "string"; return;
    case ShapeKind::Nullable:
      out += "nullable<";
      append_shape(out, s.inner(), sorted);
      out += '>';
      return;
    case ShapeKind::Any: {
      out += "any";
      if (s.labels().empty()) return;
      std::vector<std::string> parts;
      for (const Shape& l : s.labels()) parts.push_back(shape_text_impl(l, sorted));
      if (sorted) std::sort(parts.begin(), parts.end());
      out += '<';
      for (std::size_t i = 0; i < parts.size(); ++i) out += (i ? ", " : "") + parts[i];
      out += '>';
      return;
    }
    case ShapeKind::Collection: {
      if (s.items().empty()) {
        out += "[\xE2\x8A\xA5]";
        return;
      }
      if (s.is_homogeneous()) {
        out += '[';
        append_shape(out, s.items()[0].shape, sorted);
        out += ']';
        return;
      }
      std::vector<std::string> parts;
      for (const HeteroEntry& e : s.items())
        parts.push_back(shape_text_impl(e.shape, sorted) + ", " + std::string(multiplicity_text(e.multiplicity)));
      if (sorted) std::sort(parts.begin(), parts.end());
      out += '[';
      for (std::size_t i = 0; i < parts.size(); ++i) out += (i ? " | " : "") + parts[i];
      out += ']';
      return;
    }
    case ShapeKind::Record: {
      append_shape_name(out, s.record_name());
      if (s.fields().empty()) {
        out += " {}";
        return;
      }
      std::vector<std::string> parts;
      for (const ShapeField& f : s.fields()) {
        std::string p;
        append_shape_name(p, f.name);
        p += ": ";
        append_shape(p, f.shape, sorted);
        parts.push_back(std::move(p));
      }
      if (sorted) std::sort(parts.begin(), parts.end());
      out += " { ";
      for (std::size_t i = 0; i < parts.size(); ++i) out += (i ? ", " : "") + parts[i];
      out += " }";
      return;
    }
  }
}

}  // namespace detail

/// Notation such as `• { age: nullable<float>, name: string }`, `[int]`,
/// `any<float, bool>`, `[• { pages: int }, 1 | [...], 1]`.
inline std::string to_string(const Shape& s) { return detail::shape_text_impl(s, false); }

/// Order-insensitive text; equal keys iff shape_equal.
inline std::string shape_key(const Shape& s) { return detail::shape_text_impl(s, true); }

}  // namespace structprov
