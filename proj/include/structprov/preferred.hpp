#pragma once

// The preferred-shape relation and the common preferred shape (csh).

#include <optional>
#include <string>
#include <vector>

#include "structprov/shape.hpp"

namespace structprov {

inline bool is_preferred(const Shape& a, const Shape& b);

namespace detail {

inline bool primitive_le(ShapeKind a, ShapeKind b) {
  if (a == b) return true;
  if (a == ShapeKind::Bit) return b == ShapeKind::Int || b == ShapeKind::Float || b == ShapeKind::Bool;
  return a == ShapeKind::Int && b == ShapeKind::Float;
}

inline const HeteroEntry* find_entry(const std::vector<HeteroEntry>& items, const ShapeTag& tag) {
  for (const auto& e : items) {
    if (tag_of(e.shape) == tag) return &e;
  }
  return nullptr;
}

// Index of the entry of b that receives entry `e` of a, or -1.
inline int target_entry(const HeteroEntry& e, const std::vector<HeteroEntry>& b) {
  const ShapeTag tag = tag_of(e.shape);
  for (std::size_t i = 0; i < b.size(); ++i) {
    if (tag_of(b[i].shape) == tag && is_preferred(e.shape, b[i].shape)) return static_cast<int>(i);
  }
  // A bit element may land in a bool entry.
  for (std::size_t i = 0; i < b.size(); ++i) {
    if (is_preferred(e.shape, b[i].shape)) return static_cast<int>(i);
  }
  for (std::size_t i = 0; i < b.size(); ++i) {
    if (b[i].shape.is(ShapeKind::Any)) return static_cast<int>(i);
  }
  return -1;
}

inline bool collection_le(const Shape& a, const Shape& b) {
  const auto& bi = b.items();
  std::vector<std::vector<Multiplicity>> incoming(bi.size());
  for (const auto& e : a.items()) {
    int t = target_entry(e, bi);
    if (t < 0) return false;
    incoming[static_cast<std::size_t>(t)].push_back(e.multiplicity);
  }
  for (std::size_t i = 0; i < bi.size(); ++i) {
    const auto& in = incoming[i];
    if (in.empty()) {
      if (bi[i].multiplicity == Multiplicity::One) return false;
    } else if (in.size() == 1) {
      if (!multiplicity_le(in[0], bi[i].multiplicity)) return false;
    } else if (bi[i].multiplicity != Multiplicity::Many) {
      return false;
    }
  }
  return true;
}

inline bool record_le(const Shape& a, const Shape& b) {
  if (a.record_name() != b.record_name()) return false;
  for (const auto& f : b.fields()) {
    const Shape* mine = a.field(f.name);
    if (mine != nullptr ? !is_preferred(*mine, f.shape) : !is_preferred(Shape::null(), f.shape)) return false;
  }
  return true;
}

}  // namespace detail

/// a ⊑ b: a is preferred over (more specific than) b.
inline bool is_preferred(const Shape& a, const Shape& b) {
  if (b.is(ShapeKind::Any) || a.is(ShapeKind::Bot)) return true;
  if (a.is(ShapeKind::Null)) {
    switch (b.kind()) {
      case ShapeKind::Null:
      case ShapeKind::Nullable: return true;
      case ShapeKind::Collection: {
        for (const auto& e : b.items()) {
          if (e.multiplicity == Multiplicity::One) return false;
        }
        return true;
      }
      default: return false;
    }
  }
  switch (b.kind()) {
    case ShapeKind::Bot:
    case ShapeKind::Null:
    case ShapeKind::Any: return false;
    case ShapeKind::Nullable:
      if (a.is(ShapeKind::Nullable)) return is_preferred(a.inner(), b.inner());
      return a.is_non_nullable() && is_preferred(a, b.inner());
    case ShapeKind::Collection: return a.is(ShapeKind::Collection) && detail::collection_le(a, b);
    case ShapeKind::Record: return a.is(ShapeKind::Record) && detail::record_le(a, b);
    default: return a.is_primitive() && detail::primitive_le(a.kind(), b.kind());
  }
}

inline bool shape_equivalent(const Shape& a, const Shape& b) { return is_preferred(a, b) && is_preferred(b, a); }

/// Explains the first place where a ⋢ b, e.g. ".name: int ⋢ string".
/// Returns nullopt when a ⊑ b.
inline std::optional<std::string> explain_not_preferred(const Shape& a, const Shape& b, const std::string& path = "") {
  if (is_preferred(a, b)) return std::nullopt;
  const std::string here = path.empty() ? "." : path;
  auto plain = [&] { return here + ": " + to_string(a) + " \xE2\x8B\xA2 " + to_string(b); };
  if (a.is(ShapeKind::Record) && b.is(ShapeKind::Record) && a.record_name() == b.record_name()) {
    for (const auto& f : b.fields()) {
      const Shape* mine = a.field(f.name);
      std::string fp = path + "." + f.name;
      if (mine == nullptr) {
        if (!is_preferred(Shape::null(), f.shape)) return fp + ": missing required field of shape " + to_string(f.shape);
      } else if (auto why = explain_not_preferred(*mine, f.shape, fp)) {
        return why;
      }
    }
  }
  if (a.is(ShapeKind::Nullable) && b.is(ShapeKind::Nullable)) return explain_not_preferred(a.inner(), b.inner(), path);
  if (a.is_non_nullable() && b.is(ShapeKind::Nullable)) return explain_not_preferred(a, b.inner(), path);
  if (a.is(ShapeKind::Collection) && b.is(ShapeKind::Collection)) {
    for (const auto& e : a.items()) {
      const HeteroEntry* same = detail::find_entry(b.items(), tag_of(e.shape));
      if (same != nullptr && !is_preferred(e.shape, same->shape) && detail::target_entry(e, b.items()) < 0)
        return explain_not_preferred(e.shape, same->shape, path + "[]");
    }
  }
  return plain();
}

// ---------------------------------------------------------------------------
// csh

inline Shape csh(const Shape& a, const Shape& b);

namespace detail {

inline Multiplicity join_multiplicity(Multiplicity a, Multiplicity b) {
  if (a == Multiplicity::One && b == Multiplicity::One) return Multiplicity::One;
  if (a == Multiplicity::Many || b == Multiplicity::Many) return Multiplicity::Many;
  return Multiplicity::ZeroOrOne;
}

inline Multiplicity one_sided(Multiplicity m) { return m == Multiplicity::One ? Multiplicity::ZeroOrOne : m; }

inline Shape merge_collections(const Shape& a, const Shape& b) {
  std::vector<HeteroEntry> out;
  for (const auto& e : a.items()) {
    const HeteroEntry* other = find_entry(b.items(), tag_of(e.shape));
    if (other == nullptr) {
      out.push_back({e.shape, one_sided(e.multiplicity)});
    } else {
      out.push_back({csh(e.shape, other->shape), join_multiplicity(e.multiplicity, other->multiplicity)});
    }
  }
  for (const auto& e : b.items()) {
    if (find_entry(a.items(), tag_of(e.shape)) == nullptr) out.push_back({e.shape, one_sided(e.multiplicity)});
  }
  return Shape::collection(std::move(out));
}

// Adds one shape into a label list, merging with the same-tag label.
inline void add_label(std::vector<Shape>& labels, const Shape& s) {
  Shape key = drop_nullable(s);
  const ShapeTag tag = tag_of(key);
  for (auto& l : labels) {
    if (tag_of(l) == tag) {
      l = drop_nullable(csh(s, l));
      return;
    }
  }
  labels.push_back(std::move(key));
}

inline Shape merge_records(const Shape& a, const Shape& b) {
  std::vector<ShapeField> out;
  for (const auto& f : a.fields()) {
    const Shape* other = b.field(f.name);
    out.push_back({f.name, other ? csh(f.shape, *other) : add_nullable(f.shape)});
  }
  for (const auto& f : b.fields()) {
    if (a.field(f.name) == nullptr) out.push_back({f.name, add_nullable(f.shape)});
  }
  return Shape::record(a.record_name(), std::move(out));
}

inline bool kinds_are(const Shape& a, const Shape& b, ShapeKind x, ShapeKind y) {
  return (a.is(x) && b.is(y)) || (a.is(y) && b.is(x));
}

}  // namespace detail

/// Common preferred shape. Rules are tried in a fixed order.
inline Shape csh(const Shape& a, const Shape& b) {
  using K = ShapeKind;
  if (shape_equal(a, b)) return a;                                                        // eq
  if (a.is(K::Collection) && b.is(K::Collection)) return detail::merge_collections(a, b);  // list
  if (a.is(K::Bot)) return b;                                                             // bot
  if (b.is(K::Bot)) return a;
  if (a.is(K::Null)) return add_nullable(b);  // null
  if (b.is(K::Null)) return add_nullable(a);
  if (a.is(K::Any) || b.is(K::Any)) {  // top-merge, top-incl, top-add
    std::vector<Shape> labels;
    const Shape& first = a.is(K::Any) ? a : b;
    const Shape& second = a.is(K::Any) ? b : a;
    labels = first.labels();
    if (second.is(K::Any)) {
      for (const auto& l : second.labels()) detail::add_label(labels, l);
    } else {
      detail::add_label(labels, second);
    }
    return Shape::any(std::move(labels));
  }
  if (detail::kinds_are(a, b, K::Int, K::Float)) return Shape::floating();  // num
  if (detail::kinds_are(a, b, K::Bit, K::Int)) return Shape::integer();     // bit
  if (detail::kinds_are(a, b, K::Bit, K::Bool)) return Shape::boolean();
  if (detail::kinds_are(a, b, K::Bit, K::Float)) return Shape::floating();
  if (a.is(K::Nullable)) return add_nullable(csh(a.inner(), b));  // opt
  if (b.is(K::Nullable)) return add_nullable(csh(a, b.inner()));
  if (a.is(K::Record) && b.is(K::Record) && a.record_name() == b.record_name())  // recd
    return detail::merge_records(a, b);
  std::vector<Shape> labels;  // top-any
  detail::add_label(labels, a);
  detail::add_label(labels, b);
  return Shape::any(std::move(labels));
}

/// Fold of csh seeded with ⊥.
inline Shape csh_all(const std::vector<Shape>& shapes) {
  Shape acc = Shape::bot();
  for (const auto& s : shapes) acc = csh(acc, s);
  return acc;
}

namespace detail {

template <class F>
Shape map_children(const Shape& s, F&& f) {
  switch (s.kind()) {
    case ShapeKind::Nullable: return Shape::nullable(f(s.inner()));
    case ShapeKind::Record: {
      std::vector<ShapeField> fs;
      for (const auto& x : s.fields()) fs.push_back({x.name, f(x.shape)});
      return Shape::record(s.record_name(), std::move(fs));
    }
    case ShapeKind::Any: {
      std::vector<Shape> ls;
      for (const auto& l : s.labels()) ls.push_back(f(l));
      return Shape::any(std::move(ls));
    }
    case ShapeKind::Collection: {
      std::vector<HeteroEntry> es;
      for (const auto& e : s.items()) es.push_back({f(e.shape), e.multiplicity});
      return Shape::collection(std::move(es));
    }
    default: return s;
  }
}

}  // namespace detail

/// Collapses every heterogeneous collection to [join of its entries],
/// keeping labels.
inline Shape homogenize(const Shape& s) {
  if (s.is(ShapeKind::Collection)) {
    if (s.items().empty()) return s;
    Shape join = Shape::bot();
    for (const auto& e : s.items()) join = csh(join, homogenize(e.shape));
    join = homogenize(join);
    return Shape::list_of(join);
  }
  return detail::map_children(s, [](const Shape& c) { return homogenize(c); });
}

/// Label-erased, homogeneous form used to compare against the core model.
inline Shape erase_labels(const Shape& s) {
  if (s.is(ShapeKind::Any)) return Shape::any();
  if (s.is(ShapeKind::Collection)) {
    if (s.items().empty()) return s;
    Shape join = Shape::bot();
    for (const auto& e : s.items()) join = csh(join, erase_labels(e.shape));
    return Shape::list_of(erase_labels(join));
  }
  return detail::map_children(s, [](const Shape& c) { return erase_labels(c); });
}

}  // namespace structprov
