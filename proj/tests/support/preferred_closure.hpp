#pragma once

// Test-only oracles for ⊑, computed as fixed points over a finite universe.
// Shares nothing with is_preferred beyond the Shape constructors.
//
// Rules::WidthOnly is the reflexive-transitive closure of the base rules,
// where a record may only drop fields.
// Rules::MissingFields also lets a record lack a field whose shape admits
// null. Transitivity is then applied only through primitive middles:
// closing it through records would derive {x:int} ⊑ {} ⊑ {x:null}.

#include <map>
#include <string>
#include <vector>

#include "structprov/shape.hpp"

namespace testsupport {

using structprov::Shape;
using structprov::ShapeKind;

/// Depth-2 universe over field names {x, y} and the five primitives.
inline std::vector<Shape> closure_universe() {
  const std::vector<Shape> prims = {Shape::bit(), Shape::integer(), Shape::floating(), Shape::boolean(), Shape::text()};
  std::vector<Shape> u = {Shape::bot(), Shape::null(), Shape::any()};
  for (const auto& p : prims) u.push_back(p);
  for (const auto& p : prims) u.push_back(Shape::nullable(p));
  u.push_back(Shape::collection({}));
  for (const auto& p : prims) u.push_back(Shape::list_of(p));
  u.push_back(Shape::list_of(Shape::any()));
  const std::vector<Shape> fields = {Shape::null(), Shape::integer(), Shape::floating(), Shape::bit(),
                                     Shape::nullable(Shape::integer()), Shape::nullable(Shape::floating()),
                                     Shape::list_of(Shape::integer()), Shape::any()};
  std::vector<Shape> records = {Shape::record("\xE2\x80\xA2", {}), Shape::record("r", {})};
  for (const auto& f : fields) {
    records.push_back(Shape::record("\xE2\x80\xA2", {{"x", f}}));
    records.push_back(Shape::record("\xE2\x80\xA2", {{"y", f}}));
    records.push_back(Shape::record("r", {{"x", f}}));
  }
  for (const auto& f : fields)
    for (const auto& g : fields) records.push_back(Shape::record("\xE2\x80\xA2", {{"x", f}, {"y", g}}));
  for (const auto& r : records) u.push_back(r);
  for (const auto& r : records) u.push_back(Shape::nullable(r));
  u.push_back(Shape::list_of(Shape::record("\xE2\x80\xA2", {})));
  return u;
}

enum class Rules { WidthOnly, MissingFields };

class PreferenceClosure {
 public:
  explicit PreferenceClosure(std::vector<Shape> u, Rules rules = Rules::MissingFields)
      : u_(std::move(u)), n_(u_.size()), r_(n_ * n_, false), rules_(rules) {
    for (std::size_t i = 0; i < n_; ++i) key_[structprov::shape_key(u_[i])] = i;
    bool changed = true;
    while (changed) {
      changed = false;
      for (std::size_t a = 0; a < n_; ++a)
        for (std::size_t b = 0; b < n_; ++b)
          if (!r_[a * n_ + b] && derivable(a, b)) {
            r_[a * n_ + b] = true;
            changed = true;
          }
      // transitivity
      for (std::size_t k = 0; k < n_; ++k) {
        if (rules_ == Rules::MissingFields && !u_[k].is_primitive()) continue;
        for (std::size_t a = 0; a < n_; ++a)
          if (r_[a * n_ + k])
            for (std::size_t b = 0; b < n_; ++b)
              if (r_[k * n_ + b] && !r_[a * n_ + b]) {
                r_[a * n_ + b] = true;
                changed = true;
              }
      }
    }
  }

  std::size_t size() const { return n_; }
  const Shape& shape(std::size_t i) const { return u_[i]; }
  bool le(std::size_t a, std::size_t b) const { return r_[a * n_ + b]; }

 private:
  static bool non_nullable(const Shape& s) {
    switch (s.kind()) {
      case ShapeKind::Bool:
      case ShapeKind::Bit:
      case ShapeKind::Int:
      case ShapeKind::Float:
      case ShapeKind::Text:
      case ShapeKind::Record: return true;
      default: return false;
    }
  }

  // Holds for shapes in the universe only; shapes outside it are never
  // related.
  bool rel(const Shape& a, const Shape& b) const {
    auto ia = key_.find(structprov::shape_key(a));
    auto ib = key_.find(structprov::shape_key(b));
    return ia != key_.end() && ib != key_.end() && r_[ia->second * n_ + ib->second];
  }

  static const Shape& element(const Shape& c) { return c.items().front().shape; }

  bool derivable(std::size_t i, std::size_t j) const {
    const Shape& a = u_[i];
    const Shape& b = u_[j];
    if (i == j) return true;
    if (a.is(ShapeKind::Bot)) return true;                       // ⊥ ⊑ σ
    if (b.is(ShapeKind::Any)) return true;                       // σ ⊑ any
    if (a.is(ShapeKind::Int) && b.is(ShapeKind::Float)) return true;
    if (a.is(ShapeKind::Bit) && (b.is(ShapeKind::Int) || b.is(ShapeKind::Bool))) return true;
    if (a.is(ShapeKind::Null) && (b.is(ShapeKind::Nullable) || b.is(ShapeKind::Collection))) return true;
    if (non_nullable(a) && b.is(ShapeKind::Nullable) && rel(a, b.inner())) return true;
    if (a.is(ShapeKind::Nullable) && b.is(ShapeKind::Nullable) && rel(a.inner(), b.inner())) return true;
    if (a.is(ShapeKind::Collection) && b.is(ShapeKind::Collection)) {
      if (a.items().empty()) return true;  // [⊥]
      if (b.items().empty()) return false;
      return rel(element(a), element(b));
    }
    if (a.is(ShapeKind::Record) && b.is(ShapeKind::Record) && a.record_name() == b.record_name()) {
      for (const auto& f : b.fields()) {
        const Shape* mine = a.field(f.name);
        if (mine ? !rel(*mine, f.shape) : rules_ == Rules::WidthOnly || !rel(Shape::null(), f.shape)) return false;
      }
      return true;
    }
    return false;
  }

  std::vector<Shape> u_;
  std::size_t n_;
  std::vector<bool> r_;
  std::map<std::string, std::size_t> key_;
  Rules rules_;
};

}  // namespace testsupport
