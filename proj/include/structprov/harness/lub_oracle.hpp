#pragma once

// Brute-force least upper bounds over a finite, label-erased universe of
// shapes, used to check csh exhaustively.

#include <chrono>
#include <cstdint>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "structprov/preferred.hpp"

namespace structprov::harness {

/// The label-erased universe:
///   ⊥, null, any, primitives, nullable primitives, r {}, nullable<r {}>,
///   • { x?: F, y?: F } and their nullables,
///   [⊥] and [e] for e in primitives, any, • {}, r {}
/// where F = null, any, primitives, nullable primitives, [⊥], [p], [any].
/// Closed under erase_labels ∘ csh.
inline std::vector<Shape> erased_universe() {
  const std::vector<Shape> prims = {Shape::bit(), Shape::integer(), Shape::floating(), Shape::boolean(), Shape::text()};
  std::vector<Shape> field_shapes = {Shape::null(), Shape::any()};
  for (const auto& p : prims) field_shapes.push_back(p);
  for (const auto& p : prims) field_shapes.push_back(Shape::nullable(p));
  field_shapes.push_back(Shape::collection({}));
  for (const auto& p : prims) field_shapes.push_back(Shape::list_of(p));
  field_shapes.push_back(Shape::list_of(Shape::any()));

  std::vector<Shape> u = {Shape::bot(), Shape::null(), Shape::any()};
  for (const auto& p : prims) u.push_back(p);
  for (const auto& p : prims) u.push_back(Shape::nullable(p));
  const Shape other = Shape::record("r", {});
  u.push_back(other);
  u.push_back(Shape::nullable(other));

  std::vector<Shape> records = {Shape::record(kBullet, {})};
  for (const auto& f : field_shapes) records.push_back(Shape::record(kBullet, {{"x", f}}));
  for (const auto& f : field_shapes) records.push_back(Shape::record(kBullet, {{"y", f}}));
  for (const auto& f : field_shapes)
    for (const auto& g : field_shapes) records.push_back(Shape::record(kBullet, {{"x", f}, {"y", g}}));
  for (const auto& r : records) u.push_back(r);
  for (const auto& r : records) u.push_back(Shape::nullable(r));

  u.push_back(Shape::collection({}));
  for (const auto& p : prims) u.push_back(Shape::list_of(p));
  u.push_back(Shape::list_of(Shape::any()));
  u.push_back(Shape::list_of(Shape::record(kBullet, {})));
  u.push_back(Shape::list_of(other));
  return u;
}

/// Precomputed ⊑ over a universe, stored as one bitset row per shape:
/// up(a) = { c | a ⊑ c }.
class PreferenceMatrix {
 public:
  explicit PreferenceMatrix(std::vector<Shape> universe) : u_(std::move(universe)) {
    n_ = u_.size();
    words_ = (n_ + 63) / 64;
    up_.assign(n_ * words_, 0);
    for (std::size_t a = 0; a < n_; ++a) {
      index_.emplace(shape_key(u_[a]), a);
      for (std::size_t c = 0; c < n_; ++c)
        if (is_preferred(u_[a], u_[c])) up_[a * words_ + c / 64] |= std::uint64_t{1} << (c % 64);
    }
  }

  std::size_t size() const { return n_; }
  const Shape& shape(std::size_t i) const { return u_[i]; }
  const std::vector<Shape>& universe() const { return u_; }
  bool le(std::size_t a, std::size_t c) const { return (up_[a * words_ + c / 64] >> (c % 64)) & 1; }
  std::optional<std::size_t> index_of(const Shape& s) const {
    auto it = index_.find(shape_key(s));
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }

  /// All least upper bounds of a and b (mutually equivalent); empty when
  /// there is no least one.
  std::vector<std::size_t> least_upper_bounds(std::size_t a, std::size_t b) const {
    std::vector<std::uint64_t> ub(words_);
    for (std::size_t w = 0; w < words_; ++w) ub[w] = up_[a * words_ + w] & up_[b * words_ + w];
    std::vector<std::size_t> least;
    for (std::size_t w = 0; w < words_; ++w) {
      for (std::uint64_t bits = ub[w]; bits; bits &= bits - 1) {
        std::size_t m = w * 64 + static_cast<std::size_t>(__builtin_ctzll(bits));
        bool below_all = true;
        for (std::size_t v = 0; v < words_ && below_all; ++v) below_all = (ub[v] & ~up_[m * words_ + v]) == 0;
        if (below_all) least.push_back(m);
      }
    }
    return least;
  }

 private:
  std::vector<Shape> u_;
  std::size_t n_ = 0, words_ = 0;
  std::vector<std::uint64_t> up_;
  std::unordered_map<std::string, std::size_t> index_;
};

/// Least upper bound of a and b by scanning `universe`; nullopt when none
/// exists. Among equivalent least bounds the first in universe order is
/// returned.
inline std::optional<Shape> lub_oracle(const Shape& a, const Shape& b, const std::vector<Shape>& universe) {
  std::vector<const Shape*> ub;
  for (const auto& c : universe)
    if (is_preferred(a, c) && is_preferred(b, c)) ub.push_back(&c);
  for (const Shape* m : ub) {
    bool least = true;
    for (const Shape* c : ub) {
      if (!is_preferred(*m, *c)) {
        least = false;
        break;
      }
    }
    if (least) return *m;
  }
  return std::nullopt;
}

struct LubMismatch {
  Shape a, b, csh_result;
  std::optional<Shape> oracle;
  std::string reason;
};

struct LubReport {
  std::size_t universe_size = 0;
  std::size_t pairs = 0;
  std::size_t mismatches = 0;
  std::vector<LubMismatch> examples;  // first few
  double seconds = 0;
  bool passed() const { return mismatches == 0 && pairs > 0; }
};

/// For every ordered pair (a, b): the label-erased csh(a, b) must be one of
/// the least upper bounds found by brute force.
inline LubReport check_lub_exhaustive(const PreferenceMatrix& m, std::size_t keep_examples = 10) {
  auto start = std::chrono::steady_clock::now();
  LubReport r;
  r.universe_size = m.size();
  for (std::size_t i = 0; i < m.size(); ++i) {
    for (std::size_t j = 0; j < m.size(); ++j) {
      ++r.pairs;
      Shape c = erase_labels(csh(m.shape(i), m.shape(j)));
      std::vector<std::size_t> least = m.least_upper_bounds(i, j);
      std::optional<std::size_t> ci = m.index_of(c);
      std::string reason;
      if (least.empty()) {
        reason = "no least upper bound in the universe";
      } else if (!ci) {
        reason = "csh result is outside the universe";
      } else if (std::find(least.begin(), least.end(), *ci) == least.end()) {
        reason = "csh result is not a least upper bound";
      }
      if (!reason.empty()) {
        ++r.mismatches;
        if (r.examples.size() < keep_examples)
          r.examples.push_back({m.shape(i), m.shape(j), c,
                                least.empty() ? std::nullopt : std::optional<Shape>(m.shape(least[0])), reason});
      }
    }
  }
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return r;
}

}  // namespace structprov::harness
