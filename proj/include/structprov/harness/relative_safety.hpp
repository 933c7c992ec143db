#pragma once

// Relative safety: inputs whose shape is preferred to the sample shape
// never get stuck anywhere in the provided object graph.

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "structprov/access.hpp"
#include "structprov/harness/random_data.hpp"
#include "structprov/inference.hpp"
#include "structprov/preferred.hpp"

namespace structprov::harness {

enum class MutationKind { DropOptionalField, AddExtraField, IntWhereFloat, NullWhereNullable, SwapAnyLabelValue, ShrinkManyCollection };

inline std::string mutation_name(MutationKind k) {
  switch (k) {
    case MutationKind::DropOptionalField: return "DropOptionalField";
    case MutationKind::AddExtraField: return "AddExtraField";
    case MutationKind::IntWhereFloat: return "IntWhereFloat";
    case MutationKind::NullWhereNullable: return "NullWhereNullable";
    case MutationKind::SwapAnyLabelValue: return "SwapAnyLabelValue";
    case MutationKind::ShrinkManyCollection: return "ShrinkManyCollection";
  }
  return "?";
}

struct SubshapeMutation {
  MutationKind kind;
  std::string path;
  std::string detail;
};

inline Shape input_shape(const DataValue& d, const InferenceConfig& cfg) {
  return cfg.global_xml ? infer_global_xml(d, cfg) : infer_one(d, cfg);
}

struct Verdict {
  bool safe = false;
  WalkReport walk;
  Shape samples_shape = Shape::bot();
};

/// Throws PremiseViolated when the input shape is not preferred to the
/// shape inferred from the samples.
inline Verdict check_relative_safety(const std::vector<DataValue>& samples, const DataValue& input,
                                     const InferenceConfig& cfg = {}, std::size_t fuel = foo::kDefaultFuel) {
  Verdict v;
  v.samples_shape = infer_many(samples, cfg);
  Shape in = input_shape(input, cfg);
  if (!is_preferred(in, v.samples_shape)) {
    std::string why = explain_not_preferred(in, v.samples_shape).value_or(to_string(in) + " ⋢ " + to_string(v.samples_shape));
    throw PremiseViolated("input is not a subshape of the samples: " + why);
  }
  Provided p = provide_normalized(v.samples_shape);
  v.walk = walk_all(p, input, fuel);
  v.safe = v.walk.stuck.empty();
  return v;
}

namespace detail {

struct Step {
  bool index;
  std::string field;
  std::size_t pos;
};

struct Site {
  std::vector<Step> path;
  DataValue value;
  std::optional<Shape> shape;  // the part of σ describing this value, when known
};

inline std::string site_path(const std::vector<Step>& path) {
  std::string out;
  for (const auto& s : path) out += s.index ? "[" + std::to_string(s.pos) + "]" : "." + s.field;
  return out.empty() ? "." : out;
}

inline const Shape& strip_nullable(const Shape& s) { return s.is(ShapeKind::Nullable) ? s.inner() : s; }

inline std::optional<Shape> element_shape(const Shape& coll, const DataValue& elem, const InferenceConfig& cfg) {
  Shape es = infer_one(elem, cfg);
  for (const auto& e : coll.items())
    if (is_preferred(es, e.shape)) return e.shape;
  for (const auto& e : coll.items())
    if (e.shape.is(ShapeKind::Any)) return e.shape;
  return std::nullopt;
}

inline void collect_sites(const DataValue& d, std::optional<Shape> s, std::vector<Step>& path, std::vector<Site>& out,
                          const InferenceConfig& cfg) {
  out.push_back({path, d, s});
  std::optional<Shape> base;
  if (s) base = strip_nullable(*s);
  if (d.is_record()) {
    for (const auto& [n, v] : d.fields()) {
      std::optional<Shape> fs;
      if (base && base->is(ShapeKind::Record)) {
        if (const Shape* f = base->field(n)) fs = *f;
      } else if (base && base->is(ShapeKind::Any)) {
        fs = Shape::any();
      }
      path.push_back({false, n, 0});
      collect_sites(v, fs, path, out, cfg);
      path.pop_back();
    }
  } else if (d.is_list()) {
    for (std::size_t i = 0; i < d.items().size(); ++i) {
      std::optional<Shape> es;
      if (base && base->is(ShapeKind::Collection)) es = element_shape(*base, d.items()[i], cfg);
      else if (base && base->is(ShapeKind::Any)) es = Shape::any();
      path.push_back({true, {}, i});
      collect_sites(d.items()[i], es, path, out, cfg);
      path.pop_back();
    }
  }
}

inline DataValue replace_at(const DataValue& d, const std::vector<Step>& path, std::size_t k,
                            const std::function<DataValue(const DataValue&)>& f) {
  if (k == path.size()) return f(d);
  const Step& s = path[k];
  if (s.index) {
    std::vector<DataValue> items = d.items();
    items[s.pos] = replace_at(items[s.pos], path, k + 1, f);
    return DataValue::list(std::move(items));
  }
  auto fields = d.fields();
  for (auto& [n, v] : fields)
    if (n == s.field) v = replace_at(v, path, k + 1, f);
  return DataValue::record(d.record_name(), std::move(fields));
}

}  // namespace detail

/// Picks a sample and applies 0 to 5 subshape-preserving mutations. Each
/// mutation is checked against the premise before it is kept.
inline DataValue generate_subshape_input(const std::vector<DataValue>& samples, Rng& rng, const InferenceConfig& cfg = {},
                                         std::vector<SubshapeMutation>* applied = nullptr) {
  if (samples.empty()) throw std::invalid_argument("generate_subshape_input needs at least one sample");
  const Shape sigma = infer_many(samples, cfg);
  DataValue d = samples[pick(rng, samples.size())];
  const std::size_t wanted = pick(rng, 6);
  std::size_t done = 0;
  DataGen gen(rng, DataStyle::Json);
  for (std::size_t attempt = 0; done < wanted && attempt < wanted * 8; ++attempt) {
    std::vector<detail::Site> sites;
    std::vector<detail::Step> path;
    detail::collect_sites(d, sigma, path, sites, cfg);
    const detail::Site& site = sites[pick(rng, sites.size())];
    const DataValue& v = site.value;
    auto kind = static_cast<MutationKind>(pick(rng, 6));
    std::function<DataValue(const DataValue&)> f;
    std::string detail;
    switch (kind) {
      case MutationKind::DropOptionalField: {
        if (!v.is_record() || v.fields().empty()) continue;
        std::string victim = v.fields()[pick(rng, v.fields().size())].first;
        if (site.shape) {
          const Shape& base = detail::strip_nullable(*site.shape);
          if (base.is(ShapeKind::Record)) {
            const Shape* fs = base.field(victim);
            if (fs && !is_preferred(Shape::null(), *fs)) continue;
          }
        }
        detail = victim;
        f = [victim](const DataValue& r) {
          auto fields = r.fields();
          std::erase_if(fields, [&](auto& p) { return p.first == victim; });
          return DataValue::record(r.record_name(), std::move(fields));
        };
        break;
      }
      case MutationKind::AddExtraField: {
        if (!v.is_record()) continue;
        std::string name = "extra" + std::to_string(pick(rng, 100));
        if (v.field(name)) continue;
        if (site.shape && detail::strip_nullable(*site.shape).is(ShapeKind::Record) &&
            detail::strip_nullable(*site.shape).field(name))
          continue;
        DataValue extra = gen.primitive();
        detail = name + " = " + canonical_text(extra);
        f = [name, extra](const DataValue& r) {
          auto fields = r.fields();
          fields.push_back({name, extra});
          return DataValue::record(r.record_name(), std::move(fields));
        };
        break;
      }
      case MutationKind::IntWhereFloat: {
        if (!v.is_float()) continue;
        auto i = static_cast<std::int64_t>(v.as_float());
        detail = canonical_text(v) + " -> " + std::to_string(i);
        f = [i](const DataValue&) { return DataValue::integer(i); };
        break;
      }
      case MutationKind::NullWhereNullable: {
        if (site.path.empty() || v.is_null() || !site.shape || !is_preferred(Shape::null(), *site.shape)) continue;
        f = [](const DataValue&) { return DataValue::null(); };
        break;
      }
      case MutationKind::SwapAnyLabelValue: {
        if (!site.shape || !site.shape->is(ShapeKind::Any)) continue;
        DataValue repl = chance(rng, 0.7) ? gen.primitive() : gen.value(2);
        detail = canonical_text(repl);
        f = [repl](const DataValue&) { return repl; };
        break;
      }
      case MutationKind::ShrinkManyCollection: {
        if (!v.is_list() || v.items().empty()) continue;
        std::size_t at = pick(rng, v.items().size());
        detail = "drop [" + std::to_string(at) + "]";
        f = [at](const DataValue& l) {
          auto items = l.items();
          items.erase(items.begin() + static_cast<std::ptrdiff_t>(at));
          return DataValue::list(std::move(items));
        };
        break;
      }
    }
    DataValue next = detail::replace_at(d, site.path, 0, f);
    if (!is_preferred(input_shape(next, cfg), sigma)) continue;
    d = std::move(next);
    ++done;
    if (applied) applied->push_back({kind, detail::site_path(site.path), detail});
  }
  if (!is_preferred(input_shape(d, cfg), sigma)) throw PremiseViolated("generated input lost the subshape premise");
  return d;
}

inline DataValue generate_subshape_input(const std::vector<DataValue>& samples, std::uint64_t seed,
                                         const InferenceConfig& cfg = {}) {
  Rng rng(seed);
  return generate_subshape_input(samples, rng, cfg);
}

}  // namespace structprov::harness
