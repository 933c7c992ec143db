#pragma once

// Shape inference from sample values.

#include <map>
#include <string>
#include <vector>

#include "structprov/data_value.hpp"
#include "structprov/error.hpp"
#include "structprov/lexical.hpp"
#include "structprov/preferred.hpp"

namespace structprov {

struct InferenceConfig {
  bool global_xml = false;
  bool hetero_collections = true;
  // Read numbers and booleans out of string values.
  bool parse_strings = true;
  bool bit_inference = true;
  int max_depth = 64;
};

/// Shape of a string value. Strings are read for numbers and booleans so
/// that, e.g., "35.14229" is a float.
inline Shape infer_text_shape(std::string_view s, const InferenceConfig& cfg) {
  if (!cfg.parse_strings) return Shape::text();
  if (auto i = lexical::parse_int(s)) {
    if (cfg.bit_inference && (*i == 0 || *i == 1)) return Shape::bit();
    return Shape::integer();
  }
  if (lexical::parse_float(s)) return Shape::floating();
  if (lexical::parse_bool(s)) return Shape::boolean();
  return Shape::text();
}

namespace detail {

inline Shape infer_raw(const DataValue& d, const InferenceConfig& cfg) {
  return std::visit(
      Overloaded{
          [&](const DataValue::Int& i) {
            return i.bit_candidate && cfg.bit_inference ? Shape::bit() : Shape::integer();
          },
          [](const DataValue::Float&) { return Shape::floating(); },
          [&](const DataValue::String& s) { return infer_text_shape(s.value, cfg); },
          [](const DataValue::Bool&) { return Shape::boolean(); },
          [](const DataValue::Null&) { return Shape::null(); },
          [&](const DataValue::List& l) {
            // Group element shapes by tag; nulls add no entry.
            std::vector<HeteroEntry> entries;
            for (const DataValue& item : *l.items) {
              Shape s = infer_raw(item, cfg);
              if (s.is(ShapeKind::Null)) continue;
              const ShapeTag tag = tag_of(s);
              auto it = std::find_if(entries.begin(), entries.end(),
                                     [&](const HeteroEntry& e) { return tag_of(e.shape) == tag; });
              if (it == entries.end()) {
                entries.push_back({std::move(s), Multiplicity::One});
              } else {
                it->shape = csh(it->shape, s);
                it->multiplicity = Multiplicity::Many;
              }
            }
            return Shape::collection(std::move(entries));
          },
          [&](const DataValue::Record& r) {
            std::vector<ShapeField> fields;
            for (const auto& [name, value] : *r.fields) fields.push_back({name, infer_raw(value, cfg)});
            return Shape::record(r.name, std::move(fields));
          },
      },
      d.value());
}

inline void collect_records(const Shape& s, std::map<std::string, Shape>& joined) {
  switch (s.kind()) {
    case ShapeKind::Record: {
      auto [it, fresh] = joined.emplace(s.record_name(), s);
      if (!fresh) it->second = csh(it->second, s);
      for (const auto& f : s.fields()) collect_records(f.shape, joined);
      return;
    }
    case ShapeKind::Nullable: collect_records(s.inner(), joined); return;
    case ShapeKind::Any:
      for (const auto& l : s.labels()) collect_records(l, joined);
      return;
    case ShapeKind::Collection:
      for (const auto& e : s.items()) collect_records(e.shape, joined);
      return;
    default: return;
  }
}

inline Shape replace_records(const Shape& s, const std::map<std::string, Shape>& joined, int depth, int max_depth) {
  if (depth > max_depth) throw DepthExceeded("global inference nests records deeper than " + std::to_string(max_depth));
  const Shape& base = s.is(ShapeKind::Record) ? joined.at(s.record_name()) : s;
  return map_children(base, [&](const Shape& c) { return replace_records(c, joined, depth + 1, max_depth); });
}

}  // namespace detail

/// S[d] for one sample.
inline Shape infer_one(const DataValue& d, const InferenceConfig& cfg = {}) {
  Shape s = detail::infer_raw(d, cfg);
  return cfg.hetero_collections ? s : homogenize(s);
}

/// Replaces every record shape by the join of all record shapes with the
/// same name, until nothing changes.
inline Shape globalize_records(const Shape& s, const InferenceConfig& cfg = {}) {
  Shape current = s;
  for (int round = 0; round <= cfg.max_depth; ++round) {
    std::map<std::string, Shape> joined;
    detail::collect_records(current, joined);
    Shape next = detail::replace_records(current, joined, 0, cfg.max_depth);
    if (!cfg.hetero_collections) next = homogenize(next);
    if (shape_equal(next, current)) return next;
    current = std::move(next);
  }
  throw DepthExceeded("global inference did not reach a fixed point");
}

/// Fold of csh over the samples, seeded with ⊥.
inline Shape infer_many(const std::vector<DataValue>& samples, const InferenceConfig& cfg = {}) {
  Shape acc = Shape::bot();
  for (const auto& d : samples) {
    acc = csh(acc, infer_one(d, cfg));
    if (!cfg.hetero_collections) acc = homogenize(acc);
  }
  return cfg.global_xml ? globalize_records(acc, cfg) : acc;
}

/// Single-document global inference.
inline Shape infer_global_xml(const DataValue& d, const InferenceConfig& cfg = {}) {
  return globalize_records(infer_one(d, cfg), cfg);
}

}  // namespace structprov
