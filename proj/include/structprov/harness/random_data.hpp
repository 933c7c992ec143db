#pragma once

// Seeded generators for sample families: several documents that share a
// rough structure but differ in leaves, optional fields and list contents.

#include <algorithm>
#include <cstdint>
#include <iterator>
#include <random>
#include <string>
#include <vector>

#include "structprov/data_value.hpp"

namespace structprov::harness {

using Rng = std::mt19937_64;

/// splitmix64; derives independent per-trial seeds from a base seed.
inline std::uint64_t mix_seed(std::uint64_t base, std::uint64_t index) {
  std::uint64_t z = base + 0x9E3779B97F4A7C15ULL * (index + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

inline std::size_t pick(Rng& rng, std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng); }
inline bool chance(Rng& rng, double p) { return std::bernoulli_distribution(p)(rng); }

enum class DataStyle { Json, Xml, Csv };

class DataGen {
 public:
  DataGen(Rng& rng, DataStyle style) : rng_(rng), style_(style) {}

  DataValue primitive() {
    switch (pick(rng_, style_ == DataStyle::Csv ? 6 : 5)) {
      case 0: return DataValue::integer(std::uniform_int_distribution<int>(-5, 120)(rng_));
      case 1: return DataValue::floating(std::uniform_int_distribution<int>(-40, 400)(rng_) / 4.0);
      case 2: return DataValue::string(word());
      case 3: return DataValue::boolean(chance(rng_, 0.5));
      case 4: return chance(rng_, 0.5) ? DataValue::null() : DataValue::integer(static_cast<int>(pick(rng_, 50)));
      default: return DataValue::integer(static_cast<std::int64_t>(pick(rng_, 2)), true);
    }
  }

  std::string word() {
    static const char* const words[] = {"Hello!", "Prague", "x", "", "42", "3.5", "true", "no", "0", "1",
                                        "2012-05-01", "NaN-ish", "CZ", "light rain"};
    return words[pick(rng_, std::size(words))];
  }

  std::string field_name() {
    static const char* const names[] = {"a", "b", "name", "value", "id", "temp"};
    return names[pick(rng_, std::size(names))];
  }

  std::string element_name() {
    static const char* const names[] = {"item", "p", "heading", "image"};
    return names[pick(rng_, std::size(names))];
  }

  /// A template document; samples are variations of it.
  DataValue value(int depth) {
    if (style_ == DataStyle::Csv) return csv_table();
    if (style_ == DataStyle::Xml) return element(depth, "root");
    if (depth <= 0) return primitive();
    switch (pick(rng_, 5)) {
      case 0:
      case 1: return record(depth);
      case 2: {
        std::vector<DataValue> items;
        std::size_t n = pick(rng_, 4);
        for (std::size_t i = 0; i < n; ++i) items.push_back(chance(rng_, 0.5) ? record(depth - 1) : value(depth - 1));
        return DataValue::list(std::move(items));
      }
      default: return primitive();
    }
  }

  /// A variation of `t`: leaves re-rolled, fields dropped or added, list
  /// lengths changed, occasionally a different kind altogether.
  DataValue vary(const DataValue& t, int depth) {
    if (depth > 0 && chance(rng_, 0.05)) return style_ == DataStyle::Csv ? primitive() : value(depth - 1);
    if (t.is_record()) {
      std::vector<std::pair<std::string, DataValue>> fields;
      for (const auto& [n, v] : t.fields()) {
        if (style_ != DataStyle::Csv && chance(rng_, 0.15)) continue;
        fields.push_back({n, vary(v, depth - 1)});
      }
      if (style_ == DataStyle::Json && chance(rng_, 0.1)) {
        std::string n = field_name();
        if (std::none_of(fields.begin(), fields.end(), [&](auto& f) { return f.first == n; }))
          fields.push_back({n, primitive()});
      }
      return DataValue::record(t.record_name(), std::move(fields));
    }
    if (t.is_list()) {
      std::vector<DataValue> items;
      for (const auto& v : t.items())
        if (!chance(rng_, 0.2)) items.push_back(vary(v, depth - 1));
      if (!t.items().empty() && chance(rng_, 0.3)) items.push_back(vary(t.items()[pick(rng_, t.items().size())], depth - 1));
      return DataValue::list(std::move(items));
    }
    if (chance(rng_, 0.6)) return same_kind(t);
    return primitive();
  }

  std::vector<DataValue> samples(std::size_t count, int depth) {
    DataValue t = value(depth);
    std::vector<DataValue> out;
    for (std::size_t i = 0; i < count; ++i) out.push_back(i == 0 ? t : vary(t, depth));
    return out;
  }

 private:
  DataValue same_kind(const DataValue& t) {
    if (t.is_int()) {
      if (t.bit_candidate()) return DataValue::integer(static_cast<std::int64_t>(pick(rng_, 2)), true);
      return DataValue::integer(std::uniform_int_distribution<int>(-5, 120)(rng_));
    }
    if (t.is_float()) return DataValue::floating(std::uniform_int_distribution<int>(-40, 400)(rng_) / 4.0);
    if (t.is_string()) return DataValue::string(word());
    if (t.is_bool()) return DataValue::boolean(chance(rng_, 0.5));
    return t;
  }

  DataValue record(int depth) {
    std::vector<std::pair<std::string, DataValue>> fields;
    std::size_t n = pick(rng_, 4);
    for (std::size_t i = 0; i < n; ++i) {
      std::string name = field_name();
      if (std::any_of(fields.begin(), fields.end(), [&](auto& f) { return f.first == name; })) continue;
      fields.push_back({name, value(depth - 1)});
    }
    return DataValue::record(kBullet, std::move(fields));
  }

  DataValue element(int depth, std::string name) {
    std::vector<std::pair<std::string, DataValue>> fields;
    if (chance(rng_, 0.5)) fields.push_back({"id", DataValue::integer(std::uniform_int_distribution<int>(0, 9)(rng_))});
    if (chance(rng_, 0.3)) fields.push_back({"src", DataValue::string(word())});
    if (depth <= 0 || chance(rng_, 0.3)) {
      if (chance(rng_, 0.8)) fields.push_back({kBullet, DataValue::string(word())});
    } else {
      std::vector<DataValue> children;
      std::size_t n = 1 + pick(rng_, 3);
      for (std::size_t i = 0; i < n; ++i) children.push_back(element(depth - 1, element_name()));
      fields.push_back({kBullet, DataValue::list(std::move(children))});
    }
    return DataValue::record(std::move(name), std::move(fields));
  }

  DataValue csv_table() {
    std::vector<std::string> cols;
    std::size_t ncols = 1 + pick(rng_, 4);
    for (std::size_t i = 0; i < ncols; ++i) cols.push_back("c" + std::to_string(i));
    std::vector<DataValue> rows;
    std::size_t nrows = 1 + pick(rng_, 4);
    for (std::size_t r = 0; r < nrows; ++r) {
      std::vector<std::pair<std::string, DataValue>> fields;
      for (const auto& c : cols) fields.push_back({c, primitive()});
      rows.push_back(DataValue::record(kBullet, std::move(fields)));
    }
    return DataValue::list(std::move(rows));
  }

  Rng& rng_;
  DataStyle style_;
};

}  // namespace structprov::harness
