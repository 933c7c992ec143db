#include <gtest/gtest.h>

#include <random>

#include "structprov/data_value.hpp"
#include "support/canonical_reader.hpp"

using namespace structprov;

namespace {

DataValue rec(std::vector<std::pair<std::string, DataValue>> f) { return DataValue::record(kBullet, std::move(f)); }

DataValue random_value(std::mt19937_64& rng, int depth) {
  std::uniform_int_distribution<int> kind(0, depth > 0 ? 6 : 4);
  switch (kind(rng)) {
    case 0: return DataValue::integer(std::uniform_int_distribution<std::int64_t>(-1000, 1000)(rng));
    case 1: return DataValue::floating(std::uniform_real_distribution<double>(-1e6, 1e6)(rng));
    case 2: {
      static const char* strs[] = {"", "Hello!", "a \"quote\"", "tab\there", "line\nbreak", "•", "null", "ü\x01"};
      return DataValue::string(strs[rng() % 8]);
    }
    case 3: return DataValue::boolean(rng() % 2);
    case 4: return DataValue::null();
    case 5: {
      std::vector<DataValue> xs;
      for (int i = 0, n = static_cast<int>(rng() % 4); i < n; ++i) xs.push_back(random_value(rng, depth - 1));
      return DataValue::list(std::move(xs));
    }
    default: {
      static const char* names[] = {"x", "y", "•", "a b", "true", "item", "ns:tag"};
      std::vector<std::pair<std::string, DataValue>> fs;
      for (int i = 0, n = static_cast<int>(rng() % 4); i < n; ++i) {
        std::string f = names[rng() % 7];
        bool dup = false;
        for (auto& [k, v] : fs) dup = dup || k == f;
        if (!dup) fs.push_back({f, random_value(rng, depth - 1)});
      }
      return DataValue::record(rng() % 3 ? std::string(kBullet) : std::string(names[rng() % 7]), std::move(fs));
    }
  }
}

}  // namespace

TEST(DataEqual, RecordsIgnoreFieldOrder) {
  EXPECT_TRUE(data_equal(rec({{"x", DataValue::integer(1)}, {"y", DataValue::integer(2)}}),
                         rec({{"y", DataValue::integer(2)}, {"x", DataValue::integer(1)}})));
}

TEST(DataEqual, IntNeverEqualsFloat) { EXPECT_FALSE(data_equal(DataValue::integer(5), DataValue::floating(5.0))); }

TEST(DataEqual, ListsAreOrdered) {
  EXPECT_FALSE(data_equal(DataValue::list({DataValue::integer(1), DataValue::integer(2)}),
                          DataValue::list({DataValue::integer(2), DataValue::integer(1)})));
}

TEST(DataEqual, RecordNamesMatter) {
  EXPECT_FALSE(data_equal(DataValue::record("a", {}), DataValue::record("b", {})));
}

TEST(DataEqual, BitFlagIsNotPartOfEquality) {
  EXPECT_TRUE(data_equal(DataValue::integer(1, true), DataValue::integer(1)));
}

TEST(DataValue, DuplicateFieldsRejected) {
  EXPECT_THROW(rec({{"x", DataValue::null()}, {"x", DataValue::null()}}), std::invalid_argument);
}

TEST(DataValue, NonFiniteFloatsRejected) {
  EXPECT_THROW(DataValue::floating(std::numeric_limits<double>::infinity()), UnrepresentableNumber);
  EXPECT_THROW(DataValue::floating(std::nan("")), UnrepresentableNumber);
}

TEST(CanonicalText, Null) { EXPECT_EQ(canonical_text(DataValue::null()), "null"); }

TEST(CanonicalText, EmptyList) { EXPECT_EQ(canonical_text(DataValue::list({})), "[]"); }

TEST(CanonicalText, XmlRootExample) {
  DataValue d = DataValue::record(
      "root", {{kBullet, DataValue::list({DataValue::record("item", {{kBullet, DataValue::string("Hello!")}})})},
               {"id", DataValue::integer(1)}});
  EXPECT_EQ(canonical_text(d), "root { id ↦ 1, • ↦ [item { • ↦ \"Hello!\" }] }");
}

TEST(CanonicalText, FloatsAlwaysReadBackAsFloats) {
  EXPECT_EQ(canonical_text(DataValue::floating(2.0)), "2.0");
  EXPECT_EQ(canonical_text(DataValue::floating(3.5)), "3.5");
}

TEST(CanonicalText, ListSeparator) {
  EXPECT_EQ(canonical_text(DataValue::list({DataValue::integer(1), DataValue::boolean(true)})), "[1; true]");
}

TEST(CanonicalText, OddNamesAreQuoted) {
  EXPECT_EQ(canonical_text(DataValue::record("null", {{"a b", DataValue::integer(1)}})), "\"null\" { \"a b\" ↦ 1 }");
}

TEST(CanonicalText, RoundTripsThroughReader) {
  std::mt19937_64 rng(42);
  for (int i = 0; i < 2000; ++i) {
    DataValue d = random_value(rng, 3);
    std::string text = canonical_text(d);
    DataValue back = testsupport::read_canonical(text);
    ASSERT_TRUE(data_equal(d, back)) << text;
    ASSERT_EQ(canonical_text(back), text);
  }
}

TEST(DataEqual, IsAnEquivalence) {
  std::mt19937_64 rng(7);
  std::vector<DataValue> pool;
  for (int i = 0; i < 120; ++i) pool.push_back(random_value(rng, 2));
  // duplicates through the reader so that equal pairs exist
  for (int i = 0; i < 40; ++i) pool.push_back(testsupport::read_canonical(canonical_text(pool[i])));
  for (const auto& a : pool) {
    ASSERT_TRUE(data_equal(a, a));
    for (const auto& b : pool) {
      ASSERT_EQ(data_equal(a, b), data_equal(b, a));
      if (!data_equal(a, b)) continue;
      for (const auto& c : pool) {
        if (!data_equal(b, c)) continue;
        ASSERT_TRUE(data_equal(a, c));
      }
    }
  }
}
