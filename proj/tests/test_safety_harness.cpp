#include <gtest/gtest.h>

#include <nlohmann/json.hpp>

#include "structprov/harness/corpus.hpp"
#include "structprov/harness/lub_oracle.hpp"
#include "structprov/harness/relative_safety.hpp"
#include "structprov/harness/stability.hpp"
#include "structprov/harness/suites.hpp"
#include "support/fixtures.hpp"

using namespace structprov;
using namespace structprov::harness;

namespace {
const std::string B = kBullet;

std::vector<DataValue> people() { return parse_json(testsupport::read_fixture("people.json")).items(); }
DataValue x_rec(DataValue v) { return DataValue::record(B, {{"x", std::move(v)}}); }

std::string eval_text(const Provided& p, const DataValue& d, const std::string& path) {
  PathResult r = eval_path(p, d, parse_access_path(path));
  if (!r.outcome.is_value()) return "<not a value>";
  return foo::value_text(r.outcome.value);
}
}  // namespace

TEST(LubOracle, Examples) {
  const auto u = erased_universe();
  EXPECT_TRUE(shape_equal(*lub_oracle(Shape::integer(), Shape::floating(), u), Shape::floating()));
  EXPECT_TRUE(shape_equal(*lub_oracle(Shape::text(), Shape::boolean(), u), Shape::any()));
  for (std::size_t i = 0; i < u.size(); i += 37) {
    auto l = lub_oracle(Shape::bot(), u[i], u);
    ASSERT_TRUE(l.has_value());
    EXPECT_TRUE(shape_equivalent(*l, u[i])) << to_string(u[i]);
  }
}

TEST(RelativeSafety, Eva) {
  Verdict v = check_relative_safety(people(), parse_json(testsupport::read_fixture("eva.json")));
  EXPECT_TRUE(v.safe);
  EXPECT_GT(v.walk.members_evaluated, 0u);
}

TEST(RelativeSafety, WrongNameTypeViolatesPremise) {
  DataValue bad = DataValue::record(B, {{"name", DataValue::integer(1)}});
  EXPECT_THROW(check_relative_safety(people(), bad), PremiseViolated);
}

TEST(RelativeSafety, UnknownXmlElement) {
  InferenceConfig cfg;
  cfg.hetero_collections = false;
  DataValue sample = parse_xml(testsupport::read_fixture("doc.xml"));
  DataValue input = parse_xml(testsupport::read_fixture("doc_with_table.xml"));
  Verdict v = check_relative_safety({sample}, input, cfg);
  EXPECT_TRUE(v.safe);
  Provided p = provide_normalized(infer_many({sample}, cfg));
  EXPECT_EQ(eval_text(p, input, "Value[1].Heading"), "None");
  EXPECT_EQ(eval_text(p, input, "Value[1].P"), "None");
  EXPECT_EQ(eval_text(p, input, "Value[1].Image"), "None");
  EXPECT_EQ(eval_text(p, input, "Value[0].Heading"), "Some(\"Tables\")");
}

TEST(RelativeSafety, CorpusSelfInputs) {
  for (const auto& entry : builtin_corpus()) {
    for (const auto& d : entry.samples) {
      Verdict v = check_relative_safety(entry.samples, d);
      EXPECT_TRUE(v.safe) << entry.name;
    }
  }
}

TEST(SubshapeInput, Mutations) {
  auto samples = people();
  std::map<MutationKind, int> seen;
  for (std::uint64_t seed = 0; seed < 300; ++seed) {
    Rng rng(mix_seed(5, seed));
    std::vector<SubshapeMutation> applied;
    DataValue d = generate_subshape_input(samples, rng, {}, &applied);
    ASSERT_TRUE(is_preferred(infer_one(d), infer_many(samples))) << canonical_text(d);
    for (const auto& m : applied) ++seen[m.kind];
  }
  EXPECT_GT(seen[MutationKind::DropOptionalField], 0);
  EXPECT_GT(seen[MutationKind::AddExtraField], 0);
  EXPECT_GT(seen[MutationKind::IntWhereFloat], 0);
}

TEST(SubshapeInput, DeterministicPerSeed) {
  auto samples = people();
  EXPECT_EQ(canonical_text(generate_subshape_input(samples, 42)), canonical_text(generate_subshape_input(samples, 42)));
}

TEST(SubshapeInput, NeedsSamples) { EXPECT_THROW(generate_subshape_input({}, 1), std::invalid_argument); }

TEST(Stability, NullableField) {
  StabilityResult r = check_stability({x_rec(DataValue::integer(1))}, DataValue::record(B, {}), {"X"},
                                      {x_rec(DataValue::integer(1))});
  ASSERT_EQ(r.rewrites.size(), 1u);
  EXPECT_EQ(r.rewrites[0].kind, RewriteKind::WrapOptionMatch);
}

TEST(Stability, IntBecomesFloat) {
  StabilityResult r = check_stability({x_rec(DataValue::integer(1))}, x_rec(DataValue::floating(2.5)), {"X"},
                                      {x_rec(DataValue::integer(1))});
  ASSERT_EQ(r.rewrites.size(), 1u);
  EXPECT_EQ(r.rewrites[0].kind, RewriteKind::CoerceIntOfFloat);
}

TEST(Stability, LabelledTop) {
  StabilityResult r = check_stability({x_rec(DataValue::integer(1))}, x_rec(DataValue::string("s")), {"X"},
                                      {x_rec(DataValue::integer(1))});
  ASSERT_FALSE(r.rewrites.empty());
  bool projected = false;
  for (const auto& w : r.rewrites)
    if (w.kind == RewriteKind::ProjectAnyLabel && w.label == "Number") projected = true;
  EXPECT_TRUE(projected);
}

TEST(Stability, UnchangedShapeNeedsNoRewrite) {
  StabilityResult r = check_stability({x_rec(DataValue::integer(1))}, x_rec(DataValue::integer(7)), {"X"},
                                      {x_rec(DataValue::integer(1))});
  EXPECT_TRUE(r.rewrites.empty());
}

TEST(Suites, LubSuitePasses) {
  SuiteReport r = run_lub_suite();
  EXPECT_TRUE(r.passed());
  EXPECT_GT(r.trials, 100000u);
}

TEST(Suites, SmallRuns) {
  HarnessConfig cfg;
  cfg.suites = {"safety", "preservation", "stability"};
  cfg.safety_trials = 60;
  cfg.preservation_programs = 200;
  cfg.stability_trials = 40;
  HarnessReport r = run_harness(cfg);
  for (const auto& s : r.suites) {
    EXPECT_TRUE(s.passed()) << s.name << ": " << (s.failed.empty() ? "" : s.failed[0].detail);
  }
  EXPECT_EQ(r.suites[1].counters.at("programs"), 200u);
}

TEST(Suites, SeedsReplayDeterministically) {
  HarnessConfig cfg;
  for (std::uint64_t seed : {mix_seed(cfg.seed, 0), mix_seed(cfg.seed, 17)}) {
    for (const char* suite : {"safety", "stability"}) {
      TrialOutcome a = replay_trial(suite, seed, cfg);
      TrialOutcome b = replay_trial(suite, seed, cfg);
      EXPECT_EQ(a.ok, b.ok);
      EXPECT_EQ(a.detail, b.detail);
      EXPECT_EQ(a.counters, b.counters);
    }
  }
}

TEST(Suites, RecordedRegressionsStayFixed) {
  auto seeds = nlohmann::json::parse(testsupport::read_fixture("regressions.json"));
  HarnessConfig cfg;
  for (const auto& [suite, list] : seeds.items()) {
    for (const auto& s : list) {
      TrialOutcome o = replay_trial(suite, s.get<std::uint64_t>(), cfg);
      EXPECT_TRUE(o.ok) << suite << " seed " << s.get<std::uint64_t>() << ": " << o.detail;
    }
  }
}

TEST(Suites, ReportJson) {
  HarnessConfig cfg;
  cfg.suites = {"safety"};
  cfg.safety_trials = 5;
  nlohmann::json j = to_json(run_harness(cfg));
  EXPECT_EQ(j["seed"], cfg.seed);
  EXPECT_EQ(j["suites"][0]["suite"], "safety");
  EXPECT_EQ(j["suites"][0]["trials"], 5);
}
