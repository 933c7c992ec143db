#pragma once

// The four property suites, each a loop over independently seeded trials,
// and a machine-readable report.

#include <chrono>
#include <map>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "structprov/harness/corpus.hpp"
#include "structprov/harness/lub_oracle.hpp"
#include "structprov/harness/preservation.hpp"
#include "structprov/harness/relative_safety.hpp"
#include "structprov/harness/stability.hpp"

namespace structprov::harness {

struct TrialOutcome {
  bool ok = true;
  std::string detail;
  std::map<std::string, std::size_t> counters;
};

struct TrialFailure {
  std::uint64_t seed;
  std::string detail;
};

struct SuiteReport {
  std::string name;
  std::size_t trials = 0;
  std::size_t failures = 0;
  std::vector<TrialFailure> failed;  // first few, with replay seeds
  std::map<std::string, std::size_t> counters;
  double seconds = 0;
  bool passed() const { return failures == 0 && trials > 0; }
};

inline const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names = {"lub", "safety", "preservation", "stability"};
  return names;
}

namespace detail {

inline std::vector<DataValue> random_samples(Rng& rng, InferenceConfig& cfg) {
  static const std::vector<CorpusEntry> corpus = builtin_corpus();
  cfg.hetero_collections = chance(rng, 0.7);
  if (chance(rng, 0.25)) return corpus[pick(rng, corpus.size())].samples;
  DataGen g(rng, static_cast<DataStyle>(pick(rng, 3)));
  return g.samples(1 + pick(rng, 4), 3);
}

inline void count(std::map<std::string, std::size_t>& into, const std::map<std::string, std::size_t>& from) {
  for (const auto& [k, v] : from) into[k] += v;
}

}  // namespace detail

/// One relative-safety trial: random samples, a generated subshape input,
/// and a full walk of the provided object graph.
inline TrialOutcome relative_safety_trial(std::uint64_t seed, std::size_t fuel = foo::kDefaultFuel) {
  Rng rng(seed);
  TrialOutcome out;
  InferenceConfig cfg;
  std::vector<DataValue> samples = detail::random_samples(rng, cfg);
  std::vector<SubshapeMutation> muts;
  try {
    DataValue input = generate_subshape_input(samples, rng, cfg, &muts);
    Verdict v = check_relative_safety(samples, input, cfg, fuel);
    out.counters["members_evaluated"] = v.walk.members_evaluated;
    out.counters["exn"] = v.walk.exns;
    for (const auto& m : muts) ++out.counters["mutation." + mutation_name(m.kind)];
    if (!v.safe) {
      out.ok = false;
      out.counters["stuck"] = v.walk.stuck.size();
      const auto& [path, info] = v.walk.stuck.front();
      out.detail = "stuck at " + (path.empty() ? std::string(".") : path) + ": " + foo::describe(info) +
                   "; input " + canonical_text(input);
    }
  } catch (const Error& e) {
    out.ok = false;
    out.detail = e.what();
  }
  return out;
}

/// A batch of random programs over one provided type set.
inline TrialOutcome preservation_trial(std::uint64_t seed, std::size_t programs, std::size_t fuel = 100'000) {
  Rng rng(seed);
  TrialOutcome out;
  InferenceConfig cfg;
  std::vector<DataValue> samples = detail::random_samples(rng, cfg);
  Provided p = provide_normalized(infer_many(samples, cfg));
  ExprGen gen(rng, p);
  for (int k = 0; k < 2; ++k) gen.add_source(generate_subshape_input(samples, rng, cfg));
  for (std::size_t i = 0; i < programs; ++i) {
    FooType t = gen.random_type();
    foo::ExprPtr e = gen.gen(t, {}, 4);
    RunCheck r = run_checked(p.classes, e, t, fuel);
    ++out.counters["programs"];
    out.counters["steps"] += r.steps;
    switch (r.kind) {
      case RunCheck::Kind::Value: ++out.counters["value"]; break;
      case RunCheck::Kind::Exn: ++out.counters["exn"]; break;
      case RunCheck::Kind::NotPreserved: ++out.counters["not_preserved"]; break;
      case RunCheck::Kind::Stuck: ++out.counters["stuck"]; break;
      case RunCheck::Kind::OutOfFuel: ++out.counters["out_of_fuel"]; break;
    }
    if (!r.ok() && out.ok) {
      out.ok = false;
      out.detail = "program #" + std::to_string(i) + " : " + foo::to_string(t) + " = " + foo::to_string(e) + " -> " + r.detail;
    }
  }
  return out;
}

/// Samples of records, one generalizing sample, and every probe of the old
/// provided type. Bit inference is off: no rewrite turns bool into int.
inline TrialOutcome stability_trial(std::uint64_t seed) {
  Rng rng(seed);
  TrialOutcome out;
  InferenceConfig cfg;
  cfg.hetero_collections = false;
  cfg.bit_inference = false;
  DataGen g(rng, DataStyle::Json);
  DataValue root = g.value(3);
  if (!root.is_record()) root = DataValue::record(kBullet, {{"a", root}});
  std::vector<DataValue> samples{root};
  for (std::size_t i = 0, n = pick(rng, 3); i < n; ++i) {
    DataValue v = g.vary(root, 3);
    if (v.is_record()) samples.push_back(v);
  }
  DataValue added = generalize_sample(samples[pick(rng, samples.size())], rng);
  Provided old_p = provide_normalized(infer_many(samples, cfg));
  for (const auto& probe : enumerate_probes(old_p)) {
    ++out.counters["probes"];
    try {
      StabilityResult r = check_stability(samples, added, probe, samples, cfg);
      if (r.rewrites.empty()) ++out.counters["unchanged"];
      for (const auto& w : r.rewrites) {
        static const char* const names[] = {"rewrite.unwrap", "rewrite.project", "rewrite.int"};
        ++out.counters[names[static_cast<int>(w.kind)]];
        if (w.lifted) ++out.counters["rewrite.lifted"];
      }
    } catch (const RewriteNotFound& e) {
      ++out.counters["rewrite_not_found"];
      if (out.ok) {
        out.ok = false;
        out.detail = e.what();
      }
    }
  }
  return out;
}

template <typename Trial>
SuiteReport run_trials(const std::string& name, std::size_t trials, std::uint64_t base_seed, Trial&& trial) {
  auto start = std::chrono::steady_clock::now();
  SuiteReport r;
  r.name = name;
  for (std::size_t i = 0; i < trials; ++i) {
    std::uint64_t seed = mix_seed(base_seed, i);
    TrialOutcome o = trial(seed);
    ++r.trials;
    detail::count(r.counters, o.counters);
    if (!o.ok) {
      ++r.failures;
      if (r.failed.size() < 20) r.failed.push_back({seed, o.detail});
    }
  }
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return r;
}

inline SuiteReport run_lub_suite() {
  auto start = std::chrono::steady_clock::now();
  PreferenceMatrix m(erased_universe());
  LubReport lr = check_lub_exhaustive(m);
  SuiteReport r;
  r.name = "lub";
  r.trials = lr.pairs;
  r.failures = lr.mismatches;
  r.counters["universe"] = lr.universe_size;
  for (const auto& e : lr.examples)
    r.failed.push_back({0, to_string(e.a) + " ⊔ " + to_string(e.b) + " = " + to_string(e.csh_result) + ": " + e.reason});
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return r;
}

struct HarnessConfig {
  std::vector<std::string> suites = suite_names();
  std::uint64_t seed = 20160613;
  std::size_t safety_trials = 1000;
  std::size_t preservation_programs = 10000;
  std::size_t preservation_batch = 20;
  std::size_t stability_trials = 500;
  std::size_t fuel = foo::kDefaultFuel;
};

/// Runs one suite by name. Throws std::invalid_argument for unknown names.
inline SuiteReport run_suite(const std::string& name, const HarnessConfig& cfg) {
  if (name == "lub") return run_lub_suite();
  if (name == "safety")
    return run_trials(name, cfg.safety_trials, cfg.seed, [&](std::uint64_t s) { return relative_safety_trial(s, cfg.fuel); });
  if (name == "preservation") {
    std::size_t batches = (cfg.preservation_programs + cfg.preservation_batch - 1) / cfg.preservation_batch;
    return run_trials(name, batches, cfg.seed,
                      [&](std::uint64_t s) { return preservation_trial(s, cfg.preservation_batch); });
  }
  if (name == "stability") return run_trials(name, cfg.stability_trials, cfg.seed, stability_trial);
  throw std::invalid_argument("unknown suite '" + name + "'");
}

/// Re-runs a single trial of a suite from its reported seed.
inline TrialOutcome replay_trial(const std::string& suite, std::uint64_t seed, const HarnessConfig& cfg) {
  if (suite == "safety") return relative_safety_trial(seed, cfg.fuel);
  if (suite == "preservation") return preservation_trial(seed, cfg.preservation_batch);
  if (suite == "stability") return stability_trial(seed);
  throw std::invalid_argument("suite '" + suite + "' has no seeded trials");
}

struct HarnessReport {
  std::uint64_t seed = 0;
  std::vector<SuiteReport> suites;
  bool passed() const {
    return !suites.empty() && std::all_of(suites.begin(), suites.end(), [](const SuiteReport& s) { return s.passed(); });
  }
};

inline HarnessReport run_harness(const HarnessConfig& cfg) {
  HarnessReport r;
  r.seed = cfg.seed;
  for (const auto& s : cfg.suites) r.suites.push_back(run_suite(s, cfg));
  return r;
}

inline nlohmann::json to_json(const SuiteReport& s) {
  nlohmann::json failed = nlohmann::json::array();
  for (const auto& f : s.failed) failed.push_back({{"seed", f.seed}, {"detail", f.detail}});
  return {{"suite", s.name},       {"passed", s.passed()}, {"trials", s.trials}, {"failures", s.failures},
          {"failed", failed},      {"counters", s.counters}, {"seconds", s.seconds}};
}

inline nlohmann::json to_json(const HarnessReport& r) {
  nlohmann::json suites = nlohmann::json::array();
  for (const auto& s : r.suites) suites.push_back(to_json(s));
  return {{"format", "structprov-harness-report"}, {"version", 1}, {"seed", r.seed}, {"passed", r.passed()}, {"suites", suites}};
}

}  // namespace structprov::harness
