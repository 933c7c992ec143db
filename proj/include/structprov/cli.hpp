#pragma once

// Command implementations behind the structprov executable. Each command
// writes to the given streams and returns the process exit code.

#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "structprov/access.hpp"
#include "structprov/fetch.hpp"
#include "structprov/harness/suites.hpp"
#include "structprov/ingest.hpp"
#include "structprov/inference.hpp"
#include "structprov/provider.hpp"
#include "structprov/shape_io.hpp"

namespace structprov::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitDomain = 1;
inline constexpr int kExitIo = 2;

struct CliConfig {
  std::optional<SourceFormat> format;
  IngestConfig ingest;
  InferenceConfig inference;
  std::size_t fuel = foo::kDefaultFuel;
  std::optional<std::filesystem::path> out;
  FetchConfig fetch;
};

struct Streams {
  std::ostream& out;
  std::ostream& err;
};

/// Settings from a JSON config file; command-line flags applied later win.
///   { "format": "csv", "missing_tokens": [...], "global_xml": true,
///     "hetero": false, "parse_strings": true, "bit_inference": true,
///     "fuel": 1000, "cache_dir": "..." }
inline void apply_config_file(CliConfig& cfg, const std::filesystem::path& path) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(read_file(path));
  } catch (const nlohmann::json::parse_error& e) {
    throw MalformedDocument(path.string() + ": " + e.what(), 0, 0);
  }
  if (j.contains("format")) {
    auto f = parse_format_name(j["format"].get<std::string>());
    if (!f) throw MalformedDocument(path.string() + ": unknown format", 0, 0);
    cfg.format = f;
  }
  if (j.contains("missing_tokens")) cfg.ingest.missing_tokens = j["missing_tokens"].get<std::set<std::string>>();
  if (j.contains("global_xml")) cfg.inference.global_xml = j["global_xml"].get<bool>();
  if (j.contains("hetero")) cfg.inference.hetero_collections = j["hetero"].get<bool>();
  if (j.contains("parse_strings")) cfg.inference.parse_strings = cfg.ingest.parse_json_strings = j["parse_strings"].get<bool>();
  if (j.contains("bit_inference")) cfg.inference.bit_inference = cfg.ingest.bit_inference = j["bit_inference"].get<bool>();
  if (j.contains("fuel")) cfg.fuel = j["fuel"].get<std::size_t>();
  if (j.contains("cache_dir")) cfg.fetch.cache_dir = j["cache_dir"].get<std::string>();
}

struct LoadedDocument {
  std::string source;
  DataValue value;
};

inline SourceFormat format_for(const std::string& source, const CliConfig& cfg) {
  if (cfg.format) return *cfg.format;
  auto f = format_from_extension(is_url(source) ? url_path(source) : source);
  if (!f) throw MalformedDocument("cannot tell the format of '" + source + "'; pass --format", 0, 0);
  return *f;
}

inline LoadedDocument load_document(const std::string& source, const CliConfig& cfg) {
  SourceFormat f = format_for(source, cfg);
  std::string text = load_source(source, cfg.fetch);
  try {
    return {source, parse_document(text, f, cfg.ingest)};
  } catch (const MalformedDocument& e) {
    throw MalformedDocument(source + ": " + e.what(), 0, 0);
  } catch (const EmptyInput& e) {
    throw EmptyInput(source + ": " + e.what());
  }
}

/// A JSON document whose top level is a homogeneous array is read as a
/// list of samples: its elements are the samples.
inline bool is_sample_list(const DataValue& d, const CliConfig& cfg) {
  if (!d.is_list() || d.items().empty()) return false;
  Shape s = infer_one(d, cfg.inference);
  return s.is(ShapeKind::Collection) && s.items().size() == 1;
}

struct SampleSet {
  std::vector<DataValue> samples;
  bool unwrapped = false;  // every document was a sample list
  std::optional<std::string> hint;
};

inline SampleSet load_samples(const std::vector<std::string>& sources, const CliConfig& cfg) {
  if (sources.empty()) throw EmptyInput("no samples given");
  SampleSet set;
  set.hint = hint_from_path(is_url(sources.front()) ? url_path(sources.front()) : sources.front());
  set.unwrapped = true;
  std::vector<DataValue> docs;
  for (const auto& s : sources) {
    LoadedDocument d = load_document(s, cfg);
    if (format_for(s, cfg) != SourceFormat::Json || !is_sample_list(d.value, cfg)) set.unwrapped = false;
    docs.push_back(d.value);
  }
  for (const auto& d : docs) {
    if (set.unwrapped) {
      set.samples.insert(set.samples.end(), d.items().begin(), d.items().end());
    } else {
      set.samples.push_back(d);
    }
  }
  return set;
}

inline Shape infer_samples(const SampleSet& set, const CliConfig& cfg) {
  if (cfg.inference.global_xml && set.samples.size() == 1) return infer_global_xml(set.samples.front(), cfg.inference);
  return infer_many(set.samples, cfg.inference);
}

inline int cmd_infer(const std::vector<std::string>& sources, const CliConfig& cfg, Streams io) {
  SampleSet set = load_samples(sources, cfg);
  Shape s = infer_samples(set, cfg);
  std::filesystem::path out = cfg.out ? *cfg.out : std::filesystem::path(set.hint.value_or("sample") + ".shape");
  write_file(out, write_shape_file(s, set.hint));
  io.out << to_string(s) << "\n";
  return kExitOk;
}

inline int cmd_codegen(const std::filesystem::path& shape_path, const CliConfig& cfg, Streams io) {
  ShapeFile f = read_shape_file_entry(read_file(shape_path));
  std::optional<std::string> hint = f.name ? f.name : hint_from_path(shape_path.string());
  Provided p = provide_normalized(f.shape, hint);
  foo::typecheck_classes(p.classes);
  std::string text = render_signatures(p) + "\n// Foo classes\n";
  std::set<std::string> reachable = reachable_classes(p);
  for (const auto& c : p.classes.all())
    if (reachable.count(c.name)) text += foo::to_string(c) + "\n";
  text += "// converter : Data -> " + foo::to_string(p.root_type) + "\n" + foo::to_string(p.converter) + "\n";
  if (cfg.out) {
    write_file(*cfg.out, text);
  } else {
    io.out << text;
  }
  return kExitOk;
}

inline int cmd_validate(const std::filesystem::path& shape_path, const std::string& input, const CliConfig& cfg,
                        Streams io) {
  Shape sigma = read_shape_file(read_file(shape_path));
  LoadedDocument d = load_document(input, cfg);
  Shape in = cfg.inference.global_xml ? infer_global_xml(d.value, cfg.inference) : infer_one(d.value, cfg.inference);
  if (is_preferred(in, sigma)) {
    io.out << "subshape\n";
    return kExitOk;
  }
  std::string why = explain_not_preferred(in, sigma).value_or(". : " + to_string(in) + " ⋢ " + to_string(sigma));
  io.out << "not a subshape\n" << why << "\n";
  return kExitDomain;
}

inline int cmd_eval(const std::vector<std::string>& sources, const std::optional<std::string>& input,
                    const std::string& path_text_in, const CliConfig& cfg, Streams io) {
  std::vector<PathStep> path = parse_access_path(path_text_in);
  if (path.empty()) throw std::invalid_argument("access path is empty");
  SampleSet set = load_samples(sources, cfg);
  Provided p = provide_normalized(infer_samples(set, cfg), set.hint);
  DataValue d = input ? load_document(*input, cfg).value : load_document(sources.front(), cfg).value;
  foo::ExprPtr start = set.unwrapped && d.is_list() ? foo::conv_elements(foo::data(d), p.converter)
                                                    : foo::apply(p.converter, foo::data(d));
  PathResult r = eval_path_from(p, start, path, cfg.fuel);
  if (r.outcome.is_stuck()) {
    io.out << "stuck after '" << r.at << "': " << foo::describe(r.outcome.stuck) << "\n";
    return kExitDomain;
  }
  if (r.outcome.is_exn()) {
    io.out << "exn after '" << r.at << "'\n";
    return kExitDomain;
  }
  foo::ExprPtr v = r.outcome.value;
  if (foo::as<foo::Expr::NoneLit>(v) && r.at.size() < path_text(path).size()) {
    io.out << "None (at '" << r.at << "')\n";
    return kExitOk;
  }
  while (auto s = foo::as<foo::Expr::SomeOf>(v)) v = s->value;
  io.out << foo::value_text(v) << "\n";
  return kExitOk;
}

struct CheckOptions {
  harness::HarnessConfig harness;
  std::optional<std::uint64_t> replay;
};

inline int cmd_check(const CheckOptions& opts, const CliConfig& cfg, Streams io) {
  if (opts.replay) {
    if (opts.harness.suites.size() != 1) throw std::invalid_argument("--replay needs exactly one --suite");
    harness::TrialOutcome o = harness::replay_trial(opts.harness.suites.front(), *opts.replay, opts.harness);
    io.out << opts.harness.suites.front() << " seed " << *opts.replay << ": " << (o.ok ? "ok" : "FAIL " + o.detail) << "\n";
    return o.ok ? kExitOk : kExitDomain;
  }
  harness::HarnessReport r = harness::run_harness(opts.harness);
  for (const auto& s : r.suites) {
    io.out << (s.passed() ? "PASS " : "FAIL ") << s.name << ": " << s.trials << " trials, " << s.failures << " failures, "
           << s.seconds << " s\n";
    for (const auto& f : s.failed) io.out << "  seed " << f.seed << ": " << f.detail << "\n";
  }
  if (cfg.out) write_file(*cfg.out, harness::to_json(r).dump(2) + "\n");
  return r.passed() ? kExitOk : kExitDomain;
}

/// Runs a command, mapping errors to exit codes: 2 for I/O, parse and
/// usage errors, 1 for domain failures.
template <typename F>
int guarded(Streams io, F&& f) {
  try {
    return f();
  } catch (const UnknownMember& e) {
    io.err << "error: " << e.what() << "\n";
    return kExitDomain;
  } catch (const MalformedDocument& e) {
    io.err << "error: " << e.what() << "\n";
    return kExitIo;
  } catch (const FetchError& e) {
    io.err << "error: " << e.what() << "\n";
    return kExitIo;
  } catch (const EmptyInput& e) {
    io.err << "error: " << e.what() << "\n";
    return kExitIo;
  } catch (const UnrepresentableNumber& e) {
    io.err << "error: " << e.what() << "\n";
    return kExitIo;
  } catch (const Error& e) {
    io.err << "error: " << e.what() << "\n";
    return kExitDomain;
  } catch (const std::out_of_range& e) {
    io.err << "error: " << e.what() << "\n";
    return kExitDomain;
  } catch (const std::invalid_argument& e) {
    io.err << "error: " << e.what() << "\n";
    return kExitIo;
  } catch (const std::filesystem::filesystem_error& e) {
    io.err << "error: " << e.what() << "\n";
    return kExitIo;
  }
}

}  // namespace structprov::cli
