#include <CLI11.hpp>

#include "structprov/cli.hpp"

namespace cli = structprov::cli;

int main(int argc, char** argv) {
  CLI::App app{"structprov: infer shapes from sample documents and provide typed access to them"};
  app.require_subcommand(1);

  cli::CliConfig cfg;
  std::string format, config_path, out, cache_dir;
  std::vector<std::string> missing_tokens;
  bool global_xml = false, no_hetero = false;
  std::size_t fuel = cfg.fuel;

  auto common = [&](CLI::App* sub) {
    sub->add_option("--format", format, "json, xml or csv; default from the file extension");
    sub->add_flag("--global-xml", global_xml, "merge XML elements with the same name document-wide");
    sub->add_flag("--no-hetero", no_hetero, "infer homogeneous collections only");
    sub->add_option("--missing-token", missing_tokens, "CSV cell text read as a missing value (repeatable)");
    sub->add_option("--fuel", fuel, "evaluation step budget");
    sub->add_option("--out", out, "output file");
    sub->add_option("--cache-dir", cache_dir, "where fetched URLs are cached");
    sub->add_option("--config", config_path, "JSON file with default settings");
  };

  std::vector<std::string> samples;
  auto* infer = app.add_subcommand("infer", "infer a shape from samples and write a .shape file");
  infer->add_option("samples", samples, "sample files or URLs")->required();
  common(infer);

  std::string shape_file;
  auto* codegen = app.add_subcommand("codegen", "print provided type signatures and Foo classes");
  codegen->add_option("shape", shape_file, ".shape file")->required()->check(CLI::ExistingFile);
  common(codegen);

  std::string input;
  auto* validate = app.add_subcommand("validate", "check that an input is a subshape of a shape");
  validate->add_option("shape", shape_file, ".shape file")->required();
  validate->add_option("input", input, "input document")->required();
  common(validate);

  std::string path;
  auto* eval = app.add_subcommand("eval", "evaluate a member access path over a converted input");
  eval->add_option("samples", samples, "sample files or URLs")->required();
  eval->add_option("--input", input, "document to convert; default is the first sample");
  eval->add_option("--path", path, "access path such as Main.Temp or [1].Age")->required();
  common(eval);

  cli::CheckOptions check_opts;
  std::vector<std::string> suites;
  std::size_t trials = 0;
  std::uint64_t seed = check_opts.harness.seed;
  std::uint64_t replay = 0;
  auto* check = app.add_subcommand("check", "run the property suites");
  check->add_option("--suite", suites, "lub, safety, preservation or stability (repeatable)");
  check->add_option("--trials", trials, "trials for each seeded suite");
  check->add_option("--seed", seed, "base seed");
  auto* replay_opt = check->add_option("--replay", replay, "re-run the single trial with this seed");
  common(check);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : cli::kExitIo;
  }

  cli::Streams io{std::cout, std::cerr};
  return cli::guarded(io, [&]() -> int {
    if (!config_path.empty()) cli::apply_config_file(cfg, config_path);
    if (!format.empty()) {
      auto f = structprov::parse_format_name(format);
      if (!f) throw std::invalid_argument("unknown format '" + format + "'");
      cfg.format = f;
    }
    if (!missing_tokens.empty()) cfg.ingest.missing_tokens = {missing_tokens.begin(), missing_tokens.end()};
    if (global_xml) cfg.inference.global_xml = true;
    if (no_hetero) cfg.inference.hetero_collections = false;
    cfg.fuel = fuel;
    if (!out.empty()) cfg.out = out;
    if (!cache_dir.empty()) cfg.fetch.cache_dir = cache_dir;

    if (*infer) return cli::cmd_infer(samples, cfg, io);
    if (*codegen) return cli::cmd_codegen(shape_file, cfg, io);
    if (*validate) return cli::cmd_validate(shape_file, input, cfg, io);
    if (*eval) return cli::cmd_eval(samples, input.empty() ? std::nullopt : std::optional<std::string>(input), path, cfg, io);
    if (!suites.empty()) check_opts.harness.suites = suites;
    if (trials > 0) {
      check_opts.harness.safety_trials = trials;
      check_opts.harness.stability_trials = trials;
      check_opts.harness.preservation_programs = trials;
    }
    check_opts.harness.seed = seed;
    check_opts.harness.fuel = cfg.fuel;
    if (replay_opt->count() > 0) check_opts.replay = replay;
    return cli::cmd_check(check_opts, cfg, io);
  });
}
