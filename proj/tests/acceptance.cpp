// Acceptance suite: one PASS/FAIL line per criterion.

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <sstream>
#include <string>
#include <unistd.h>

#include <nlohmann/json.hpp>

#include "structprov/cli.hpp"
#include "structprov/harness/lub_oracle.hpp"
#include "structprov/harness/suites.hpp"
#include "support/fixtures.hpp"

using namespace structprov;
using namespace structprov::cli;
namespace fs = std::filesystem;

namespace {

const std::string B = kBullet;
fs::path g_dir;

struct Failure {
  std::string why;
};

void require(bool ok, const std::string& why) {
  if (!ok) throw Failure{why};
}

std::string fx(const std::string& name) { return testsupport::fixture(name).string(); }
bool contains(const std::string& hay, const std::string& needle) { return hay.find(needle) != std::string::npos; }
Shape rec(std::string name, std::vector<ShapeField> fs) { return Shape::record(std::move(name), std::move(fs)); }
Shape opt(Shape s) { return Shape::nullable(std::move(s)); }

struct Output {
  int code;
  std::string out;
  std::string err;
};

template <typename F>
Output capture(F&& f) {
  std::ostringstream out, err;
  Streams io{out, err};
  int code = guarded(io, [&] { return f(io); });
  return {code, out.str(), err.str()};
}

fs::path infer_to(const std::string& fixture, const std::string& stem, CliConfig cfg = {}) {
  cfg.out = g_dir / (stem + ".shape");
  Output o = capture([&](Streams io) { return cmd_infer({fx(fixture)}, cfg, io); });
  require(o.code == 0, "infer " + fixture + " failed: " + o.err);
  return *cfg.out;
}

std::string codegen(const fs::path& shape) {
  Output o = capture([&](Streams io) { return cmd_codegen(shape, CliConfig{}, io); });
  require(o.code == 0, "codegen failed: " + o.err);
  return o.out;
}

std::string eval(const std::string& sample, std::optional<std::string> input, const std::string& path,
                 CliConfig cfg = {}) {
  Output o = capture([&](Streams io) { return cmd_eval({fx(sample)}, input, path, cfg, io); });
  require(o.code == 0, "eval " + path + " exited " + std::to_string(o.code) + ": " + o.out + o.err);
  return o.out;
}

double seconds_since(std::chrono::steady_clock::time_point t) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t).count();
}

// --- criteria --------------------------------------------------------------

std::string people() {
  auto t = std::chrono::steady_clock::now();
  fs::path shape = infer_to("people.json", "people");
  Shape s = read_shape_file(testsupport::read_file(shape));
  require(shape_equal(s, rec(B, {{"name", Shape::text()}, {"age", opt(Shape::floating())}})), "inferred " + to_string(s));
  std::string text = codegen(shape);
  require(contains(text, "member Age : option<float>\n"), "codegen lacks Age : option<float>");
  double secs = seconds_since(t);
  require(secs < 1.0, "took " + std::to_string(secs) + " s");
  return to_string(s);
}

std::string worldbank() {
  auto t = std::chrono::steady_clock::now();
  fs::path shape = infer_to("worldbank.json", "worldbank");
  Shape s = read_shape_file(testsupport::read_file(shape));
  require(s.is(ShapeKind::Collection) && s.items().size() == 2, "not a two-entry collection: " + to_string(s));
  const HeteroEntry* record = nullptr;
  const HeteroEntry* array = nullptr;
  for (const auto& e : s.items()) {
    if (e.shape.is(ShapeKind::Record)) record = &e;
    if (e.shape.is(ShapeKind::Collection)) array = &e;
  }
  require(record && record->multiplicity == Multiplicity::One, "record entry with multiplicity 1 missing");
  require(array && array->multiplicity == Multiplicity::One, "collection entry with multiplicity 1 missing");
  std::string text = codegen(shape);
  for (const char* line : {"member Record : Record", "member Array : list<Item>", "type Item =", "member Date : int",
                           "member Indicator : string", "member Value : option<float>"})
    require(contains(text, line), std::string("codegen lacks '") + line + "'");
  double secs = seconds_since(t);
  require(secs < 1.0, "took " + std::to_string(secs) + " s");
  return "Record, Array : list<Item>";
}

std::string xml_doc() {
  auto t = std::chrono::steady_clock::now();
  CliConfig cfg;
  cfg.inference.hetero_collections = false;
  fs::path shape = infer_to("doc.xml", "doc", cfg);
  std::string text = codegen(shape);
  for (const char* line : {"member Heading : option<string>", "member P : option<string>", "member Image : option<Image>"})
    require(contains(text, line), std::string("codegen lacks '") + line + "'");
  std::string table = fx("doc_with_table.xml");
  for (const char* m : {"Heading", "P", "Image"}) {
    std::string got = eval("doc.xml", table, std::string("Value[1].") + m, cfg);
    require(got == "None\n", std::string(m) + " on <table> gave " + got);
  }
  require(eval("doc.xml", table, "Value[0].Heading", cfg) == "\"Tables\"\n", "heading text lost");
  double secs = seconds_since(t);
  require(secs < 1.0, "took " + std::to_string(secs) + " s");
  return "Heading/P/Image optional; None on <table>";
}

std::string xml_root() {
  DataValue d = parse_xml(testsupport::read_fixture("root.xml"));
  const std::string want = "root { id \xE2\x86\xA6 1, \xE2\x80\xA2 \xE2\x86\xA6 [item { \xE2\x80\xA2 \xE2\x86\xA6 \"Hello!\" }] }";
  require(canonical_text(d) == want, "parsed " + canonical_text(d));
  std::string text = codegen(infer_to("root.xml", "root"));
  require(contains(text, "type Root =\n  member Id : int\n  member Item : string\n"), "codegen gave:\n" + text);
  return canonical_text(d);
}

std::string csv_air() {
  fs::path shape = infer_to("air.csv", "air");
  Shape s = read_shape_file(testsupport::read_file(shape));
  Shape row = rec(B, {{"Ozone", Shape::floating()}, {"Temp", opt(Shape::integer())}, {"Date", Shape::text()},
                      {"Autofilled", Shape::bit()}});
  require(shape_equal(s, Shape::list_of(row)), "inferred " + to_string(s));
  require(contains(codegen(shape), "member Autofilled : bool"), "Autofilled not rendered as bool");
  return to_string(s);
}

std::string weather() {
  const std::string a = eval("weather.json", std::nullopt, "Main.Temp");
  const std::string b = eval("weather.json", std::nullopt, "Wind.Speed");
  const std::string c = eval("weather.json", std::nullopt, "Sys.Country");
  require(a == "5\n", "Main.Temp = " + a);
  require(b == "1.5\n", "Wind.Speed = " + b);
  require(c == "\"CZ\"\n", "Sys.Country = " + c);
  return "5, 1.5, \"CZ\"";
}

std::string lub() {
  harness::PreferenceMatrix m(harness::erased_universe());
  harness::LubReport r = harness::check_lub_exhaustive(m);
  require(r.pairs == m.size() * m.size(), "not every ordered pair was checked");
  require(r.mismatches == 0, std::to_string(r.mismatches) + " mismatches, e.g. " +
                                 (r.examples.empty() ? "" : to_string(r.examples[0].a) + " / " + to_string(r.examples[0].b)));
  require(r.seconds < 60, "took " + std::to_string(r.seconds) + " s");
  return std::to_string(r.universe_size) + " shapes, " + std::to_string(r.pairs) + " pairs, 0 mismatches";
}

std::string suite_line(const harness::SuiteReport& r) {
  std::string why;
  for (const auto& f : r.failed) why += " seed " + std::to_string(f.seed) + ": " + f.detail.substr(0, 200);
  return why;
}

std::size_t counter(const harness::SuiteReport& r, const std::string& k) {
  auto it = r.counters.find(k);
  return it == r.counters.end() ? 0 : it->second;
}

std::string safety() {
  harness::HarnessConfig cfg;
  harness::SuiteReport r = harness::run_suite("safety", cfg);
  require(r.trials == 1000, "ran " + std::to_string(r.trials) + " trials");
  require(r.failures == 0, std::to_string(r.failures) + " failing trials:" + suite_line(r));
  require(r.seconds < 120, "took " + std::to_string(r.seconds) + " s");
  return "1000 trials, 0 stuck";
}

std::string preservation() {
  harness::HarnessConfig cfg;
  harness::SuiteReport r = harness::run_suite("preservation", cfg);
  require(counter(r, "programs") == 10000, "ran " + std::to_string(counter(r, "programs")) + " programs");
  for (const char* k : {"not_preserved", "stuck", "out_of_fuel"})
    require(counter(r, k) == 0, std::string(k) + " = " + std::to_string(counter(r, k)) + suite_line(r));
  require(r.failures == 0, "failing batches:" + suite_line(r));
  return "10000 programs, " + std::to_string(counter(r, "value")) + " values, " + std::to_string(counter(r, "exn")) +
         " exn, 0 violations";
}

std::string stability() {
  harness::HarnessConfig cfg;
  harness::SuiteReport r = harness::run_suite("stability", cfg);
  require(r.trials == 500, "ran " + std::to_string(r.trials) + " trials");
  require(r.failures == 0, std::to_string(r.failures) + " RewriteNotFound:" + suite_line(r));
  return "500 trials, 0 RewriteNotFound";
}

std::string negatives() {
  auto expected = nlohmann::json::parse(testsupport::read_fixture("negative/expected.json"));
  require(expected.size() == 10, "expected 10 negative inputs");
  std::map<std::string, fs::path> shapes = {{"people", infer_to("people.json", "people")},
                                            {"weather", infer_to("weather.json", "weather")}};
  for (const auto& [file, e] : expected.items()) {
    Output o = capture([&](Streams io) {
      return cmd_validate(shapes.at(e["shape"].get<std::string>()), fx("negative/" + file), CliConfig{}, io);
    });
    require(o.code == 1, file + " exited " + std::to_string(o.code));
    const std::string path = e["path"].get<std::string>();
    require(contains(o.out, "not a subshape\n" + path + ":"), file + " diagnostic lacks " + path + ": " + o.out);
  }
  return "10/10 rejected with paths";
}

}  // namespace

int main() {
  g_dir = fs::temp_directory_path() / ("structprov_acceptance_" + std::to_string(::getpid()));
  fs::create_directories(g_dir);

  const std::vector<std::pair<std::string, std::function<std::string()>>> criteria = {
      {"people example", people},
      {"world bank example", worldbank},
      {"xml document example", xml_doc},
      {"xml root example", xml_root},
      {"csv example", csv_air},
      {"weather eval", weather},
      {"lub exhaustive", lub},
      {"relative safety fuzz", safety},
      {"preservation fuzz", preservation},
      {"stability", stability},
      {"negative control", negatives},
  };

  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    auto t = std::chrono::steady_clock::now();
    std::string status, detail;
    try {
      detail = criteria[i].second();
      status = "PASS";
    } catch (const Failure& f) {
      status = "FAIL";
      detail = f.why;
    } catch (const std::exception& e) {
      status = "FAIL";
      detail = std::string("exception: ") + e.what();
    }
    if (status == "FAIL") ++failed;
    std::printf("%s criterion %zu (%s) [%.2f s]: %s\n", status.c_str(), i + 1, criteria[i].first.c_str(),
                seconds_since(t), detail.c_str());
    std::fflush(stdout);
  }
  fs::remove_all(g_dir);
  std::printf("%zu/%zu criteria passed\n", criteria.size() - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
