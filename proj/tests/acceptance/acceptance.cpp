// One PASS/FAIL line per acceptance criterion. Exit status is the number of
// failures.

#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>

#include "aiti_support.hpp"
#include "cti4ai/aiti/codec.hpp"
#include "cti4ai/aiti/validate.hpp"
#include "cti4ai/redteam/dataset.hpp"
#include "cti4ai/redteam/fgm.hpp"
#include "cti4ai/taxii/client.hpp"
#include "cti4ai/tie/encoder.hpp"
#include "process.hpp"
#include "properties.hpp"
#include "support.hpp"

using namespace cti4ai;
using nlohmann::json;

namespace {

const std::string kCli = CTI4AI_CLI_PATH;

// Pinned tolerances.
constexpr double kRequiredDrop = 0.30;
constexpr double kMinCleanAccuracy = 0.95;
constexpr int kGradientModels = 100;
constexpr int kFlipModels = 50;
constexpr int kFlipGrid = 100;
constexpr int kBudgetCalls = 10000;

struct Outcome {
  bool ok = true;
  std::string detail;
};

class Check {
 public:
  void expect(bool condition, const std::string& what) {
    if (!condition) {
      outcome_.ok = false;
      if (!outcome_.detail.empty()) outcome_.detail += "; ";
      outcome_.detail += what;
    }
  }
  void note(const std::string& text) {
    if (outcome_.ok) outcome_.detail = text;
  }
  Outcome result() const { return outcome_; }

 private:
  Outcome outcome_;
};

int failures = 0;

void criterion(int n, const char* title, double limit_seconds, const std::function<Outcome()>& body) {
  const auto start = std::chrono::steady_clock::now();
  Outcome out;
  try {
    out = body();
  } catch (const std::exception& e) {
    out = {false, std::string("exception: ") + e.what()};
  }
  const double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (seconds >= limit_seconds) {
    out.ok = false;
    std::ostringstream msg;
    msg << "runtime over " << limit_seconds << " s";
    out.detail = out.detail.empty() ? msg.str() : out.detail + "; " + msg.str();
  }
  if (!out.ok) ++failures;
  std::printf("criterion %d: %s  %-46s %6.3f s  %s\n", n, out.ok ? "PASS" : "FAIL", title, seconds,
              out.detail.c_str());
  std::fflush(stdout);
}

Outcome listing_golden() {
  Check c;
  const auto text = testkit::fixture_text("listing1.json");
  const auto obj = aiti::parse_object(text, aiti::Mode::paper_compat);
  const auto out = aiti::to_json(obj, aiti::Mode::paper_compat);
  const auto original = json::parse(text);
  c.expect(json(out) == original, "re-serialized object differs");
  c.expect(out.size() == original.size(), "key count differs");
  c.expect(out["type"] == "AI Attack-Evasion", "type spelling");
  c.note(std::to_string(out.size()) + " keys equal");
  return c.result();
}

Outcome encoder_reconstruction() {
  Check c;
  const auto report = redteam::report_from_json(
      json::parse(testkit::fixture_text("listing1_report.json")));
  tie::EncoderOptions o;
  o.id_strategy = tie::VerbatimId{"exampleFGM_Resnet-50_CIFAR10"};
  o.clock = fixed_clock(Timestamp::parse("2022-08-11T23:39:03Z"));
  o.model_task = "object recognition";
  o.sophistication = "easy";
  o.resource_level = "individual";
  o.primary_motivation = "personal-gain";
  const auto bundle = tie::encode(report, o);
  c.expect(bundle.objects.size() == 1, "expected a single object");
  // nlohmann::json orders keys lexicographically, giving a canonical byte form.
  const auto produced = json(aiti::to_json(bundle.objects.at(0), aiti::Mode::paper_compat)).dump();
  const auto expected = json::parse(testkit::fixture_text("listing1.json")).dump();
  c.expect(produced == expected, "bytes differ");
  c.note(std::to_string(produced.size()) + " bytes identical");
  return c.result();
}

Outcome gradient_oracle() {
  Check c;
  const auto v = testkit::check_gradients(2024, kGradientModels);
  c.expect(v.empty(), std::to_string(v.size()) + " mismatches" + (v.empty() ? "" : ", first: " + v[0]));
  c.note(std::to_string(kGradientModels) + " models, rel 1e-5 / abs 1e-8");
  return c.result();
}

Outcome flip_threshold() {
  Check c;
  const auto s = testkit::check_flip_threshold(2024, kFlipModels, kFlipGrid);
  c.expect(s.violations.empty(), std::to_string(s.violations.size()) + " violations" +
                                     (s.violations.empty() ? "" : ", first: " + s.violations[0]));
  c.expect(s.flips > 0 && s.holds > 0, "grid never crossed the threshold");
  c.note(std::to_string(s.flips) + " flips, " + std::to_string(s.holds) + " holds, " +
         std::to_string(s.skipped) + " boundary points skipped");
  return c.result();
}

Outcome accuracy_drop() {
  Check c;
  const auto oracle = json::parse(testkit::fixture_text("accuracy_drop.json"));
  const auto data = redteam::generate_blobs({.seed = 7, .separation = 4.0});
  const auto model = redteam::train(
      redteam::DifferentiableClassifier::with_architecture("softmax", 2, {},
                                                           redteam::Activation::identity, 2),
      data, {.learning_rate = 0.5, .epochs = 200, .seed = 7});
  const double clean = redteam::accuracy(model, data);
  c.expect(clean >= kMinCleanAccuracy, "clean accuracy " + std::to_string(clean));
  redteam::FgmConfig config;
  config.epsilon = oracle["epsilon"].get<double>();
  config.clip_range = redteam::ClipRange{0.0, 1.0};
  const auto report = redteam::evaluate_attack(model, data, config);
  const double drop = report.clean_accuracy - report.adversarial_accuracy;
  c.expect(drop >= kRequiredDrop - 1e-12, "drop " + std::to_string(drop));
  std::ostringstream note;
  note << "clean " << report.clean_accuracy << " -> " << report.adversarial_accuracy
       << " at eps " << config.epsilon;
  c.note(note.str());
  return c.result();
}

Outcome perturbation_budget() {
  Check c;
  const auto v = testkit::check_budget(2024, kBudgetCalls);
  c.expect(v.empty(), std::to_string(v.size()) + " violations" + (v.empty() ? "" : ", first: " + v[0]));
  c.note(std::to_string(kBudgetCalls) + " calls within budget");
  return c.result();
}

std::vector<std::string> ids_of(const json& objects) {
  std::vector<std::string> ids;
  for (const auto& o : objects) ids.push_back(o.at("id").get<std::string>());
  return ids;
}

std::filesystem::path copy_server_config(const std::filesystem::path& dir) {
  const auto config = dir / "server.json";
  std::filesystem::copy_file(testkit::fixture("server-example.json"), config,
                             std::filesystem::copy_options::overwrite_existing);
  return config;
}

Outcome server_end_to_end() {
  Check c;
  testkit::TempDir dir;
  const auto config = copy_server_config(dir.path());
  const std::string collection = "ai-vulns";

  std::vector<aiti::AitiObject> objects = {
      testkit::attack_object("one", "2024-01-01T00:00:00Z"),
      testkit::attack_object("two", "2024-01-01T00:00:00Z", "poisoning"),
      testkit::attack_object("three", "2024-01-01T00:00:00Z", "model-replication")};
  json envelope{{"objects", json::array()}};
  for (const auto& o : objects) envelope["objects"].push_back(json(aiti::to_json(o, aiti::Mode::canonical)));
  const auto pushed_ids = ids_of(envelope["objects"]);

  struct PullResult {
    std::vector<std::vector<std::string>> pages;
    std::vector<std::string> after_second;
    std::string second_date_added;
  };
  auto pull = [&](const std::string& url) {
    taxii::Client consumer(url, "consumer-secret");
    PullResult r;
    taxii::ObjectQuery q;
    q.limit = 2;
    for (int guard = 0; guard < 10; ++guard) {
      const auto page = consumer.get_objects_page("aiti", collection, q);
      r.pages.push_back(ids_of(page.objects()));
      if (r.pages.size() == 1 && page.last_added) r.second_date_added = *page.last_added;
      if (!page.more()) break;
      q.next = page.next();
    }
    taxii::ObjectQuery after;
    after.added_after = Timestamp::parse(r.second_date_added);
    r.after_second = ids_of(consumer.get_objects_page("aiti", collection, after).objects());
    return r;
  };

  PullResult first;
  {
    testkit::ServeProcess server(kCli, config, dir.path());
    taxii::Client producer(server.url(), "producer-secret");
    const auto status = producer.add_objects("aiti", collection, envelope);
    c.expect(status["success_count"] == 3, "push accepted " + status["success_count"].dump());
    first = pull(server.url());
    c.expect(server.stop().exit_code == 0, "server exit status");
  }
  c.expect(first.pages.size() == 2, std::to_string(first.pages.size()) + " pages");
  std::vector<std::string> joined;
  for (const auto& p : first.pages) joined.insert(joined.end(), p.begin(), p.end());
  c.expect(joined == pushed_ids, "pages do not concatenate to the pushed set");
  c.expect(first.after_second == std::vector<std::string>{pushed_ids[2]},
           "added_after returned " + std::to_string(first.after_second.size()) + " object(s)");

  testkit::ServeProcess restarted(kCli, config, dir.path());
  const auto second = pull(restarted.url());
  c.expect(second.pages == first.pages, "pages differ after restart");
  c.expect(second.after_second == first.after_second, "added_after differs after restart");
  c.expect(second.second_date_added == first.second_date_added, "date_added changed after restart");
  c.note("2 pages, added_after -> 1, identical after restart");
  return c.result();
}

Outcome validation_suite() {
  Check c;
  const auto bundle = testkit::dangling_ref_bundle();
  const auto strict = aiti::validate(bundle, aiti::ValidationLevel::strict);
  c.expect(aiti::count(strict, aiti::Severity::error) == 1 && strict.size() == 1 &&
               strict[0].code == "dangling-ref",
           "strict diagnostics: " + std::to_string(strict.size()));
  const auto lenient = aiti::validate(bundle, aiti::ValidationLevel::lenient);
  c.expect(!aiti::has_errors(lenient) && lenient.size() == 1 &&
               lenient[0].severity == aiti::Severity::warning && lenient[0].code == "dangling-ref",
           "lenient diagnostics: " + std::to_string(lenient.size()));

  auto teleport = testkit::attack_object("t", "2024-01-01T00:00:00Z", "teleportation");
  const aiti::Bundle single{aiti::Identifier("bundle--" + aiti::name_based_uuid("t")), {teleport}};
  for (auto level : {aiti::ValidationLevel::strict, aiti::ValidationLevel::lenient}) {
    c.expect(aiti::has_errors(aiti::validate(single, level)),
             std::string("teleportation accepted at ") + std::string(aiti::to_string(level)));
  }
  c.note("dangling-ref strict error / lenient warning; teleportation rejected");
  return c.result();
}

Outcome pipeline_smoke() {
  Check c;
  testkit::TempDir dir;
  auto p = [&](const std::string& name) { return (dir / name).string(); };
  auto step = [&](const std::string& name, const std::vector<std::string>& args,
                  const std::map<std::string, std::string>& env = {}) {
    const auto r = testkit::run(kCli, args, dir.path(), env);
    c.expect(r.exit_code == 0, name + " exited " + std::to_string(r.exit_code) + ": " + r.err);
    return r;
  };
  step("dataset gen", {"--seed", "7", "dataset", "gen", "-o", p("blobs.csv")});
  step("train", {"--seed", "7", "train", "-d", p("blobs.csv"), "-o", p("model.json")});
  step("attack", {"--seed", "7", "attack", "-m", p("model.json"), "-d", p("blobs.csv"), "-e",
                  "0.14", "-o", p("report.json")});
  step("encode", {"--seed", "7", "encode", "-r", p("report.json"), "--pattern", "--sighting",
                  "-o", p("bundle.json")});
  step("validate", {"validate", "-b", p("bundle.json"), "--level", "strict"});

  testkit::ServeProcess server(kCli, copy_server_config(dir.path()), dir.path());
  const std::map<std::string, std::string> env = {{"CTI4AI_SERVER", server.url()}};
  step("push", {"push", "--token", "producer-secret", "--collection", "ai-vulns", "-b",
                p("bundle.json")},
       env);
  step("pull", {"pull", "--token", "consumer-secret", "--collection", "ai-vulns", "--limit", "2",
                "-o", p("pulled.json")},
       env);
  step("validate pulled", {"validate", "-b", p("pulled.json"), "--level", "strict"});

  const auto pushed = aiti::parse_bundle(std::string_view(testkit::slurp(p("bundle.json"))));
  const auto pulled = aiti::parse_bundle(std::string_view(testkit::slurp(p("pulled.json"))));
  c.expect(pulled.objects == pushed.objects, "pulled objects differ from pushed");
  c.expect(!aiti::has_errors(aiti::validate(pulled, aiti::ValidationLevel::strict)),
           "pulled bundle has strict errors");
  c.note(std::to_string(pulled.objects.size()) + " objects round-tripped, strict-valid");
  return c.result();
}

}  // namespace

int main() {
  criterion(1, "Listing 1 golden round trip", 1.0, listing_golden);
  criterion(2, "encoder reconstructs Listing 1", 1.0, encoder_reconstruction);
  criterion(3, "input gradients vs finite differences", 5.0, gradient_oracle);
  criterion(4, "linear flip threshold", 5.0, flip_threshold);
  criterion(5, "accuracy drop on blobs", 10.0, accuracy_drop);
  criterion(6, "perturbation budget", 5.0, perturbation_budget);
  criterion(7, "server end to end with restart", 10.0, server_end_to_end);
  criterion(8, "validation levels", 1.0, validation_suite);
  criterion(9, "CLI pipeline with push/pull", 30.0, pipeline_smoke);
  std::printf("%d of 9 criteria failed\n", failures);
  return failures;
}
