// cti4ai: dataset generation, training, FGM attack, AITI encoding,
// validation and TAXII serve/push/pull behind one binary.

#include <csignal>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "cti4ai/aiti/codec.hpp"
#include "cti4ai/aiti/identifier.hpp"
#include "cti4ai/aiti/validate.hpp"
#include "cti4ai/common/errors.hpp"
#include "cti4ai/common/text.hpp"
#include "cti4ai/redteam/fgm.hpp"
#include "cti4ai/redteam/io.hpp"
#include "cti4ai/taxii/client.hpp"
#include "cti4ai/taxii/http_server.hpp"
#include "cti4ai/tie/encoder.hpp"

namespace {

using namespace cti4ai;

constexpr int kExitOk = 0;
constexpr int kExitInvalid = 1;
constexpr int kExitNetwork = 2;
constexpr int kExitAuth = 3;
constexpr int kExitUsage = 64;

struct Globals {
  std::string mode = "canonical";
  std::optional<std::uint64_t> seed;

  aiti::Mode wire_mode() const { return aiti::mode_from_string(mode); }

  std::uint64_t resolve_seed() {
    if (!seed) {
      seed = std::random_device{}() | (std::uint64_t{std::random_device{}()} << 32);
      std::cerr << "seed: " << *seed << '\n';
    }
    return *seed;
  }
};

struct Remote {
  std::string server;
  std::string token;
  std::string root = "aiti";
  std::string collection;

  void add_flags(CLI::App* cmd) {
    cmd->add_option("--server", server, "Server base URL")->envname("CTI4AI_SERVER")->required();
    cmd->add_option("--token", token, "Bearer token")->envname("CTI4AI_TOKEN")->required();
    cmd->add_option("--root", root, "API root name")->capture_default_str();
    cmd->add_option("--collection", collection, "Collection id or alias")->required();
  }
};

std::optional<Timestamp> parse_time_flag(const std::string& text, const char* flag) {
  if (text.empty()) return std::nullopt;
  const auto t = Timestamp::try_parse(text);
  if (!t) throw ArgumentError(std::string(flag) + ": not a timestamp: " + text);
  return t;
}

void write_output(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    std::cout.flush();
  } else {
    redteam::write_text_file(path, text);
  }
}

std::string pretty(const nlohmann::ordered_json& doc) { return doc.dump(2) + "\n"; }

// --- dataset gen ------------------------------------------------------------

struct DatasetGenArgs {
  redteam::BlobOptions blobs;
  std::string out;
};

int cmd_dataset_gen(Globals& g, DatasetGenArgs& a) {
  a.blobs.seed = g.resolve_seed();
  const auto data = redteam::generate_blobs(a.blobs);
  std::ostringstream text;
  redteam::write_dataset_csv(text, data);
  write_output(a.out, text.str());
  return kExitOk;
}

// --- train --------------------------------------------------------------------

struct TrainArgs {
  std::string dataset;
  std::vector<std::size_t> hidden;
  std::string activation = "tanh";
  std::string name;
  double learning_rate = 0.5;
  int epochs = 200;
  std::string out;
};

int cmd_train(Globals& g, TrainArgs& a) {
  const auto data = redteam::load_dataset(a.dataset);
  std::string name = a.name;
  if (name.empty()) {
    name = "softmax";
    if (!a.hidden.empty()) {
      name = "mlp";
      for (auto w : a.hidden) name += "-" + std::to_string(w);
    }
  }
  const auto arch = redteam::DifferentiableClassifier::with_architecture(
      name, data.n_features(), a.hidden, redteam::activation_from_string(a.activation),
      data.n_classes);
  redteam::TrainingOptions opts;
  opts.learning_rate = a.learning_rate;
  opts.epochs = a.epochs;
  opts.seed = g.resolve_seed();
  const auto model = redteam::train(arch, data, opts);
  write_output(a.out, pretty(redteam::to_json(model)));
  std::cerr << "clean accuracy: " << format_double(redteam::accuracy(model, data)) << '\n';
  return kExitOk;
}

// --- attack -------------------------------------------------------------------

struct AttackArgs {
  std::string model;
  std::string dataset;
  std::string dataset_name;
  double epsilon = 0.0;
  std::string norm = "inf";
  bool targeted = false;
  std::optional<std::size_t> target_class;
  std::string target_labels;
  std::vector<double> clip{0.0, 1.0};
  bool no_clip = false;
  std::string created;
  std::string dump_perturbed;
  std::string out;
};

std::vector<redteam::ClassIndex> read_labels(const std::string& path) {
  std::vector<redteam::ClassIndex> labels;
  std::istringstream in(redteam::read_text_file(path));
  std::string line;
  while (std::getline(in, line)) {
    const auto t = trim(line);
    if (t.empty()) continue;
    const auto v = parse_integer(t);
    if (!v || *v < 0) throw ArgumentError("--target-labels: bad label '" + std::string(t) + "'");
    labels.push_back(static_cast<redteam::ClassIndex>(*v));
  }
  return labels;
}

int cmd_attack(Globals&, AttackArgs& a) {
  const auto model = redteam::load_model(a.model);
  auto data = redteam::load_dataset(a.dataset, model.n_classes());
  if (!a.dataset_name.empty()) data.name = a.dataset_name;

  redteam::FgmConfig config;
  config.epsilon = a.epsilon;
  config.norm = redteam::norm_from_string(a.norm);
  config.targeted = a.targeted;
  if (a.targeted) {
    std::vector<redteam::ClassIndex> targets;
    if (!a.target_labels.empty()) {
      targets = read_labels(a.target_labels);
      if (targets.size() != data.size()) {
        throw ArgumentError("--target-labels has " + std::to_string(targets.size()) +
                            " labels for " + std::to_string(data.size()) + " samples");
      }
    } else if (a.target_class) {
      targets.assign(data.size(), *a.target_class);
    } else {
      for (auto y : data.labels) targets.push_back((y + 1) % model.n_classes());
    }
    config.target_labels = std::move(targets);
  }
  if (!a.no_clip) {
    if (a.clip.size() != 2) throw ArgumentError("--clip takes lo,hi");
    config.clip_range = redteam::ClipRange{a.clip[0], a.clip[1]};
  }

  const auto created = parse_time_flag(a.created, "--created");
  const Clock clock = created ? fixed_clock(*created) : system_clock();
  const auto result = redteam::run_fgm_attack(model, data, config, clock);

  if (!a.dump_perturbed.empty()) {
    std::ostringstream csv;
    redteam::write_features_csv(csv, result.adversarial, data.labels);
    redteam::write_text_file(a.dump_perturbed, csv.str());
  }
  write_output(a.out, pretty(redteam::to_json(result.report)));
  std::cerr << "clean accuracy: " << format_double(result.report.clean_accuracy)
            << ", adversarial accuracy: " << format_double(result.report.adversarial_accuracy)
            << ", success rate: " << format_double(result.report.success_rate) << '\n';
  return kExitOk;
}

// --- encode -------------------------------------------------------------------

struct EncodeArgs {
  std::string report;
  std::string id_strategy = "content";
  std::string id;
  std::string created;
  bool pattern = false;
  bool sighting = false;
  std::string producer;
  std::string task;
  std::string sophistication;
  std::string resource_level;
  std::string primary_motivation;
  std::vector<std::string> personas;
  std::vector<std::string> paradigms;
  std::string use_case;
  bool single = false;
  std::string out;
};

std::optional<std::string> non_empty(const std::string& s) {
  return s.empty() ? std::nullopt : std::optional<std::string>(s);
}

int cmd_encode(Globals& g, EncodeArgs& a) {
  const auto report =
      redteam::report_from_json(nlohmann::json::parse(redteam::read_text_file(a.report)));

  tie::EncoderOptions opts;
  if (a.id_strategy == "content") {
    opts.id_strategy = tie::ContentDerivedIds{};
  } else if (a.id_strategy == "canonical-random") {
    opts.id_strategy = tie::RandomIds{g.resolve_seed()};
  } else if (a.id_strategy == "verbatim") {
    if (a.id.empty()) throw ArgumentError("--id-strategy verbatim requires --id");
    opts.id_strategy = tie::VerbatimId{a.id};
  } else {
    throw ArgumentError("unknown --id-strategy '" + a.id_strategy + "'");
  }
  if (!a.id.empty() && a.id_strategy != "verbatim") {
    throw ArgumentError("--id is only meaningful with --id-strategy verbatim");
  }
  const auto created = parse_time_flag(a.created, "--created");
  opts.clock = fixed_clock(created.value_or(report.created));
  opts.emit_pattern_object = a.pattern;
  opts.emit_sighting = a.sighting;
  opts.producer_identity = non_empty(a.producer);
  opts.model_task = non_empty(a.task);
  opts.sophistication = non_empty(a.sophistication);
  opts.resource_level = non_empty(a.resource_level);
  opts.primary_motivation = non_empty(a.primary_motivation);
  opts.personas = a.personas;
  opts.paradigms = a.paradigms;
  opts.use_case = non_empty(a.use_case);

  const auto bundle = tie::encode(report, opts);
  const auto mode = g.wire_mode();
  if (a.single) {
    write_output(a.out, pretty(aiti::to_json(bundle.objects.front(), mode)));
  } else {
    write_output(a.out, pretty(aiti::to_json(bundle, mode)));
  }
  return kExitOk;
}

// --- validate -----------------------------------------------------------------

struct ValidateArgs {
  std::string bundle;
  std::string level = "strict";
};

// A bundle document, or a single object wrapped into a bundle.
aiti::Bundle read_bundle_or_object(const std::string& path) {
  const std::string text = redteam::read_text_file(path);
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw aiti::ParseError({{aiti::Severity::error, "malformed-json", "", e.what()}});
  }
  if (doc.is_object() && doc.value("type", "") == "bundle") return aiti::parse_bundle(doc);
  auto object = aiti::parse_object_auto(doc);
  aiti::Bundle bundle{aiti::Identifier("bundle--" + aiti::name_based_uuid("single:" + object.id.str())),
                      {}};
  bundle.objects.push_back(std::move(object));
  return bundle;
}

int cmd_validate(Globals&, ValidateArgs& a) {
  const auto level = aiti::validation_level_from_string(a.level);
  std::vector<aiti::Diagnostic> diagnostics;
  try {
    diagnostics = aiti::validate(read_bundle_or_object(a.bundle), level);
  } catch (const aiti::ParseError& e) {
    diagnostics = e.diagnostics();
  }
  for (const auto& d : diagnostics) std::cerr << d << '\n';
  const auto errors = aiti::count(diagnostics, aiti::Severity::error);
  const auto warnings = aiti::count(diagnostics, aiti::Severity::warning);
  std::cerr << a.bundle << ": " << errors << " error(s), " << warnings << " warning(s) ["
            << aiti::to_string(level) << "]\n";
  return errors == 0 ? kExitOk : kExitInvalid;
}

// --- serve --------------------------------------------------------------------

struct ServeArgs {
  std::string config;
  std::optional<int> port;
  std::string bind;
  std::string port_file;
};

int cmd_serve(Globals&, ServeArgs& a) {
  auto config = taxii::ServerConfig::load(a.config);
  if (a.port) config.port = *a.port;
  if (!a.bind.empty()) config.bind = a.bind;

  // Block the stop signals before any thread exists so sigwait sees them.
  sigset_t stop_signals;
  sigemptyset(&stop_signals);
  sigaddset(&stop_signals, SIGINT);
  sigaddset(&stop_signals, SIGTERM);
  pthread_sigmask(SIG_BLOCK, &stop_signals, nullptr);

  taxii::TaxiiService service(config);
  taxii::HttpServer server(service);
  const int port = server.bind(config.bind, config.port);
  server.start();
  if (!a.port_file.empty()) redteam::write_text_file(a.port_file, std::to_string(port) + "\n");
  std::cerr << "serving on http://" << config.bind << ":" << port << "/taxii2/ ("
            << service.recovery().records << " stored object(s) recovered)\n";

  int sig = 0;
  sigwait(&stop_signals, &sig);
  std::cerr << "stopping\n";
  server.stop();
  return kExitOk;
}

// --- push / pull --------------------------------------------------------------

struct PushArgs {
  Remote remote;
  std::string bundle;
};

int cmd_push(Globals&, PushArgs& a) {
  const auto doc = nlohmann::json::parse(redteam::read_text_file(a.bundle));
  nlohmann::json objects;
  if (doc.is_object() && doc.value("type", "") == "bundle") {
    objects = doc.at("objects");
  } else {
    objects = nlohmann::json::array({doc});
  }
  taxii::Client client(a.remote.server, a.remote.token);
  const auto status =
      client.add_objects(a.remote.root, a.remote.collection, {{"objects", objects}});
  std::cout << status.dump(2) << '\n';
  return status.value("failure_count", 0) == 0 ? kExitOk : kExitInvalid;
}

struct PullArgs {
  Remote remote;
  std::vector<std::string> match_type;
  std::vector<std::string> match_id;
  std::string added_after;
  std::optional<std::size_t> limit;
  std::string out;
};

int cmd_pull(Globals& g, PullArgs& a) {
  taxii::ObjectQuery query;
  query.match_type = a.match_type;
  query.match_id = a.match_id;
  query.added_after = parse_time_flag(a.added_after, "--added-after");
  query.limit = a.limit;

  taxii::Client client(a.remote.server, a.remote.token);
  const auto objects = client.get_all_objects(a.remote.root, a.remote.collection, query);

  std::string ids;
  std::vector<aiti::AitiObject> parsed;
  for (std::size_t i = 0; i < objects.size(); ++i) {
    parsed.push_back(aiti::parse_object_auto(objects[i], "/objects/" + std::to_string(i)));
    ids += parsed.back().id.str() + "@" + parsed.back().version().to_rfc3339() + "\n";
  }
  aiti::Bundle bundle{aiti::Identifier("bundle--" + aiti::name_based_uuid("pull:" + ids)),
                      std::move(parsed)};
  write_output(a.out, pretty(aiti::to_json(bundle, g.wire_mode())));
  std::cerr << "pulled " << bundle.objects.size() << " object(s)\n";
  return kExitOk;
}

int report_failure(const char* kind, const std::exception& e, int code) {
  std::cerr << "cti4ai: " << kind << e.what() << '\n';
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"AI threat intelligence pipeline: red-team, encode, validate and share"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "cti4ai 0.1.0");

  Globals g;
  app.add_option("--mode", g.mode, "Wire format: canonical or paper-compat")
      ->check(CLI::IsMember({"canonical", "paper-compat", "paper"}))
      ->capture_default_str();
  app.add_option("--seed", g.seed, "Seed for every random choice (default: entropy, printed)");

  std::function<int()> run;

  auto* dataset = app.add_subcommand("dataset", "Synthetic datasets");
  dataset->require_subcommand(1);
  DatasetGenArgs gen_args;
  auto* gen = dataset->add_subcommand("gen", "Generate a Gaussian-blob dataset CSV");
  gen->add_option("--n-per-class", gen_args.blobs.n_per_class)->capture_default_str();
  gen->add_option("--classes", gen_args.blobs.n_classes)->capture_default_str();
  gen->add_option("--features", gen_args.blobs.n_features)->capture_default_str();
  gen->add_option("--separation", gen_args.blobs.separation)->capture_default_str();
  gen->add_option("--out,-o", gen_args.out, "Output CSV (default stdout)");
  gen->callback([&] { run = [&] { return cmd_dataset_gen(g, gen_args); }; });

  TrainArgs train_args;
  auto* train = app.add_subcommand("train", "Train a classifier on a dataset CSV");
  train->add_option("--dataset,-d", train_args.dataset)->required();
  train->add_option("--hidden", train_args.hidden, "Hidden layer widths, e.g. 8,8")
      ->delimiter(',');
  train->add_option("--activation", train_args.activation)
      ->check(CLI::IsMember({"identity", "relu", "tanh"}))
      ->capture_default_str();
  train->add_option("--name", train_args.name, "Model name");
  train->add_option("--lr", train_args.learning_rate)->capture_default_str();
  train->add_option("--epochs", train_args.epochs)->capture_default_str();
  train->add_option("--out,-o", train_args.out, "Output model JSON (default stdout)");
  train->callback([&] { run = [&] { return cmd_train(g, train_args); }; });

  AttackArgs attack_args;
  auto* attack = app.add_subcommand("attack", "Run FGM against a model and report the damage");
  attack->add_option("--model,-m", attack_args.model)->required();
  attack->add_option("--dataset,-d", attack_args.dataset)->required();
  attack->add_option("--dataset-name", attack_args.dataset_name,
                     "Dataset name for the report (default: file stem)");
  attack->add_option("--epsilon,-e", attack_args.epsilon)->required();
  attack->add_option("--norm", attack_args.norm)
      ->check(CLI::IsMember({"inf", "one", "two", "np.inf", "1", "2"}))
      ->capture_default_str();
  attack->add_flag("--targeted", attack_args.targeted);
  auto* target_class = attack->add_option("--target-class", attack_args.target_class,
                                          "Target every sample at this class");
  auto* target_file = attack->add_option("--target-labels", attack_args.target_labels,
                                         "File with one target class per sample");
  target_class->excludes(target_file);
  auto* clip = attack->add_option("--clip", attack_args.clip, "Clip range lo,hi")
                   ->delimiter(',')
                   ->expected(2)
                   ->capture_default_str();
  attack->add_flag("--no-clip", attack_args.no_clip)->excludes(clip);
  attack->add_option("--created", attack_args.created, "Report timestamp (default: now)");
  attack->add_option("--dump-perturbed", attack_args.dump_perturbed,
                     "Write adversarial samples CSV");
  attack->add_option("--out,-o", attack_args.out, "Output report JSON (default stdout)");
  attack->callback([&] {
    if (!attack_args.targeted && (attack_args.target_class || !attack_args.target_labels.empty())) {
      throw CLI::ValidationError("--target-class/--target-labels", "require --targeted");
    }
    run = [&] { return cmd_attack(g, attack_args); };
  });

  EncodeArgs encode_args;
  auto* encode = app.add_subcommand("encode", "Encode a vulnerability report as an AITI bundle");
  encode->add_option("--report,-r", encode_args.report)->required();
  encode->add_option("--id-strategy", encode_args.id_strategy)
      ->check(CLI::IsMember({"content", "canonical-random", "verbatim"}))
      ->capture_default_str();
  encode->add_option("--id", encode_args.id, "Attack object id for --id-strategy verbatim");
  encode->add_option("--created", encode_args.created,
                     "Object timestamp (default: the report's created)");
  encode->add_flag("--pattern", encode_args.pattern, "Emit an attack pattern and relationship");
  encode->add_flag("--sighting", encode_args.sighting, "Emit a sighting");
  encode->add_option("--producer", encode_args.producer, "Producer identity name");
  encode->add_option("--task", encode_args.task, "Model task, e.g. \"object recognition\"");
  encode->add_option("--sophistication", encode_args.sophistication);
  encode->add_option("--resource-level", encode_args.resource_level);
  encode->add_option("--primary-motivation", encode_args.primary_motivation);
  encode->add_option("--persona", encode_args.personas, "Affected user persona (repeatable)");
  encode->add_option("--paradigm", encode_args.paradigms, "AI paradigm under threat (repeatable)");
  encode->add_option("--use-case", encode_args.use_case);
  encode->add_flag("--single", encode_args.single, "Write only the attack object, not a bundle");
  encode->add_option("--out,-o", encode_args.out, "Output JSON (default stdout)");
  encode->callback([&] { run = [&] { return cmd_encode(g, encode_args); }; });

  ValidateArgs validate_args;
  auto* validate = app.add_subcommand("validate", "Validate a bundle or single object");
  validate->add_option("--bundle,-b", validate_args.bundle)->required();
  validate->add_option("--level", validate_args.level)
      ->check(CLI::IsMember({"strict", "lenient"}))
      ->capture_default_str();
  validate->callback([&] { run = [&] { return cmd_validate(g, validate_args); }; });

  ServeArgs serve_args;
  auto* serve = app.add_subcommand("serve", "Run the TAXII sharing service until interrupted");
  serve->add_option("--config,-c", serve_args.config)->required();
  serve->add_option("--port", serve_args.port, "Override the configured port (0 = ephemeral)");
  serve->add_option("--bind", serve_args.bind, "Override the configured bind address");
  serve->add_option("--port-file", serve_args.port_file, "Write the bound port here");
  serve->callback([&] { run = [&] { return cmd_serve(g, serve_args); }; });

  PushArgs push_args;
  auto* push = app.add_subcommand("push", "Add a bundle's objects to a remote collection");
  push_args.remote.add_flags(push);
  push->add_option("--bundle,-b", push_args.bundle)->required();
  push->callback([&] { run = [&] { return cmd_push(g, push_args); }; });

  PullArgs pull_args;
  auto* pull = app.add_subcommand("pull", "Fetch a remote collection as a bundle");
  pull_args.remote.add_flags(pull);
  pull->add_option("--match-type", pull_args.match_type)->delimiter(',');
  pull->add_option("--match-id", pull_args.match_id)->delimiter(',');
  pull->add_option("--added-after", pull_args.added_after);
  pull->add_option("--limit", pull_args.limit, "Page size")->check(CLI::PositiveNumber);
  pull->add_option("--out,-o", pull_args.out, "Output bundle JSON (default stdout)");
  pull->callback([&] { run = [&] { return cmd_pull(g, pull_args); }; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    return run();
  } catch (const taxii::AuthError& e) {
    return report_failure("authorization failed: ", e, kExitAuth);
  } catch (const taxii::NetworkError& e) {
    return report_failure("network error: ", e, kExitNetwork);
  } catch (const taxii::TaxiiError& e) {
    return report_failure("server rejected request: ", e, kExitInvalid);
  } catch (const aiti::ParseError& e) {
    for (const auto& d : e.diagnostics()) std::cerr << d << '\n';
    return report_failure("", e, kExitInvalid);
  } catch (const ArgumentError& e) {
    return report_failure("", e, kExitUsage);
  } catch (const std::exception& e) {
    return report_failure("", e, kExitInvalid);
  }
}
