#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>

#include "vta/assistant.hpp"
#include "vta/baselines.hpp"
#include "vta/cli.hpp"
#include "vta/corpus.hpp"
#include "vta/server.hpp"

#ifndef VTA_DEFAULT_CORPUS
#define VTA_DEFAULT_CORPUS "data/sample_corpus.json"
#endif
#ifndef VTA_DEFAULT_MODEL
#define VTA_DEFAULT_MODEL "data/sample_model.json"
#endif

namespace vta::cli {
namespace {

struct PipelineFlags {
  bool no_stem = false;
  bool no_stopwords = false;
  bool keep_emoji = false;
  bool keep_punctuation = false;

  void attach(CLI::App& app) {
    app.add_flag("--no-stem", no_stem, "Skip Porter stemming");
    app.add_flag("--no-stopwords", no_stopwords, "Keep stopwords");
    app.add_flag("--keep-emoji", keep_emoji, "Do not strip emoji");
    app.add_flag("--keep-punctuation", keep_punctuation, "Do not strip punctuation");
  }

  text::PipelineConfig config() const {
    auto c = text::PipelineConfig::defaults();
    c.stem = !no_stem;
    if (no_stopwords) c.stopwords.clear();
    c.strip_emoji = !keep_emoji;
    c.strip_punctuation = !keep_punctuation;
    return c;
  }
};

std::string env_or(const char* name, std::string fallback) {
  const char* v = std::getenv(name);
  return v && *v ? std::string(v) : std::move(fallback);
}

const auto kOpenUnit = CLI::Validator(
    [](std::string& s) -> std::string {
      try {
        const double v = std::stod(s);
        if (v > 0.0 && v < 1.0) return {};
      } catch (const std::exception&) {
      }
      return "value must be in (0, 1), got " + s;
    },
    "(0,1)");

struct Options {
  std::string corpus = VTA_DEFAULT_CORPUS;
  std::string model;
  PipelineFlags pipeline;

  // train
  int epochs = 1000;
  std::size_t batch_size = 8;
  std::size_t hidden = 8;
  double lr = 0.001;
  std::uint64_t seed = 0;
  std::string optimizer = "adam";
  int checkpoint_every = 100;
  double threshold = nn::kDefaultThreshold;
  std::size_t min_patterns = 1;
  bool early_stop = false;

  // bench
  std::vector<std::size_t> thresholds = {1, 10};
  std::uint64_t split_seed = 42;
  double test_fraction = 0.2;
  std::string out_csv;
  bool serial = false;

  // chat
  std::optional<std::uint64_t> chat_seed;

  // serve
  std::string host = "127.0.0.1";
  int port = 8080;
  std::string static_dir;
  std::vector<std::string> cors;
};

int do_train(const Options& o, std::ostream& out) {
  auto corpus = load_corpus_file(o.corpus).corpus;
  if (o.min_patterns > 1) corpus = refactor(corpus, o.min_patterns);
  const auto pipeline = o.pipeline.config();
  const auto data = encode_dataset(corpus, pipeline);

  const nn::NetConfig net{data.vocabulary.size(), o.hidden, data.label_names.size()};
  nn::TrainConfig cfg;
  cfg.batch_size = o.batch_size;
  cfg.epochs = o.epochs;
  cfg.learning_rate = o.lr;
  cfg.checkpoint_every = o.checkpoint_every;
  cfg.seed = o.seed;
  cfg.optimizer = o.optimizer == "sgd" ? nn::Optimizer::sgd : nn::Optimizer::adam;
  if (o.early_stop) cfg.early_stop = nn::EarlyStopping{};

  out << "training on " << data.size() << " patterns, " << net.output_dim << " intents, " << net.input_dim
      << " vocabulary words\n";
  auto result = nn::train(data, net, cfg);
  out << format_checkpoints(result.report);
  if (result.report.stopped_early) out << "stopped early after epoch " << result.report.stop_epoch << '\n';

  nn::ModelFile file{std::move(result.params), data.vocabulary, data.label_names, o.threshold};
  nn::save_model_file(file, o.model);
  out << "wrote " << o.model << '\n';
  return 0;
}

int do_bench(const Options& o, std::ostream& out) {
  const auto corpus = load_corpus_file(o.corpus).corpus;
  const auto table = baselines::compare_refactoring(corpus, o.thresholds, o.test_fraction, o.split_seed,
                                                    o.pipeline.config(), {},
                                                    o.serial ? Exec::serial : Exec::parallel);
  out << table.to_text();
  if (!o.out_csv.empty()) {
    std::ofstream csv(o.out_csv, std::ios::binary);
    if (!csv) throw Error("cannot write " + o.out_csv);
    csv << table.to_csv();
    if (!csv) throw Error("cannot write " + o.out_csv);
    out << "wrote " << o.out_csv << '\n';
  }
  return 0;
}

Assistant load_assistant(const Options& o) {
  auto model = nn::load_model_file(o.model);
  const auto corpus = load_corpus_file(o.corpus).corpus;
  return Assistant::from_corpus(std::move(model), corpus, o.pipeline.config());
}

int do_chat(const Options& o, std::istream& in, std::ostream& out) {
  const auto assistant = load_assistant(o);
  std::string line;
  char prob[32];
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line == "quit" || line == "exit") break;
    const auto reply = assistant.respond(line, o.chat_seed);
    std::snprintf(prob, sizeof prob, "%.2f", reply.confidence);
    out << '[' << (reply.intent ? *reply.intent : std::string("fallback")) << " p=" << prob << "] " << reply.response
        << std::endl;
  }
  return 0;
}

int do_serve(const Options& o, std::ostream& out) {
  http::ServeConfig config;
  config.host = o.host;
  config.port = o.port;
  config.model_path = o.model;
  config.corpus_path = o.corpus;
  if (!o.static_dir.empty()) config.static_dir = o.static_dir;
  config.cors_origins = o.cors;
  config.pipeline = o.pipeline.config();
  return http::serve(config, out);
}

}  // namespace

std::string format_checkpoints(const nn::TrainReport& report) {
  const bool with_validation = !report.checkpoints.empty() && report.checkpoints.front().validation_loss;
  std::string text;
  char line[128];
  std::snprintf(line, sizeof line, "%6s  %10s  %8s", "epoch", "loss", "accuracy");
  text += line;
  if (with_validation) {
    std::snprintf(line, sizeof line, "  %10s  %8s", "val_loss", "val_acc");
    text += line;
  }
  text += '\n';
  for (const auto& c : report.checkpoints) {
    std::snprintf(line, sizeof line, "%6d  %10.6f  %8.4f", c.epoch, c.mean_loss, c.train_accuracy);
    text += line;
    if (with_validation && c.validation_loss) {
      std::snprintf(line, sizeof line, "  %10.6f  %8.4f", *c.validation_loss, c.validation_accuracy.value_or(0.0));
      text += line;
    }
    text += '\n';
  }
  return text;
}

int run(std::span<const std::string> args, std::istream& in, std::ostream& out, std::ostream& err) {
  Options o;
  CLI::App app{"Virtual teaching assistant: intent classifier, dataset benchmark and chat service", "vta"};
  app.require_subcommand(1);

  const auto add_corpus = [&](CLI::App* sub) {
    sub->add_option("--corpus", o.corpus, "Intent corpus JSON")->capture_default_str();
  };

  auto* train = app.add_subcommand("train", "Train the intent network and write a model file");
  add_corpus(train);
  train->add_option("--model", o.model, "Output model path (default $VTA_MODEL or vta_model.json)");
  train->add_option("--epochs", o.epochs)->check(CLI::PositiveNumber)->capture_default_str();
  train->add_option("--batch-size", o.batch_size)->check(CLI::PositiveNumber)->capture_default_str();
  train->add_option("--hidden", o.hidden, "Width of both hidden layers")->check(CLI::PositiveNumber)
      ->capture_default_str();
  train->add_option("--lr", o.lr, "Learning rate")->check(CLI::PositiveNumber)->capture_default_str();
  train->add_option("--seed", o.seed)->capture_default_str();
  train->add_option("--optimizer", o.optimizer)->check(CLI::IsMember({"adam", "sgd"}))->capture_default_str();
  train->add_option("--checkpoint-every", o.checkpoint_every)->check(CLI::PositiveNumber)->capture_default_str();
  train->add_option("--threshold", o.threshold, "Confidence threshold stored in the model")
      ->check(kOpenUnit)
      ->capture_default_str();
  train->add_option("--min-patterns", o.min_patterns, "Drop intents with fewer patterns before training")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  train->add_flag("--early-stop", o.early_stop, "Hold out 10% and stop when validation loss stalls");
  o.pipeline.attach(*train);

  auto* bench = app.add_subcommand("bench", "Compare four classifiers across refactoring thresholds");
  add_corpus(bench);
  bench->add_option("--thresholds", o.thresholds, "Ascending minimum pattern counts, e.g. 1,10")
      ->delimiter(',')
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  bench->add_option("--seed", o.split_seed, "Split seed")->capture_default_str();
  bench->add_option("--test-fraction", o.test_fraction)->check(kOpenUnit)->capture_default_str();
  bench->add_option("--out", o.out_csv, "CSV output path");
  bench->add_flag("--serial", o.serial, "Run the trainers one after another");
  o.pipeline.attach(*bench);

  auto* chat = app.add_subcommand("chat", "Answer questions read line by line from standard input");
  add_corpus(chat);
  chat->add_option("--model", o.model, "Model path (default $VTA_MODEL or the bundled model)");
  chat->add_option("--seed", o.chat_seed, "Fix the response choice");
  o.pipeline.attach(*chat);

  auto* serve = app.add_subcommand("serve", "Serve the chat API over HTTP");
  add_corpus(serve);
  serve->add_option("--model", o.model, "Model path (default $VTA_MODEL or the bundled model)");
  serve->add_option("--host", o.host)->capture_default_str();
  serve->add_option("--port", o.port)->check(CLI::Range(1, 65535))->capture_default_str();
  serve->add_option("--static-dir", o.static_dir, "Directory served at /")->check(CLI::ExistingDirectory);
  serve->add_option("--cors", o.cors, "Allowed origin; repeatable, * for any");
  o.pipeline.attach(*serve);

  std::vector<const char*> argv{"vta"};
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    for (auto* sub : app.get_subcommands()) {
      err << "run 'vta " << sub->get_name() << " --help' for usage\n";
    }
    if (app.get_subcommands().empty()) err << "run 'vta --help' for usage\n";
    return 2;
  }

  if (o.model.empty()) o.model = env_or("VTA_MODEL", train->parsed() ? "vta_model.json" : VTA_DEFAULT_MODEL);
  if (bench->parsed()) {
    for (std::size_t i = 1; i < o.thresholds.size(); ++i) {
      if (o.thresholds[i] <= o.thresholds[i - 1]) {
        err << "error: --thresholds must be strictly ascending\n";
        return 2;
      }
    }
  }

  try {
    if (train->parsed()) return do_train(o, out);
    if (bench->parsed()) return do_bench(o, out);
    if (chat->parsed()) return do_chat(o, in, out);
    return do_serve(o, out);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
}

}  // namespace vta::cli
