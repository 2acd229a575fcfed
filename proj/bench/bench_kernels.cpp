// Serial vs OpenMP timings for the row-parallel kernels. Every kernel is also
// checked for bitwise-identical output across the two paths.

#include <chrono>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "vta/baselines.hpp"
#include "vta/corpus.hpp"
#include "vta/exec.hpp"
#include "vta/ffnet.hpp"
#include "vta/rng.hpp"
#include "vta/textpipe.hpp"

#ifndef VTA_DEFAULT_CORPUS
#define VTA_DEFAULT_CORPUS "data/sample_corpus.json"
#endif

namespace {

using Clock = std::chrono::steady_clock;

double best_ms(int repeats, const std::function<void()>& fn) {
  double best = 1e300;
  for (int r = 0; r < repeats; ++r) {
    const auto t0 = Clock::now();
    fn();
    const std::chrono::duration<double, std::milli> dt = Clock::now() - t0;
    best = std::min(best, dt.count());
  }
  return best;
}

// Grows the corpus by recombining words of same-tag patterns.
std::vector<vta::Example> synthetic_examples(const vta::Corpus& corpus, std::size_t rows, std::uint64_t seed) {
  vta::Rng rng(seed);
  std::vector<vta::Example> out;
  out.reserve(rows);
  const auto base = vta::all_examples(corpus);
  while (out.size() < rows) {
    const auto& a = base[rng.uniform_index(base.size())];
    const auto& intent = corpus.intents[a.label];
    const auto& b = intent.patterns[rng.uniform_index(intent.patterns.size())];
    out.push_back({a.text + " " + b, a.label});
  }
  return out;
}

template <class T>
void report(const char* name, int repeats, const std::function<T(vta::Exec)>& kernel) {
  T serial_out{};
  T parallel_out{};
  const double s = best_ms(repeats, [&] { serial_out = kernel(vta::Exec::serial); });
  const double p = best_ms(repeats, [&] { parallel_out = kernel(vta::Exec::parallel); });
  std::printf("%-22s %10.3f %10.3f %8.2fx  %s\n", name, s, p, s / p, serial_out == parallel_out ? "same" : "DIFFER");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Row-parallel kernel benchmark", "bench_kernels"};
  std::string corpus_path = VTA_DEFAULT_CORPUS;
  std::size_t rows = 20000;
  int repeats = 5;
  app.add_option("--corpus", corpus_path)->capture_default_str();
  app.add_option("--rows", rows, "Synthetic rows per kernel")->check(CLI::PositiveNumber)->capture_default_str();
  app.add_option("--repeats", repeats, "Best of N")->check(CLI::PositiveNumber)->capture_default_str();
  CLI11_PARSE(app, argc, argv);

  const auto corpus = vta::load_corpus_file(corpus_path).corpus;
  const auto cfg = vta::text::PipelineConfig::defaults();
  const auto examples = synthetic_examples(corpus, rows, 7);
  const auto vocab = vta::build_vocabulary(corpus, cfg);
  const auto tags = corpus.tags();
  const auto data = vta::encode_examples(examples, tags, vocab, cfg, vta::Exec::serial);

  const vta::nn::NetConfig net{vocab.size(), 8, tags.size()};
  const auto params = vta::nn::init_params(net, 0);
  const auto nb = vta::baselines::train_naive_bayes(data);
  const auto lr = vta::baselines::train_logistic_regression(data, 1e-4, 0.1, 20);

  std::printf("threads %d, rows %zu, vocabulary %zu, best of %d\n", vta::parallel_threads(), rows, vocab.size(),
              repeats);
  std::printf("%-22s %10s %10s %9s  %s\n", "kernel", "serial_ms", "omp_ms", "speedup", "output");

  report<vta::LabeledDataset>("encode_examples", repeats, [&](vta::Exec e) {
    return vta::encode_examples(examples, tags, vocab, cfg, e);
  });
  report<std::vector<double>>("score_dataset", repeats, [&](vta::Exec e) {
    const auto s = vta::nn::score_dataset(params, data, e);
    return std::vector<double>{s.mean_loss, s.accuracy};
  });
  report<std::vector<std::vector<double>>>("predict_proba", repeats, [&](vta::Exec e) {
    return vta::nn::predict_proba(params, data.features, e);
  });
  report<std::vector<std::size_t>>("predict_all/nb", repeats, [&](vta::Exec e) {
    return vta::baselines::predict_all(nb, data.features, e);
  });
  report<std::vector<std::size_t>>("predict_all/logreg", repeats, [&](vta::Exec e) {
    return vta::baselines::predict_all(lr, data.features, e);
  });
  return 0;
}
