#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "videostory/embedding.hpp"
#include "videostory/eval.hpp"
#include "videostory/oracle.hpp"
#include "videostory/rng.hpp"
#include "videostory/trainer.hpp"
#include "videostory/zeroshot.hpp"

using namespace videostory;

namespace {

oracle::SynthResult make_corpus(std::size_t n, std::size_t m, std::size_t d,
                                std::size_t k, std::size_t events = 0) {
  oracle::SynthSpec spec;
  spec.n_videos = n;
  spec.n_terms = m;
  spec.dims = {d};
  spec.k_true = k;
  spec.noise_sigma = 0.2;
  spec.n_events = events;
  spec.positives_per_event = events ? 10 : 0;
  spec.seed = 1;
  return oracle::synth_corpus(spec);
}

void BM_SgdEpoch(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  auto synth = make_corpus(n, 50, 64, 16);
  Hyperparams hp;
  hp.k = 16;
  hp.eta = 0.01;
  std::mt19937_64 gen(0);
  TrainState ts = init_train_state(synth.corpus, hp, gen);
  for (auto _ : state) {
    run_sgd(ts, synth.corpus, hp, {}, Eigen::VectorXd(), 1, gen);
    benchmark::DoNotOptimize(ts.A.data());
  }
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations()) *
                          static_cast<std::int64_t>(n));
}
BENCHMARK(BM_SgdEpoch)->Arg(200)->Arg(1000)->Arg(5000);

void BM_SvdInit(benchmark::State& state) {
  const auto m = static_cast<std::size_t>(state.range(0));
  auto synth = make_corpus(4 * m, m, 32, 8);
  const Eigen::MatrixXd Y = synth.corpus.term_matrix.to_dense();
  for (auto _ : state) {
    auto [A, S] = svd_init(Y, 8);
    benchmark::DoNotOptimize(A.data());
    benchmark::DoNotOptimize(S.data());
  }
}
BENCHMARK(BM_SvdInit)->Arg(50)->Arg(200);

void BM_ClosedFormS(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  auto synth = make_corpus(n, 50, 64, 16);
  const Eigen::MatrixXd Y = synth.corpus.term_matrix.to_dense();
  const Eigen::MatrixXd X = feature_cols(synth.corpus.features[0]);
  auto [A, S0] = svd_init(Y, 16);
  const Eigen::MatrixXd W = oracle::closed_form_W(X, S0, 1e-3);
  for (auto _ : state) {
    Eigen::MatrixXd S = oracle::closed_form_S(A, {W}, Y, {X}, 1e-3);
    benchmark::DoNotOptimize(S.data());
  }
}
BENCHMARK(BM_ClosedFormS)->Arg(1000)->Arg(5000);

void BM_CosineRank(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  auto synth = make_corpus(n, 50, 64, 16, 1);
  Hyperparams hp;
  hp.k = 16;
  hp.epochs = 1;
  auto [model, imp] = train_zero(synth.corpus, hp, synth.events[0]);
  const EventQuery query =
      build_event_query(synth.events[0], synth.corpus.vocabulary);
  const int threads = static_cast<int>(state.range(1));
  for (auto _ : state) {
    Ranking r = cosine_rank(model, query, synth.corpus, threads);
    benchmark::DoNotOptimize(r.entries.data());
  }
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations()) *
                          static_cast<std::int64_t>(n));
}
BENCHMARK(BM_CosineRank)->Args({5000, 1})->Args({5000, 4})->Args({20000, 1})->Args({20000, 4});

void BM_AveragePrecision(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  std::mt19937_64 gen(3);
  std::vector<std::string> ids;
  std::vector<int> labels;
  Eigen::VectorXd scores(static_cast<Eigen::Index>(n));
  for (std::size_t i = 0; i < n; ++i) {
    ids.push_back("v" + std::to_string(i));
    labels.push_back(uniform01(gen) < 0.05 ? 1 : 0);
    scores(static_cast<Eigen::Index>(i)) = gaussian(gen);
  }
  if (labels[0] == 0) labels[0] = 1;  // guarantee a positive
  for (auto _ : state) {
    auto r = average_precision(ids, scores, labels);
    benchmark::DoNotOptimize(r.ap);
  }
}
BENCHMARK(BM_AveragePrecision)->Arg(1000)->Arg(100000);

}  // namespace

BENCHMARK_MAIN();
