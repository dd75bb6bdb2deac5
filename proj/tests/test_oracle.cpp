#include <doctest.h>

#include <random>

#include "videostory/embedding.hpp"
#include "videostory/errors.hpp"
#include "videostory/fusion.hpp"
#include "videostory/oracle.hpp"
#include "videostory/rng.hpp"

using namespace videostory;

namespace {

Eigen::MatrixXd random_matrix(Eigen::Index rows, Eigen::Index cols,
                              std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  Eigen::MatrixXd m(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r)
    for (Eigen::Index c = 0; c < cols; ++c) m(r, c) = gaussian(gen);
  return m;
}

}  // namespace

TEST_CASE("closed_form_W zeroes the summed predictability gradient") {
  Eigen::MatrixXd X = random_matrix(5, 12, 1);  // D x N
  Eigen::MatrixXd S = random_matrix(3, 12, 2);  // k x N
  const double lw = 0.01;
  Eigen::MatrixXd W = oracle::closed_form_W(X, S, lw);

  // summed Eq. grad over samples: -X(S - W^T X)^T + N? no: per sample
  // -x_i (s_i - W^T x_i)^T + lw W summed with regularizer applied once per
  // sample in the SGD view; the dataset loss has a single regularizer.
  Eigen::MatrixXd grad = -X * (S - W.transpose() * X).transpose() + lw * W;
  CHECK(grad.norm() <= 1e-8);

  SUBCASE("identity features, no regularizer") {
    Eigen::MatrixXd I5 = Eigen::MatrixXd::Identity(5, 5);
    Eigen::MatrixXd S5 = random_matrix(3, 5, 3);
    Eigen::MatrixXd W2 = oracle::closed_form_W(I5, S5, 0.0);
    CHECK((W2 - S5.transpose()).norm() <= 1e-10);
    CHECK(predictability_loss(S5, W2, I5, 0.0) ==
          doctest::Approx(0.0).epsilon(1e-18));
  }
  SUBCASE("zero targets give zero weights") {
    CHECK(oracle::closed_form_W(X, Eigen::MatrixXd::Zero(3, 12), 0.5).norm() == 0.0);
  }
  SUBCASE("perturbations never lower the loss") {
    std::mt19937_64 gen(4);
    const double base = predictability_loss(S, W, X, lw);
    for (int t = 0; t < 100; ++t) {
      Eigen::MatrixXd delta(W.rows(), W.cols());
      for (Eigen::Index r = 0; r < W.rows(); ++r)
        for (Eigen::Index c = 0; c < W.cols(); ++c)
          delta(r, c) = 0.01 * gaussian(gen);
      CHECK(predictability_loss(S, W + delta, X, lw) >= base);
    }
  }
}

TEST_CASE("closed_form_A stationarity and perturbation optimality") {
  Eigen::MatrixXd S = random_matrix(3, 10, 5);
  Eigen::MatrixXd Y = (random_matrix(7, 10, 6).array() > 0).cast<double>();
  const double la = 0.02;
  Eigen::MatrixXd A = oracle::closed_form_A(Y, S, la);

  Eigen::MatrixXd grad = -(Y - A * S) * S.transpose() + la * A;
  CHECK(grad.norm() <= 1e-8);

  std::mt19937_64 gen(7);
  const double base = descriptiveness_loss(A, S, Y, la, 0.0);
  for (int t = 0; t < 100; ++t) {
    Eigen::MatrixXd delta(A.rows(), A.cols());
    for (Eigen::Index r = 0; r < A.rows(); ++r)
      for (Eigen::Index c = 0; c < A.cols(); ++c) delta(r, c) = 0.01 * gaussian(gen);
    CHECK(descriptiveness_loss(A + delta, S, Y, la, 0.0) >= base);
  }

  SUBCASE("weighted variant zeroes the weighted gradient") {
    Eigen::VectorXd w(7);
    w << 0.75, 0.25, 0.25, 0.75, 0.25, 0.25, 0.75;
    Eigen::MatrixXd Aw = oracle::closed_form_A(Y, S, la, w);
    Eigen::MatrixXd gw =
        -(w.asDiagonal() * (Y - Aw * S)) * S.transpose() + la * Aw;
    CHECK(gw.norm() <= 1e-8);
  }
}

TEST_CASE("closed_form_S zeroes the per-sample latent gradient") {
  const Eigen::Index M = 6, k = 3, N = 9;
  Eigen::MatrixXd A = random_matrix(M, k, 8);
  std::vector<Eigen::MatrixXd> Ws = {random_matrix(4, k, 9), random_matrix(5, k, 10)};
  std::vector<Eigen::MatrixXd> Xs = {random_matrix(4, N, 11), random_matrix(5, N, 12)};
  Eigen::MatrixXd Y = (random_matrix(M, N, 13).array() > 0).cast<double>();
  const double ls = 0.03;
  std::vector<double> gammas = {0.7, 1.4};

  Eigen::MatrixXd S = oracle::closed_form_S(A, Ws, Y, Xs, ls, gammas);
  for (Eigen::Index i = 0; i < N; ++i) {
    Eigen::VectorXd s = S.col(i);
    Eigen::VectorXd grad = -A.transpose() * (Y.col(i) - A * s) + ls * s;
    for (std::size_t j = 0; j < Ws.size(); ++j)
      grad += gammas[j] * (s - Ws[j].transpose() * Xs[j].col(i));
    CHECK(grad.norm() <= 1e-10);
  }

  SUBCASE("degenerate zero case") {
    Eigen::MatrixXd S0 = oracle::closed_form_S(
        Eigen::MatrixXd::Zero(M, k), {Eigen::MatrixXd::Zero(4, k)}, Y,
        {Xs[0]}, 0.0, {1.0});
    CHECK(S0.norm() == 0.0);
  }

  SUBCASE("perturbations never lower the joint objective") {
    Hyperparams hp;
    hp.k = k;
    hp.lambda_a = 0.0;
    hp.lambda_s = ls;
    hp.lambda_w = 0.0;
    const double base = oracle::oracle_objective(A, Ws, S, Y, Xs, hp, gammas);
    std::mt19937_64 gen(14);
    for (int t = 0; t < 100; ++t) {
      Eigen::MatrixXd delta(k, N);
      for (Eigen::Index r = 0; r < k; ++r)
        for (Eigen::Index c = 0; c < N; ++c) delta(r, c) = 0.01 * gaussian(gen);
      CHECK(oracle::oracle_objective(A, Ws, S + delta, Y, Xs, hp, gammas) >= base);
    }
  }
}

TEST_CASE("lsi closed form S matches the gamma-free stationarity") {
  Eigen::MatrixXd A = random_matrix(6, 3, 15);
  Eigen::MatrixXd Y = (random_matrix(6, 8, 16).array() > 0).cast<double>();
  Eigen::MatrixXd S = oracle::lsi_closed_form_S(A, Y, 0.05);
  Eigen::MatrixXd grad = -A.transpose() * (Y - A * S) + 0.05 * S;
  CHECK(grad.norm() <= 1e-10);
}

TEST_CASE("alternating minimization: non-increasing trace, independent recheck") {
  oracle::SynthSpec spec;
  spec.n_videos = 8;
  spec.n_terms = 10;
  spec.dims = {5};
  spec.k_true = 3;
  spec.noise_sigma = 0.3;
  spec.seed = 3;
  auto synth = oracle::synth_corpus(spec);

  Hyperparams hp;
  hp.k = 3;
  auto result = oracle::alternating_minimize(synth.corpus, hp, 50, 1e-12);
  REQUIRE(!result.objective_trace.empty());
  for (std::size_t i = 1; i < result.objective_trace.size(); ++i)
    CHECK(result.objective_trace[i] <= result.objective_trace[i - 1] + 1e-12);

  // independent reimplementation of one S -> A -> W cycle from the same start
  Eigen::MatrixXd Y = synth.corpus.term_matrix.to_dense();
  Eigen::MatrixXd X = feature_cols(synth.corpus.features[0]);
  auto [A, S] = svd_init(Y, hp.k);
  Eigen::MatrixXd W = (X * X.transpose() +
                       hp.lambda_w * Eigen::MatrixXd::Identity(5, 5))
                          .ldlt()
                          .solve(X * S.transpose());
  const Eigen::Index k = 3;
  for (int it = 0; it < 50; ++it) {
    Eigen::MatrixXd lhs = A.transpose() * A +
                          (1.0 + hp.lambda_s) * Eigen::MatrixXd::Identity(k, k);
    S = lhs.ldlt().solve(A.transpose() * Y + W.transpose() * X);
    A = (S * S.transpose() + hp.lambda_a * Eigen::MatrixXd::Identity(k, k))
            .ldlt()
            .solve(S * Y.transpose())
            .transpose();
    W = (X * X.transpose() + hp.lambda_w * Eigen::MatrixXd::Identity(5, 5))
            .ldlt()
            .solve(X * S.transpose());
  }
  const double mine = total_objective(A, W, S, Y, X, hp);
  CHECK(result.objective_trace.back() == doctest::Approx(mine).epsilon(1e-10));

  // restarting from the optimum terminates immediately
  CHECK(result.objective_trace.back() <= result.objective_trace.front());
}

TEST_CASE("finite differences: basics and step-halving consistency") {
  auto constant = [](const Eigen::VectorXd&) { return 4.2; };
  Eigen::VectorXd p = random_matrix(5, 1, 20);
  CHECK(oracle::finite_difference_grad(constant, p, 1e-6).norm() == 0.0);

  auto quad = [](const Eigen::VectorXd& v) { return 0.5 * v.squaredNorm(); };
  Eigen::VectorXd x3(1);
  x3 << 3.0;
  auto g = oracle::finite_difference_grad(quad, x3, 1e-6);
  CHECK(g(0) == doctest::Approx(3.0).epsilon(1e-9));

  // smooth non-quadratic: h and h/2 agree to O(h^2)
  auto f = [](const Eigen::VectorXd& v) { return std::exp(v(0)) + std::sin(v(1)); };
  Eigen::VectorXd pt(2);
  pt << 0.3, -0.7;
  auto gh = oracle::finite_difference_grad(f, pt, 1e-4);
  auto gh2 = oracle::finite_difference_grad(f, pt, 5e-5);
  CHECK((gh - gh2).norm() <= 1e-8);

  CHECK_THROWS_WITH_AS(oracle::finite_difference_grad(quad, x3, 0.0),
                       doctest::Contains("BadParam"), Error);
  auto nanf = [](const Eigen::VectorXd&) {
    return std::numeric_limits<double>::quiet_NaN();
  };
  CHECK_THROWS_WITH_AS(oracle::finite_difference_grad(nanf, x3, 1e-6),
                       doctest::Contains("NonFinite"), Error);
}

TEST_CASE("finite differences validate the analytic per-sample gradient") {
  Hyperparams hp;
  hp.k = 3;
  hp.lambda_a = 0.01;
  hp.lambda_s = 0.02;
  hp.lambda_w = 0.03;
  Eigen::MatrixXd A = random_matrix(5, 3, 30);
  Eigen::MatrixXd W = random_matrix(4, 3, 31);
  Eigen::VectorXd s = random_matrix(3, 1, 32);
  Eigen::VectorXd x = random_matrix(4, 1, 33);
  Eigen::VectorXd y = (random_matrix(5, 1, 34).array() > 0).cast<double>();

  auto g = sample_gradients(A, W, s, x, y, hp);
  auto obj = [&](const Eigen::VectorXd& flatA) {
    Eigen::MatrixXd Am = Eigen::Map<const Eigen::MatrixXd>(flatA.data(), 5, 3);
    return 0.5 * (y - Am * s).squaredNorm() +
           0.5 * hp.lambda_a * Am.squaredNorm() +
           0.5 * hp.lambda_s * s.squaredNorm() +
           0.5 * (s - W.transpose() * x).squaredNorm() +
           0.5 * hp.lambda_w * W.squaredNorm();
  };
  Eigen::VectorXd flat = Eigen::Map<const Eigen::VectorXd>(A.data(), 15);
  Eigen::VectorXd fd = oracle::finite_difference_grad(obj, flat, 1e-6);
  Eigen::VectorXd an = Eigen::Map<const Eigen::VectorXd>(g.grad_A.data(), 15);
  CHECK((fd - an).norm() / an.norm() <= 1e-6);
}

TEST_CASE("synthetic corpus: reproducibility, shapes, validity") {
  oracle::SynthSpec spec;
  spec.n_videos = 40;
  spec.n_terms = 12;
  spec.dims = {6, 4};
  spec.k_true = 3;
  spec.noise_sigma = 0.1;
  spec.n_events = 2;
  spec.positives_per_event = 5;
  spec.seed = 77;

  auto a = oracle::synth_corpus(spec);
  auto b = oracle::synth_corpus(spec);
  CHECK(a.corpus.video_ids == b.corpus.video_ids);
  CHECK(a.corpus.term_matrix.columns == b.corpus.term_matrix.columns);
  CHECK(a.corpus.features[0].values == b.corpus.features[0].values);
  CHECK(a.corpus.features[1].values == b.corpus.features[1].values);
  CHECK(a.corpus.vocabulary.terms == b.corpus.vocabulary.terms);

  a.corpus.validate();
  CHECK(a.corpus.video_count() == 40);
  CHECK(a.corpus.modality_count() == 2);
  CHECK(a.corpus.features[0].dim() == 6);
  CHECK(a.corpus.features[1].dim() == 4);
  CHECK(a.corpus.vocabulary.size() <= 12);

  REQUIRE(a.events.size() == 2);
  REQUIRE(a.labels.size() == 2);
  for (const auto& ls : a.labels) {
    CHECK(ls.video_ids.size() == 40);
    std::size_t pos = 0;
    for (int l : ls.labels) pos += static_cast<std::size_t>(l);
    CHECK(pos == 5);
  }
  for (const auto& ev : a.events) {
    CHECK(!ev.title.empty());
    CHECK(!ev.definition.empty());
  }

  spec.seed = 78;
  auto c = oracle::synth_corpus(spec);
  CHECK(a.corpus.features[0].values != c.corpus.features[0].values);
}

TEST_CASE("synthetic spec validation") {
  oracle::SynthSpec spec;
  spec.k_true = 50;  // exceeds min(M, D)
  CHECK_THROWS_WITH_AS(spec.validate(), doctest::Contains("BadSpec"), Error);
  spec = {};
  spec.n_events = 1;
  spec.positives_per_event = 0;
  CHECK_THROWS_AS(spec.validate(), Error);
  spec = {};
  spec.noise_sigma = -1.0;
  CHECK_THROWS_AS(spec.validate(), Error);
}

TEST_CASE("noiseless rank-matched corpus is reconstructed by the oracle optimizer") {
  oracle::SynthSpec spec;
  spec.n_videos = 60;
  spec.n_terms = 15;
  spec.dims = {8};
  spec.k_true = 4;
  spec.noise_sigma = 0.0;
  spec.seed = 5;
  auto synth = oracle::synth_corpus(spec);

  Hyperparams hp;
  hp.k = 4;
  hp.lambda_a = 1e-9;
  hp.lambda_s = 1e-9;
  hp.lambda_w = 1e-9;
  auto result = oracle::alternating_minimize(synth.corpus, hp, 500, 1e-14);
  Eigen::MatrixXd Y = synth.corpus.term_matrix.to_dense();
  const double recon = (Y - result.A * result.S).squaredNorm();
  CHECK(recon <= 1e-6 * Y.squaredNorm());
}
