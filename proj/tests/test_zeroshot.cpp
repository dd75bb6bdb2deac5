#include <doctest.h>

#include <random>

#include "videostory/embedding.hpp"
#include "videostory/errors.hpp"
#include "videostory/rng.hpp"
#include "videostory/zeroshot.hpp"

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

TermVocabulary vocab_of(const std::vector<std::string>& terms) {
  TermVocabulary vocab;
  for (const auto& t : terms) {
    vocab.index[t] = static_cast<std::uint32_t>(vocab.terms.size());
    vocab.terms.push_back(t);
    vocab.counts.push_back(1);
  }
  return vocab;
}

Corpus small_corpus(std::size_t n, std::size_t m, std::size_t d,
                    std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  std::vector<std::string> names;
  for (std::size_t t = 0; t < m; ++t) names.push_back("t" + std::to_string(t));
  TermVocabulary vocab = vocab_of(names);
  TermMatrix tm;
  tm.term_count = m;
  tm.columns.resize(n);
  for (auto& col : tm.columns)
    for (std::uint32_t t = 0; t < m; ++t)
      if (uniform01(gen) < 0.3) col.push_back(t);
  FeatureMatrix fm;
  fm.modality = "vis";
  fm.values.resize(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(d));
  for (Eigen::Index r = 0; r < fm.values.rows(); ++r)
    for (Eigen::Index c = 0; c < fm.values.cols(); ++c)
      fm.values(r, c) = gaussian(gen);
  for (std::size_t i = 0; i < n; ++i)
    fm.video_ids.push_back("v" + std::to_string(i));
  Corpus corpus;
  corpus.vocabulary = std::move(vocab);
  corpus.term_matrix = std::move(tm);
  corpus.video_ids = fm.video_ids;
  corpus.features = {std::move(fm)};
  corpus.validate();
  return corpus;
}

}  // namespace

TEST_CASE("build_importance weights present vs absent terms") {
  auto vocab = vocab_of({"race", "vehicle", "cake"});
  EventDefinition ev{"e1", "Vehicle race", "winning a race"};
  auto imp = build_importance(ev, vocab, 0.75);
  CHECK(imp.weights(vocab.index.at("race")) == 0.75);
  CHECK(imp.weights(vocab.index.at("vehicle")) == 0.75);
  CHECK(imp.weights(vocab.index.at("cake")) == 0.25);

  // alpha near 0.5: all weights nearly equal
  auto imp2 = build_importance(ev, vocab, 0.5 + 1e-9);
  CHECK(imp2.weights.maxCoeff() - imp2.weights.minCoeff() ==
        doctest::Approx(2e-9).epsilon(1e-3));

  CHECK_THROWS_WITH_AS(build_importance(ev, vocab, 0.5),
                       doctest::Contains("BadAlpha"), Error);
  CHECK_THROWS_WITH_AS(build_importance(ev, vocab, 1.0),
                       doctest::Contains("BadAlpha"), Error);

  // zero overlap: still valid, all entries 1 - alpha
  EventDefinition oov{"e2", "Juggling", "tossing pins"};
  auto imp3 = build_importance(oov, vocab, 0.75);
  CHECK(imp3.weights.minCoeff() == 0.25);
  CHECK(imp3.weights.maxCoeff() == 0.25);
}

TEST_CASE("term_sensitive_loss reductions and oracle") {
  Eigen::MatrixXd A = random_matrix(5, 3, 1);
  Eigen::MatrixXd S = random_matrix(3, 7, 2);
  Eigen::MatrixXd Y = (random_matrix(5, 7, 3).array() > 0).cast<double>();
  const double la = 0.03, ls = 0.07;

  Eigen::VectorXd ones = Eigen::VectorXd::Ones(5);
  CHECK(term_sensitive_loss(A, S, Y, ones, la, ls) ==
        descriptiveness_loss(A, S, Y, la, ls));

  // H = 0.5 I with no regularizers: half the reconstruction term
  Eigen::VectorXd half = 0.5 * ones;
  CHECK(term_sensitive_loss(A, S, Y, half, 0, 0) ==
        doctest::Approx(0.5 * descriptiveness_loss(A, S, Y, 0, 0)).epsilon(1e-14));

  // independent evaluation via explicit H^{1/2}
  Eigen::VectorXd w(5);
  w << 0.75, 0.25, 0.25, 0.75, 0.25;
  Eigen::MatrixXd R = w.array().sqrt().matrix().asDiagonal() * (Y - A * S);
  const double want = 0.5 * R.squaredNorm() + 0.5 * la * A.squaredNorm() +
                      0.5 * ls * S.squaredNorm();
  CHECK(term_sensitive_loss(A, S, Y, w, la, ls) ==
        doctest::Approx(want).epsilon(1e-13));

  Eigen::VectorXd bad = w;
  bad(2) = -0.1;
  CHECK_THROWS_WITH_AS(term_sensitive_loss(A, S, Y, bad, la, ls),
                       doctest::Contains("BadWeight"), Error);
}

TEST_CASE("term-sensitive gradients: reductions and finite differences") {
  Hyperparams hp;
  hp.k = 3;
  hp.lambda_a = 0.02;
  hp.lambda_s = 0.04;
  hp.lambda_w = 0.01;
  const Eigen::Index M = 6, k = 3;
  Eigen::MatrixXd A = random_matrix(M, k, 10);
  std::vector<Eigen::MatrixXd> Ws = {random_matrix(4, k, 11), random_matrix(3, k, 12)};
  std::vector<Eigen::VectorXd> xs = {random_matrix(4, 1, 13), random_matrix(3, 1, 14)};
  Eigen::VectorXd s = random_matrix(k, 1, 15);
  Eigen::VectorXd y = (random_matrix(M, 1, 16).array() > 0).cast<double>();
  std::vector<double> gammas = {0.8, 1.3};

  SUBCASE("H = I reduces to the fused gradients bitwise") {
    Eigen::VectorXd ones = Eigen::VectorXd::Ones(M);
    auto ts = sample_gradients_ts(A, Ws, s, xs, y, ones, hp, gammas);
    auto fused = sample_gradients_fused(A, Ws, s, xs, y, hp, gammas);
    CHECK(ts.grad_A == fused.grad_A);
    CHECK(ts.grad_s == fused.grad_s);
    CHECK(ts.grad_W == fused.grad_W);
  }

  SUBCASE("H = 0 drops the descriptive contribution") {
    Eigen::VectorXd zeros = Eigen::VectorXd::Zero(M);
    auto ts = sample_gradients_ts(A, Ws, s, xs, y, zeros, hp, gammas);
    CHECK(ts.grad_A == hp.lambda_a * A);
    Eigen::VectorXd want = hp.lambda_s * s;
    for (std::size_t j = 0; j < Ws.size(); ++j)
      want += gammas[j] * (s - Ws[j].transpose() * xs[j]);
    CHECK((ts.grad_s - want).norm() == doctest::Approx(0.0).epsilon(1e-14));
  }

  SUBCASE("random weights match central finite differences") {
    Eigen::VectorXd w(M);
    w << 0.9, 0.1, 0.9, 0.1, 0.1, 0.9;
    auto g = sample_gradients_ts(A, Ws, s, xs, y, w, hp, gammas);

    auto loss = [&](const Eigen::MatrixXd& Am,
                    const std::vector<Eigen::MatrixXd>& Wm,
                    const Eigen::VectorXd& sv) {
      const Eigen::VectorXd r = y - Am * sv;
      double out = 0.5 * (w.array() * r.array().square()).sum() +
                   0.5 * hp.lambda_a * Am.squaredNorm() +
                   0.5 * hp.lambda_s * sv.squaredNorm();
      for (std::size_t j = 0; j < Wm.size(); ++j)
        out += gammas[j] *
               (0.5 * (sv - Wm[j].transpose() * xs[j]).squaredNorm() +
                0.5 * hp.lambda_w * Wm[j].squaredNorm());
      return out;
    };

    const double h = 1e-6;
    for (Eigen::Index r = 0; r < M; ++r)
      for (Eigen::Index c = 0; c < k; ++c) {
        Eigen::MatrixXd Ap = A, An = A;
        Ap(r, c) += h;
        An(r, c) -= h;
        CHECK(g.grad_A(r, c) ==
              doctest::Approx((loss(Ap, Ws, s) - loss(An, Ws, s)) / (2 * h))
                  .epsilon(1e-5));
      }
    for (Eigen::Index c = 0; c < k; ++c) {
      Eigen::VectorXd sp = s, sn = s;
      sp(c) += h;
      sn(c) -= h;
      CHECK(g.grad_s(c) ==
            doctest::Approx((loss(A, Ws, sp) - loss(A, Ws, sn)) / (2 * h))
                .epsilon(1e-5));
    }
  }
}

TEST_CASE("train_zero determinism and alpha sensitivity") {
  Corpus corpus = small_corpus(25, 8, 5, 3);
  EventDefinition ev{"e1", "t0 t3", "features t1"};
  Hyperparams hp;
  hp.k = 3;
  hp.epochs = 3;
  hp.eta = 0.02;

  auto [m1, imp1] = train_zero(corpus, hp, ev);
  auto [m2, imp2] = train_zero(corpus, hp, ev);
  CHECK(m1.A == m2.A);
  CHECK(m1.projections == m2.projections);
  CHECK(imp1.weights == imp2.weights);
  CHECK(m1.alpha == 0.75);

  auto [m3, imp3] = train_zero(corpus, hp, ev, {}, 0.9);
  CHECK(m1.A != m3.A);
  CHECK(imp3.weights.maxCoeff() == 0.9);
}

TEST_CASE("build_event_query binary matching") {
  auto vocab = vocab_of({"race", "vehicle"});
  EventDefinition ev{"e", "", "winning a race without a vehicle"};
  auto q = build_event_query(ev, vocab);
  CHECK(q.y == Eigen::VectorXd::Ones(2));

  // duplicates stay binary
  EventDefinition dup{"e", "race race", "race vehicle race"};
  CHECK(build_event_query(dup, vocab).y == q.y);

  EventDefinition oov{"e", "juggling", "tossing pins"};
  CHECK_THROWS_WITH_AS(build_event_query(oov, vocab),
                       doctest::Contains("EmptyQuery"), Error);
}

TEST_CASE("cosine scores: parallel, orthogonal, hand value, zero norm") {
  // 3 terms, k = 3, A = I, W = I: prediction y_hat = x directly
  MultimodalModel model;
  model.A = Eigen::MatrixXd::Identity(3, 3);
  model.projections = {Eigen::MatrixXd::Identity(3, 3)};
  model.modalities = {"vis"};
  model.gammas = {1.0};

  Corpus corpus = small_corpus(4, 3, 3, 0);
  corpus.features[0].values.row(0) << 2, 2, 0;  // parallel to query
  corpus.features[0].values.row(1) << 0, 0, 5;  // orthogonal
  corpus.features[0].values.row(2) << 1, 0, 0;  // 1/sqrt(2)
  corpus.features[0].values.row(3) << 0, 0, 0;  // zero prediction

  EventQuery query{"e", Eigen::VectorXd(3)};
  query.y << 1, 1, 0;

  auto ranking = cosine_rank(model, query, corpus);
  REQUIRE(ranking.entries.size() == 4);
  CHECK(ranking.entries[0].video_id == "v0");
  CHECK(ranking.entries[0].score == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(ranking.entries[1].video_id == "v2");
  CHECK(ranking.entries[1].score == doctest::Approx(1.0 / std::sqrt(2.0)));
  // v1 (orthogonal) and v3 (zero norm) both score 0; tie broken by id
  CHECK(ranking.entries[2].video_id == "v1");
  CHECK(ranking.entries[2].score == 0.0);
  CHECK(ranking.entries[3].video_id == "v3");
  CHECK(ranking.entries[3].score == 0.0);

  for (const auto& e : ranking.entries) {
    CHECK(e.score <= 1.0);
    CHECK(e.score >= -1.0);
  }
}

TEST_CASE("ranking is invariant to positive feature scaling") {
  Corpus corpus = small_corpus(20, 8, 5, 17);
  Hyperparams hp;
  hp.k = 3;
  hp.epochs = 2;
  hp.eta = 0.02;
  EventDefinition ev{"e1", "t0", "t1 t2"};
  auto [model, imp] = train_zero(corpus, hp, ev);
  auto query = build_event_query(ev, corpus.vocabulary);

  auto r1 = cosine_rank(model, query, corpus);
  Corpus scaled = corpus;
  scaled.features[0].values *= 37.5;
  auto r2 = cosine_rank(model, query, scaled);
  REQUIRE(r1.entries.size() == r2.entries.size());
  for (std::size_t i = 0; i < r1.entries.size(); ++i) {
    CHECK(r1.entries[i].video_id == r2.entries[i].video_id);
    CHECK(r1.entries[i].score ==
          doctest::Approx(r2.entries[i].score).epsilon(1e-12));
  }
}

TEST_CASE("cosine_rank matches a brute-force recomputation") {
  Corpus corpus = small_corpus(30, 10, 6, 23);
  Hyperparams hp;
  hp.k = 4;
  hp.epochs = 2;
  hp.eta = 0.02;
  EventDefinition ev{"e1", "t1 t4", "t7"};
  auto [model, imp] = train_zero(corpus, hp, ev);
  auto query = build_event_query(ev, corpus.vocabulary);

  auto ranking = cosine_rank(model, query, corpus, 4);

  // brute force, no shortcuts
  std::vector<std::pair<std::string, double>> scored;
  const double qn = query.y.norm();
  for (std::size_t i = 0; i < corpus.video_count(); ++i) {
    Eigen::VectorXd x = corpus.features[0].values.row(static_cast<Eigen::Index>(i));
    Eigen::VectorXd yhat = model.A * (model.projections[0].transpose() * x);
    const double n = yhat.norm();
    scored.emplace_back(corpus.video_ids[i],
                        n == 0.0 ? 0.0 : query.y.dot(yhat) / (qn * n));
  }
  std::sort(scored.begin(), scored.end(), [](const auto& a, const auto& b) {
    if (a.second != b.second) return a.second > b.second;
    return a.first < b.first;
  });
  REQUIRE(ranking.entries.size() == scored.size());
  for (std::size_t i = 0; i < scored.size(); ++i) {
    CHECK(ranking.entries[i].video_id == scored[i].first);
    CHECK(ranking.entries[i].score == scored[i].second);
  }

  // thread count does not change the result
  auto r1 = cosine_rank(model, query, corpus, 1);
  for (std::size_t i = 0; i < scored.size(); ++i) {
    CHECK(r1.entries[i].video_id == ranking.entries[i].video_id);
    CHECK(r1.entries[i].score == ranking.entries[i].score);
  }
}
