#include "videostory/zeroshot.hpp"

#include <algorithm>
#include <random>
#include <set>

#include "videostory/errors.hpp"
#include "videostory/model_io.hpp"
#include "videostory/threading.hpp"
#include "videostory/trainer.hpp"

namespace videostory {

namespace {

std::set<std::uint32_t> event_term_indices(const EventDefinition& event,
                                           const TermVocabulary& vocab) {
  std::set<std::uint32_t> indices;
  for (const auto& tok : tokenize(event.title + " " + event.definition))
    if (auto idx = vocab.find(tok)) indices.insert(*idx);
  return indices;
}

}  // namespace

ImportanceMatrix build_importance(const EventDefinition& event,
                                  const TermVocabulary& vocab, double alpha) {
  if (!(alpha > 0.5 && alpha < 1.0))
    throw Error("BadAlpha", "alpha must lie strictly in (0.5, 1)");
  ImportanceMatrix importance;
  importance.event_id = event.event_id;
  importance.alpha = alpha;
  importance.weights =
      Eigen::VectorXd::Constant(static_cast<Eigen::Index>(vocab.size()), 1.0 - alpha);
  for (std::uint32_t idx : event_term_indices(event, vocab))
    importance.weights(idx) = alpha;
  return importance;
}

double term_sensitive_loss(const Eigen::MatrixXd& A, const Eigen::MatrixXd& S,
                           const Eigen::MatrixXd& Y,
                           const Eigen::VectorXd& weights, double lambda_a,
                           double lambda_s) {
  if (A.cols() != S.rows() || A.rows() != Y.rows() || S.cols() != Y.cols())
    throw Error("ShapeMismatch", "term_sensitive_loss shapes are inconsistent");
  if (weights.size() != Y.rows())
    throw Error("ShapeMismatch", "weight length differs from term count");
  if ((weights.array() < 0.0).any())
    throw Error("BadWeight", "importance weights must be >= 0");
  // unit weights reduce exactly to the unweighted loss
  if ((weights.array() == 1.0).all())
    return descriptiveness_loss(A, S, Y, lambda_a, lambda_s);
  const Eigen::MatrixXd residual = Y - A * S;
  // ||H^{1/2} r||^2 = sum_j h_jj r_j^2
  const double recon =
      0.5 * (weights.asDiagonal() * residual.cwiseProduct(residual)).sum();
  return recon + lambda_a * 0.5 * A.squaredNorm() + lambda_s * 0.5 * S.squaredNorm();
}

SampleGradients sample_gradients_ts(const Eigen::MatrixXd& A,
                                    const std::vector<Eigen::MatrixXd>& projections,
                                    const Eigen::VectorXd& s,
                                    const std::vector<Eigen::VectorXd>& xs,
                                    const Eigen::VectorXd& y,
                                    const Eigen::VectorXd& weights,
                                    const Hyperparams& hp,
                                    const std::vector<double>& gammas) {
  if (weights.size() != 0 && (weights.array() < 0.0).any())
    throw Error("BadWeight", "importance weights must be >= 0");
  return sample_gradients_core(A, projections, s, xs, y, weights, hp, gammas);
}

std::pair<MultimodalModel, ImportanceMatrix> train_zero(
    const Corpus& corpus_train, const Hyperparams& hp,
    const EventDefinition& event, const std::vector<double>& gammas,
    double alpha) {
  hp.validate();
  corpus_train.validate();
  const ImportanceMatrix importance =
      build_importance(event, corpus_train.vocabulary, alpha);

  std::mt19937_64 gen(hp.seed);
  TrainState state = init_train_state(corpus_train, hp, gen);
  run_sgd(state, corpus_train, hp, gammas, importance.weights, hp.epochs, gen);

  MultimodalModel model;
  model.A = std::move(state.A);
  model.projections = std::move(state.W);
  for (const auto& fm : corpus_train.features) model.modalities.push_back(fm.modality);
  model.gammas = gammas.empty()
                     ? std::vector<double>(corpus_train.modality_count(), 1.0)
                     : gammas;
  model.vocab_fingerprint = vocabulary_fingerprint(corpus_train.vocabulary);
  model.hyperparams = hp;
  model.alpha = alpha;
  return {std::move(model), importance};
}

EventQuery build_event_query(const EventDefinition& event,
                             const TermVocabulary& vocab) {
  EventQuery query;
  query.event_id = event.event_id;
  query.y = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(vocab.size()));
  for (std::uint32_t idx : event_term_indices(event, vocab)) query.y(idx) = 1.0;
  if (query.y.sum() == 0.0)
    throw Error("EmptyQuery", "no event term matches the vocabulary");
  return query;
}

Ranking cosine_rank(const MultimodalModel& model, const EventQuery& query,
                    const Corpus& corpus_test, int threads) {
  if (query.y.size() != model.A.rows())
    throw Error("ShapeMismatch", "query length differs from vocabulary size");
  const double query_norm = query.y.norm();
  if (query_norm == 0.0) throw Error("EmptyQuery", "query vector is all-zero");
  if (corpus_test.modality_count() != model.projections.size())
    throw Error("ShapeMismatch", "corpus modality count differs from model");

  const std::size_t n = corpus_test.video_count();
  std::vector<double> scores(n);
  parallel_for(n, threads, [&](std::size_t i) {
    std::vector<Eigen::VectorXd> xs;
    xs.reserve(corpus_test.modality_count());
    for (const auto& fm : corpus_test.features)
      xs.push_back(fm.values.row(static_cast<Eigen::Index>(i)).transpose());
    const Eigen::VectorXd predicted = model.A * shared_embedding(model, xs);
    const double norm = predicted.norm();
    scores[i] = norm == 0.0 ? 0.0 : query.y.dot(predicted) / (query_norm * norm);
  });

  Ranking ranking;
  ranking.event_id = query.event_id;
  ranking.entries.reserve(n);
  for (std::size_t i = 0; i < n; ++i)
    ranking.entries.push_back({corpus_test.video_ids[i], scores[i]});
  std::sort(ranking.entries.begin(), ranking.entries.end(),
            [](const RankEntry& a, const RankEntry& b) {
              if (a.score != b.score) return a.score > b.score;
              return a.video_id < b.video_id;
            });
  return ranking;
}

}  // namespace videostory
