#include "videostory/embedding.hpp"

#include <Eigen/SVD>
#include <algorithm>
#include <numeric>
#include <random>

#include "videostory/errors.hpp"
#include "videostory/model_io.hpp"
#include "videostory/trainer.hpp"

namespace videostory {

void Hyperparams::validate() const {
  if (k < 1) throw Error("BadParam", "k must be >= 1");
  if (lambda_a < 0 || lambda_s < 0 || lambda_w < 0)
    throw Error("BadParam", "regularizer coefficients must be >= 0");
  if (!(eta >= 0)) throw Error("BadParam", "eta must be >= 0");
  if (epochs < 1) throw Error("BadParam", "epochs must be >= 1");
  if (schedule == StepSchedule::InverseDecay && decay_rate < 0)
    throw Error("BadParam", "decay_rate must be >= 0");
}

Eigen::MatrixXd feature_cols(const FeatureMatrix& fm) {
  return fm.values.transpose();
}

std::pair<Eigen::MatrixXd, Eigen::MatrixXd> svd_init(const Eigen::MatrixXd& Y,
                                                     std::size_t k) {
  const auto m = Y.rows();
  const auto n = Y.cols();
  if (static_cast<Eigen::Index>(k) > std::min(m, n))
    throw Error("RankTooLarge", "k exceeds min(M, N)");

  Eigen::BDCSVD<Eigen::MatrixXd> svd(Y, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto ki = static_cast<Eigen::Index>(k);
  const Eigen::VectorXd root = svd.singularValues().head(ki).cwiseSqrt();
  Eigen::MatrixXd A = svd.matrixU().leftCols(ki) * root.asDiagonal();
  Eigen::MatrixXd S = root.asDiagonal() * svd.matrixV().leftCols(ki).transpose();
  return {std::move(A), std::move(S)};
}

std::pair<Eigen::MatrixXd, Eigen::MatrixXd> svd_init(const TermMatrix& Y,
                                                     std::size_t k) {
  return svd_init(Y.to_dense(), k);
}

double descriptiveness_loss(const Eigen::MatrixXd& A, const Eigen::MatrixXd& S,
                            const Eigen::MatrixXd& Y, double lambda_a,
                            double lambda_s) {
  if (A.cols() != S.rows() || A.rows() != Y.rows() || S.cols() != Y.cols())
    throw Error("ShapeMismatch", "descriptiveness_loss shapes are inconsistent");
  const double recon = 0.5 * (Y - A * S).squaredNorm();
  return recon + lambda_a * 0.5 * A.squaredNorm() + lambda_s * 0.5 * S.squaredNorm();
}

double predictability_loss(const Eigen::MatrixXd& S, const Eigen::MatrixXd& W,
                           const Eigen::MatrixXd& X, double lambda_w) {
  if (W.rows() != X.rows() || W.cols() != S.rows() || S.cols() != X.cols())
    throw Error("ShapeMismatch", "predictability_loss shapes are inconsistent");
  const double recon = 0.5 * (S - W.transpose() * X).squaredNorm();
  return recon + lambda_w * 0.5 * W.squaredNorm();
}

double total_objective(const Eigen::MatrixXd& A, const Eigen::MatrixXd& W,
                       const Eigen::MatrixXd& S, const Eigen::MatrixXd& Y,
                       const Eigen::MatrixXd& X, const Hyperparams& hp) {
  return descriptiveness_loss(A, S, Y, hp.lambda_a, hp.lambda_s) +
         predictability_loss(S, W, X, hp.lambda_w);
}

SampleGradients sample_gradients(const Eigen::MatrixXd& A,
                                 const Eigen::MatrixXd& W,
                                 const Eigen::VectorXd& s,
                                 const Eigen::VectorXd& x,
                                 const Eigen::VectorXd& y,
                                 const Hyperparams& hp) {
  return sample_gradients_core(A, {W}, s, {x}, y, Eigen::VectorXd(), hp, {});
}

EmbeddingModel sgd_train(const Corpus& corpus_train, const Hyperparams& hp,
                         std::size_t modality_index) {
  hp.validate();
  if (modality_index >= corpus_train.modality_count())
    throw Error("BadParam", "modality index out of range");
  const Corpus single = select_modality(corpus_train, modality_index);

  std::mt19937_64 gen(hp.seed);
  TrainState state = init_train_state(single, hp, gen);
  run_sgd(state, single, hp, {}, Eigen::VectorXd(), hp.epochs, gen);

  EmbeddingModel model;
  model.A = std::move(state.A);
  model.W = std::move(state.W[0]);
  model.vocab_fingerprint = vocabulary_fingerprint(corpus_train.vocabulary);
  model.hyperparams = hp;
  return model;
}

double validation_objective(const EmbeddingModel& model, const Corpus& corpus_val,
                            std::size_t modality_index) {
  if (modality_index >= corpus_val.modality_count())
    throw Error("BadParam", "modality index out of range");
  const Eigen::MatrixXd X = feature_cols(corpus_val.features[modality_index]);
  if (model.W.rows() != X.rows())
    throw Error("ShapeMismatch", "model W dimensionality differs from features");
  const Eigen::MatrixXd Y = corpus_val.term_matrix.to_dense();
  if (model.A.rows() != Y.rows())
    throw Error("ShapeMismatch", "model A row count differs from vocabulary size");
  const Eigen::MatrixXd S = model.W.transpose() * X;
  return total_objective(model.A, model.W, S, Y, X, model.hyperparams);
}

Eigen::VectorXd embed(const EmbeddingModel& model, const Eigen::VectorXd& x) {
  if (x.size() != model.W.rows())
    throw Error("ShapeMismatch", "feature vector length differs from W rows");
  return model.W.transpose() * x;
}

Eigen::VectorXd predict_terms(const Eigen::MatrixXd& A, const Eigen::VectorXd& s) {
  if (s.size() != A.cols())
    throw Error("ShapeMismatch", "embedding length differs from A columns");
  return A * s;
}

Eigen::VectorXd predict_terms(const EmbeddingModel& model, const Eigen::VectorXd& s) {
  return predict_terms(model.A, s);
}

std::vector<std::uint32_t> top_terms(const Eigen::VectorXd& term_scores,
                                     std::size_t n) {
  std::vector<std::uint32_t> order(static_cast<std::size_t>(term_scores.size()));
  std::iota(order.begin(), order.end(), 0u);
  std::stable_sort(order.begin(), order.end(), [&](std::uint32_t a, std::uint32_t b) {
    return term_scores(a) > term_scores(b);
  });
  order.resize(std::min(n, order.size()));
  return order;
}

}  // namespace videostory
