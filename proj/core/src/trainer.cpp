#include "videostory/trainer.hpp"

#include <string>

#include "videostory/errors.hpp"
#include "videostory/rng.hpp"

namespace videostory {

namespace {

double gamma_at(const std::vector<double>& gammas, std::size_t j) {
  return gammas.empty() ? 1.0 : gammas[j];
}

// Fast path shared by the public gradient entry points and the SGD loop.
SampleGradients compute_gradients(const Eigen::MatrixXd& A,
                                  const std::vector<Eigen::MatrixXd>& projections,
                                  const Eigen::VectorXd& s,
                                  const std::vector<Eigen::VectorXd>& xs,
                                  const Eigen::VectorXd& y,
                                  const Eigen::VectorXd& term_weights,
                                  const Hyperparams& hp,
                                  const std::vector<double>& gammas) {
  const Eigen::VectorXd residual_d = y - A * s;
  const Eigen::VectorXd weighted =
      term_weights.size() == 0
          ? residual_d
          : Eigen::VectorXd(term_weights.cwiseProduct(residual_d));

  SampleGradients g;
  g.grad_A = -weighted * s.transpose() + hp.lambda_a * A;
  g.grad_s = -A.transpose() * weighted + hp.lambda_s * s;
  g.grad_W.reserve(projections.size());
  for (std::size_t j = 0; j < projections.size(); ++j) {
    const Eigen::VectorXd residual_p = s - projections[j].transpose() * xs[j];
    const double gamma = gamma_at(gammas, j);
    g.grad_W.push_back(gamma *
                       (-xs[j] * residual_p.transpose() + hp.lambda_w * projections[j]));
    g.grad_s += gamma * residual_p;
  }
  return g;
}

}  // namespace

SampleGradients sample_gradients_core(
    const Eigen::MatrixXd& A, const std::vector<Eigen::MatrixXd>& projections,
    const Eigen::VectorXd& s, const std::vector<Eigen::VectorXd>& xs,
    const Eigen::VectorXd& y, const Eigen::VectorXd& term_weights,
    const Hyperparams& hp, const std::vector<double>& gammas) {
  if (projections.size() != xs.size())
    throw Error("ShapeMismatch", "projection count differs from feature count");
  if (!gammas.empty() && gammas.size() != projections.size())
    throw Error("ShapeMismatch", "gamma count differs from modality count");
  if (A.cols() != s.size() || A.rows() != y.size())
    throw Error("ShapeMismatch", "A is inconsistent with s or y");
  if (term_weights.size() != 0 && term_weights.size() != y.size())
    throw Error("ShapeMismatch", "term weight length differs from vocabulary size");
  for (std::size_t j = 0; j < projections.size(); ++j) {
    if (projections[j].rows() != xs[j].size() || projections[j].cols() != s.size())
      throw Error("ShapeMismatch",
                  "projection " + std::to_string(j) + " is inconsistent with its feature");
    if (!xs[j].allFinite())
      throw Error("NonFinite", "feature vector " + std::to_string(j) + " is non-finite");
  }
  if (!A.allFinite() || !s.allFinite() || !y.allFinite())
    throw Error("NonFinite", "gradient inputs contain non-finite values");
  return compute_gradients(A, projections, s, xs, y, term_weights, hp, gammas);
}

TrainState init_train_state(const Corpus& corpus, const Hyperparams& hp,
                            std::mt19937_64& gen) {
  TrainState state;
  auto [A, S] = svd_init(corpus.term_matrix, hp.k);
  state.A = std::move(A);
  state.S = std::move(S);
  state.W.reserve(corpus.modality_count());
  for (const auto& fm : corpus.features) {
    const auto d = static_cast<Eigen::Index>(fm.dim());
    const auto ki = static_cast<Eigen::Index>(hp.k);
    const double sigma = 1.0 / std::sqrt(static_cast<double>(d));
    Eigen::MatrixXd W(d, ki);
    for (Eigen::Index r = 0; r < d; ++r)
      for (Eigen::Index c = 0; c < ki; ++c) W(r, c) = sigma * gaussian(gen);
    state.W.push_back(std::move(W));
  }
  return state;
}

void run_sgd(TrainState& state, const Corpus& corpus, const Hyperparams& hp,
             const std::vector<double>& gammas,
             const Eigen::VectorXd& term_weights, std::size_t epochs,
             std::mt19937_64& gen) {
  const std::size_t n = corpus.video_count();
  if (n == 0) throw Error("EmptyCorpus", "cannot train on an empty corpus");
  const std::size_t j_count = corpus.modality_count();
  std::vector<Eigen::VectorXd> xs(j_count);

  for (std::size_t e = 0; e < epochs; ++e) {
    const auto perm = random_permutation(n, gen);
    for (std::size_t idx : perm) {
      const double eta_t = hp.step_size(state.step);
      const Eigen::VectorXd s = state.S.col(static_cast<Eigen::Index>(idx));
      const Eigen::VectorXd y = corpus.term_matrix.column_dense(idx);
      for (std::size_t j = 0; j < j_count; ++j)
        xs[j] = corpus.features[j].values.row(static_cast<Eigen::Index>(idx)).transpose();

      const SampleGradients g =
          compute_gradients(state.A, state.W, s, xs, y, term_weights, hp, gammas);

      state.A -= eta_t * g.grad_A;
      for (std::size_t j = 0; j < j_count; ++j) state.W[j] -= eta_t * g.grad_W[j];
      state.S.col(static_cast<Eigen::Index>(idx)) -= eta_t * g.grad_s;

      bool finite = state.A.allFinite() &&
                    state.S.col(static_cast<Eigen::Index>(idx)).allFinite();
      for (std::size_t j = 0; finite && j < j_count; ++j)
        finite = state.W[j].allFinite();
      if (!finite)
        throw Error("Diverged", "non-finite parameters at epoch " +
                                    std::to_string(state.epoch) + ", step " +
                                    std::to_string(state.step));
      ++state.step;
    }
    ++state.epoch;
  }
}

}  // namespace videostory
