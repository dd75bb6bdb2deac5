#ifndef VIDEOSTORY_EMBEDDING_HPP
#define VIDEOSTORY_EMBEDDING_HPP

#include <Eigen/Dense>
#include <array>
#include <cstdint>
#include <utility>
#include <vector>

#include "videostory/corpus.hpp"

namespace videostory {

enum class StepSchedule { Constant, InverseDecay };

struct Hyperparams {
  std::size_t k = 2048;
  double lambda_a = 1e-3;
  double lambda_s = 1e-3;
  double lambda_w = 1e-3;
  double eta = 0.01;
  std::size_t epochs = 10;
  std::uint64_t seed = 0;
  StepSchedule schedule = StepSchedule::Constant;
  double decay_rate = 0.0;  // eta_t = eta / (1 + decay_rate * t)

  double step_size(std::size_t t) const {
    if (schedule == StepSchedule::Constant) return eta;
    return eta / (1.0 + decay_rate * static_cast<double>(t));
  }
  void validate() const;  // throws BadParam
};

struct EmbeddingModel {
  Eigen::MatrixXd A;  // M x k textual projection
  Eigen::MatrixXd W;  // D x k feature projection
  std::array<unsigned char, 32> vocab_fingerprint{};
  Hyperparams hyperparams;
};

// Balanced truncated SVD factors: A = U_k sqrt(Sigma_k), S = sqrt(Sigma_k) V_k^T.
std::pair<Eigen::MatrixXd, Eigen::MatrixXd> svd_init(const Eigen::MatrixXd& Y,
                                                     std::size_t k);
std::pair<Eigen::MatrixXd, Eigen::MatrixXd> svd_init(const TermMatrix& Y,
                                                     std::size_t k);

// 1/2 sum_i ||y_i - A s_i||^2 + lambda_a/2 ||A||_F^2 + lambda_s/2 ||S||_F^2
double descriptiveness_loss(const Eigen::MatrixXd& A, const Eigen::MatrixXd& S,
                            const Eigen::MatrixXd& Y, double lambda_a,
                            double lambda_s);

// 1/2 sum_i ||s_i - W^T x_i||^2 + lambda_w/2 ||W||_F^2, X is D x N
double predictability_loss(const Eigen::MatrixXd& S, const Eigen::MatrixXd& W,
                           const Eigen::MatrixXd& X, double lambda_w);

double total_objective(const Eigen::MatrixXd& A, const Eigen::MatrixXd& W,
                       const Eigen::MatrixXd& S, const Eigen::MatrixXd& Y,
                       const Eigen::MatrixXd& X, const Hyperparams& hp);

struct SampleGradients {
  Eigen::MatrixXd grad_A;
  std::vector<Eigen::MatrixXd> grad_W;  // one per modality
  Eigen::VectorXd grad_s;
};

SampleGradients sample_gradients(const Eigen::MatrixXd& A,
                                 const Eigen::MatrixXd& W,
                                 const Eigen::VectorXd& s,
                                 const Eigen::VectorXd& x,
                                 const Eigen::VectorXd& y,
                                 const Hyperparams& hp);

EmbeddingModel sgd_train(const Corpus& corpus_train, const Hyperparams& hp,
                         std::size_t modality_index = 0);

// Objective on held-out data with S = W^T X.
double validation_objective(const EmbeddingModel& model, const Corpus& corpus_val,
                            std::size_t modality_index = 0);

Eigen::VectorXd embed(const EmbeddingModel& model, const Eigen::VectorXd& x);

Eigen::VectorXd predict_terms(const Eigen::MatrixXd& A, const Eigen::VectorXd& s);
Eigen::VectorXd predict_terms(const EmbeddingModel& model, const Eigen::VectorXd& s);

// Indices of the n largest entries, descending; ties by ascending index.
std::vector<std::uint32_t> top_terms(const Eigen::VectorXd& term_scores,
                                     std::size_t n);

// D x N column-per-video view of a feature matrix.
Eigen::MatrixXd feature_cols(const FeatureMatrix& fm);

}  // namespace videostory

#endif
