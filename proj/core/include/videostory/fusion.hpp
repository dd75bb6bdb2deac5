#ifndef VIDEOSTORY_FUSION_HPP
#define VIDEOSTORY_FUSION_HPP

#include <Eigen/Dense>
#include <array>
#include <string>
#include <vector>

#include "videostory/corpus.hpp"
#include "videostory/embedding.hpp"

namespace videostory {

struct MultimodalModel {
  Eigen::MatrixXd A;                        // M x k
  std::vector<Eigen::MatrixXd> projections; // W^j, D_j x k
  std::vector<std::string> modalities;
  std::vector<double> gammas;               // per-modality weights, >= 0
  std::array<unsigned char, 32> vocab_fingerprint{};
  Hyperparams hyperparams;
  double alpha = 0.75;  // only meaningful for term-sensitive models

  std::size_t modality_count() const { return projections.size(); }
};

// sum_j gamma_j * L_p(S, W^j); Xs[j] is D_j x N.
double multimodal_predictability_loss(const Eigen::MatrixXd& S,
                                      const std::vector<Eigen::MatrixXd>& projections,
                                      const std::vector<Eigen::MatrixXd>& Xs,
                                      const std::vector<double>& gammas,
                                      double lambda_w);

SampleGradients sample_gradients_fused(const Eigen::MatrixXd& A,
                                       const std::vector<Eigen::MatrixXd>& projections,
                                       const Eigen::VectorXd& s,
                                       const std::vector<Eigen::VectorXd>& xs,
                                       const Eigen::VectorXd& y,
                                       const Hyperparams& hp,
                                       const std::vector<double>& gammas);

MultimodalModel sgd_train_fused(const Corpus& corpus_train, const Hyperparams& hp,
                                const std::vector<double>& gammas = {});

// Concatenation [W^1T x^1, ..., W^JT x^J], length J*k.
Eigen::VectorXd embed_fused(const MultimodalModel& model,
                            const std::vector<Eigen::VectorXd>& xs);

// Shared-embedding prediction input: sum_j gamma_j W^jT x^j (equals W^T x
// for a single modality).
Eigen::VectorXd shared_embedding(const MultimodalModel& model,
                                 const std::vector<Eigen::VectorXd>& xs);

MultimodalModel to_multimodal(const EmbeddingModel& model, std::string modality);
EmbeddingModel to_unimodal(const MultimodalModel& model);

}  // namespace videostory

#endif
