#ifndef VIDEOSTORY_BASELINES_HPP
#define VIDEOSTORY_BASELINES_HPP

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "videostory/corpus.hpp"
#include "videostory/embedding.hpp"

namespace videostory {

// Per-term linear scorers used directly as representation dimensions.
// weights is m_sel x (D + 1); the last column is the bias.
struct TermAttributeModel {
  std::vector<std::uint32_t> selected_terms;
  Eigen::MatrixXd weights;

  std::size_t feature_dim() const {
    return static_cast<std::size_t>(weights.cols()) - 1;
  }
  Eigen::VectorXd representation(const Eigen::VectorXd& x) const;
};

// Frequency-selected term attributes: the m_sel most frequent vocabulary
// terms (a vocabulary prefix), each with a ridge linear scorer. Features are
// all modalities concatenated.
TermAttributeModel train_term_attributes_f(const Corpus& corpus,
                                           std::size_t m_sel, double reg);

// Cross-validated term attributes: per term a seeded stratified 2-fold
// split, terms ranked by mean held-out AP, top m_sel retrained on all data.
TermAttributeModel train_term_attributes(const Corpus& corpus,
                                         std::size_t m_sel, double reg,
                                         std::uint64_t seed);

// Two-step description embedding: descriptiveness-only alternating
// minimization for A (and S), then a single ridge solve for W.
EmbeddingModel train_description_embedding(const Corpus& corpus,
                                           const Hyperparams& hp,
                                           std::size_t modality_index = 0,
                                           double tol = 1e-8,
                                           std::size_t max_iters = 500);

}  // namespace videostory

#endif
