#ifndef VIDEOSTORY_ORACLE_HPP
#define VIDEOSTORY_ORACLE_HPP

#include <Eigen/Dense>
#include <cstdint>
#include <functional>
#include <vector>

#include "videostory/corpus.hpp"
#include "videostory/embedding.hpp"
#include "videostory/eval.hpp"
#include "videostory/zeroshot.hpp"

namespace videostory::oracle {

// Ridge minimizer of the predictability loss: W = (X X^T + lw I)^{-1} X S^T.
Eigen::MatrixXd closed_form_W(const Eigen::MatrixXd& X, const Eigen::MatrixXd& S,
                              double lambda_w);

// A = Y S^T (S S^T + la I)^{-1}, optionally with diagonal term weights
// (per-row regularized solve).
Eigen::MatrixXd closed_form_A(const Eigen::MatrixXd& Y, const Eigen::MatrixXd& S,
                              double lambda_a,
                              const Eigen::VectorXd& term_weights = {});

// Column-wise stationary point of the joint objective with A, W fixed:
// s_i = (A^T H A + (sum gamma + ls) I)^{-1} (A^T H y_i + sum_j gamma_j W^jT x^j_i).
Eigen::MatrixXd closed_form_S(const Eigen::MatrixXd& A,
                              const std::vector<Eigen::MatrixXd>& projections,
                              const Eigen::MatrixXd& Y,
                              const std::vector<Eigen::MatrixXd>& Xs,
                              double lambda_s,
                              const std::vector<double>& gammas = {},
                              const Eigen::VectorXd& term_weights = {});

// Descriptiveness-only stationary S (no predictability coupling):
// s_i = (A^T A + ls I)^{-1} A^T y_i.
Eigen::MatrixXd lsi_closed_form_S(const Eigen::MatrixXd& A,
                                  const Eigen::MatrixXd& Y, double lambda_s);

struct AltMinResult {
  Eigen::MatrixXd A;
  std::vector<Eigen::MatrixXd> W;
  Eigen::MatrixXd S;
  std::vector<double> objective_trace;  // after each full cycle
};

// Cycles closed_form_S -> closed_form_A -> closed_form_W from SVD init until
// the relative objective decrease drops below tol.
AltMinResult alternating_minimize(const Corpus& corpus, const Hyperparams& hp,
                                  std::size_t max_iters, double tol,
                                  const std::vector<double>& gammas = {},
                                  const Eigen::VectorXd& term_weights = {});

// Objective evaluated by the oracle's own route (used by alternating_minimize
// and acceptance checks): term-sensitive descriptiveness + weighted
// multimodal predictability.
double oracle_objective(const Eigen::MatrixXd& A,
                        const std::vector<Eigen::MatrixXd>& projections,
                        const Eigen::MatrixXd& S, const Eigen::MatrixXd& Y,
                        const std::vector<Eigen::MatrixXd>& Xs,
                        const Hyperparams& hp,
                        const std::vector<double>& gammas = {},
                        const Eigen::VectorXd& term_weights = {});

// Central differences over a flattened parameter vector.
Eigen::VectorXd finite_difference_grad(
    const std::function<double(const Eigen::VectorXd&)>& objective,
    const Eigen::VectorXd& point, double h);

struct SynthSpec {
  std::size_t n_videos = 200;
  std::size_t n_terms = 30;
  std::vector<std::size_t> dims = {20};  // one entry per modality
  std::size_t k_true = 5;
  double noise_sigma = 0.0;
  double term_threshold = 0.5;
  std::size_t n_events = 0;
  std::size_t positives_per_event = 10;
  std::uint64_t seed = 0;

  void validate() const;  // throws BadSpec
};

struct SynthResult {
  Corpus corpus;
  std::vector<EventDefinition> events;
  std::vector<LabeledSet> labels;  // full-corpus labels per event
};

// Planted low-rank corpus: latent s*_i (clustered for event positives),
// features carrying s* exactly up to Gaussian noise, terms thresholded from
// A* s*. Bit-reproducible from the seed.
SynthResult synth_corpus(const SynthSpec& spec);

}  // namespace videostory::oracle

#endif
