#ifndef VIDEOSTORY_TRAINER_HPP
#define VIDEOSTORY_TRAINER_HPP

#include <Eigen/Dense>
#include <random>
#include <vector>

#include "videostory/corpus.hpp"
#include "videostory/embedding.hpp"

namespace videostory {

// Mutable SGD state shared by all training variants. The unimodal,
// fused and term-sensitive trainers are the same loop with J modalities
// and optional diagonal term weights; this keeps their J=1 / H=I
// reductions bitwise exact.
struct TrainState {
  Eigen::MatrixXd A;                 // M x k
  std::vector<Eigen::MatrixXd> W;    // per modality, D_j x k
  Eigen::MatrixXd S;                 // k x N
  std::size_t epoch = 0;
  std::size_t step = 0;              // global step counter t
};

// A, S from svd_init; each W^j zero-mean Gaussian with sigma = 1/sqrt(D_j),
// drawn from `gen`.
TrainState init_train_state(const Corpus& corpus, const Hyperparams& hp,
                            std::mt19937_64& gen);

// Runs `epochs` SGD passes in place. Each epoch visits every sample once in
// a fresh permutation drawn from `gen`. `gammas` and `term_weights` may be
// empty (all ones / unweighted). Throws Diverged if any parameter leaves
// the finite range.
void run_sgd(TrainState& state, const Corpus& corpus, const Hyperparams& hp,
             const std::vector<double>& gammas,
             const Eigen::VectorXd& term_weights, std::size_t epochs,
             std::mt19937_64& gen);

// Shared gradient kernel: term-sensitive, multimodal per-sample gradients.
// Empty `term_weights` means unweighted (H = I); empty `gammas` means all 1.
SampleGradients sample_gradients_core(
    const Eigen::MatrixXd& A, const std::vector<Eigen::MatrixXd>& projections,
    const Eigen::VectorXd& s, const std::vector<Eigen::VectorXd>& xs,
    const Eigen::VectorXd& y, const Eigen::VectorXd& term_weights,
    const Hyperparams& hp, const std::vector<double>& gammas);

}  // namespace videostory

#endif
