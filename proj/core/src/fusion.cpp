#include "videostory/fusion.hpp"

#include <random>

#include "videostory/errors.hpp"
#include "videostory/model_io.hpp"
#include "videostory/trainer.hpp"

namespace videostory {

double multimodal_predictability_loss(const Eigen::MatrixXd& S,
                                      const std::vector<Eigen::MatrixXd>& projections,
                                      const std::vector<Eigen::MatrixXd>& Xs,
                                      const std::vector<double>& gammas,
                                      double lambda_w) {
  if (projections.size() != Xs.size())
    throw Error("ShapeMismatch", "projection count differs from feature count");
  if (!gammas.empty() && gammas.size() != projections.size())
    throw Error("ShapeMismatch", "gamma count differs from modality count");
  double loss = 0.0;
  for (std::size_t j = 0; j < projections.size(); ++j) {
    const double gamma = gammas.empty() ? 1.0 : gammas[j];
    loss += gamma * predictability_loss(S, projections[j], Xs[j], lambda_w);
  }
  return loss;
}

SampleGradients sample_gradients_fused(const Eigen::MatrixXd& A,
                                       const std::vector<Eigen::MatrixXd>& projections,
                                       const Eigen::VectorXd& s,
                                       const std::vector<Eigen::VectorXd>& xs,
                                       const Eigen::VectorXd& y,
                                       const Hyperparams& hp,
                                       const std::vector<double>& gammas) {
  return sample_gradients_core(A, projections, s, xs, y, Eigen::VectorXd(), hp, gammas);
}

MultimodalModel sgd_train_fused(const Corpus& corpus_train, const Hyperparams& hp,
                                const std::vector<double>& gammas) {
  hp.validate();
  corpus_train.validate();
  if (!gammas.empty() && gammas.size() != corpus_train.modality_count())
    throw Error("ShapeMismatch", "gamma count differs from modality count");
  for (double g : gammas)
    if (g < 0) throw Error("BadParam", "gammas must be >= 0");

  std::mt19937_64 gen(hp.seed);
  TrainState state = init_train_state(corpus_train, hp, gen);
  run_sgd(state, corpus_train, hp, gammas, Eigen::VectorXd(), hp.epochs, gen);

  MultimodalModel model;
  model.A = std::move(state.A);
  model.projections = std::move(state.W);
  for (const auto& fm : corpus_train.features) model.modalities.push_back(fm.modality);
  model.gammas = gammas.empty()
                     ? std::vector<double>(corpus_train.modality_count(), 1.0)
                     : gammas;
  model.vocab_fingerprint = vocabulary_fingerprint(corpus_train.vocabulary);
  model.hyperparams = hp;
  return model;
}

Eigen::VectorXd embed_fused(const MultimodalModel& model,
                            const std::vector<Eigen::VectorXd>& xs) {
  if (xs.size() != model.projections.size())
    throw Error("ShapeMismatch", "feature count differs from modality count");
  const auto k = model.A.cols();
  Eigen::VectorXd out(static_cast<Eigen::Index>(xs.size()) * k);
  for (std::size_t j = 0; j < xs.size(); ++j) {
    if (xs[j].size() != model.projections[j].rows())
      throw Error("ShapeMismatch", "feature vector length differs from projection rows");
    out.segment(static_cast<Eigen::Index>(j) * k, k) =
        model.projections[j].transpose() * xs[j];
  }
  return out;
}

Eigen::VectorXd shared_embedding(const MultimodalModel& model,
                                 const std::vector<Eigen::VectorXd>& xs) {
  if (xs.size() != model.projections.size())
    throw Error("ShapeMismatch", "feature count differs from modality count");
  Eigen::VectorXd s = Eigen::VectorXd::Zero(model.A.cols());
  for (std::size_t j = 0; j < xs.size(); ++j) {
    if (xs[j].size() != model.projections[j].rows())
      throw Error("ShapeMismatch", "feature vector length differs from projection rows");
    const double gamma = model.gammas.empty() ? 1.0 : model.gammas[j];
    s += gamma * (model.projections[j].transpose() * xs[j]);
  }
  return s;
}

MultimodalModel to_multimodal(const EmbeddingModel& model, std::string modality) {
  MultimodalModel out;
  out.A = model.A;
  out.projections = {model.W};
  out.modalities = {std::move(modality)};
  out.gammas = {1.0};
  out.vocab_fingerprint = model.vocab_fingerprint;
  out.hyperparams = model.hyperparams;
  return out;
}

EmbeddingModel to_unimodal(const MultimodalModel& model) {
  if (model.projections.size() != 1)
    throw Error("ShapeMismatch", "model is not unimodal");
  EmbeddingModel out;
  out.A = model.A;
  out.W = model.projections[0];
  out.vocab_fingerprint = model.vocab_fingerprint;
  out.hyperparams = model.hyperparams;
  return out;
}

}  // namespace videostory
