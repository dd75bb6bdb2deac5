#ifndef VIDEOSTORY_EVAL_HPP
#define VIDEOSTORY_EVAL_HPP

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "videostory/corpus.hpp"
#include "videostory/embedding.hpp"

namespace videostory {

struct LabeledSet {
  std::string event_id;
  std::vector<std::string> video_ids;
  std::vector<int> labels;  // 0/1 per video
};

struct APResult {
  std::string event_id;
  double ap = 0.0;
  std::size_t n_pos = 0;
  std::size_t n_total = 0;
};

// Prefix-precision AP: sort by descending score, ties by ascending video_id;
// AP = (1/P) * sum over positive ranks r of precision@r.
APResult average_precision(const std::vector<std::string>& video_ids,
                           const Eigen::VectorXd& scores,
                           const std::vector<int>& labels,
                           const std::string& event_id = "");

double mean_average_precision(const std::vector<APResult>& results);

// Kernel regularized least squares with an RBF kernel,
// K(u, v) = exp(-gamma ||u - v||^2); labels enter as +/-1.
struct KernelClassifier {
  Eigen::MatrixXd train_reps;  // n x d
  Eigen::VectorXd coeffs;
  double rbf_gamma = 1.0;

  double score(const Eigen::VectorXd& x) const;
};

KernelClassifier train_event_classifier(const Eigen::MatrixXd& representations,
                                        const std::vector<int>& labels,
                                        double reg = 1.0, double rbf_gamma = 1.0);

enum class Representation { RawFeatures, VideoStory, TermAttributes, DescriptionEmbedding };
enum class FusionStrategy { Early, Late, VsEarly, VsLate, VsJoint };

struct HarnessConfig {
  Representation representation = Representation::VideoStory;
  FusionStrategy strategy = FusionStrategy::Early;
  Hyperparams hyperparams;
  double classifier_reg = 1.0;
  double rbf_gamma = 1.0;
  std::size_t m_sel = 0;  // 0 -> use hyperparams.k
  int threads = 1;
};

struct HarnessResult {
  std::vector<APResult> per_event;
  double map = 0.0;
};

// Few-example protocol: learn the representation on corpus_train, fit one
// classifier per event from its labeled training videos, evaluate AP on the
// test labels.
HarnessResult few_example_harness(const Corpus& corpus_train,
                                  const Corpus& corpus_test,
                                  const std::vector<LabeledSet>& train_labels,
                                  const std::vector<LabeledSet>& test_labels,
                                  const HarnessConfig& config);

}  // namespace videostory

#endif
