#ifndef VIDEOSTORY_ZEROSHOT_HPP
#define VIDEOSTORY_ZEROSHOT_HPP

#include <Eigen/Dense>
#include <string>
#include <utility>
#include <vector>

#include "videostory/corpus.hpp"
#include "videostory/fusion.hpp"

namespace videostory {

struct EventDefinition {
  std::string event_id;
  std::string title;
  std::string definition;
};

// Diagonal per-term weights: alpha where the term appears in the event text,
// 1 - alpha elsewhere.
struct ImportanceMatrix {
  std::string event_id;
  double alpha = 0.75;
  Eigen::VectorXd weights;  // length M, entries in {alpha, 1 - alpha}
};

struct EventQuery {
  std::string event_id;
  Eigen::VectorXd y;  // binary, length M
};

struct RankEntry {
  std::string video_id;
  double score;
};

struct Ranking {
  std::string event_id;
  std::vector<RankEntry> entries;  // descending score, ties by ascending id
};

ImportanceMatrix build_importance(const EventDefinition& event,
                                  const TermVocabulary& vocab,
                                  double alpha = 0.75);

// 1/2 sum_i ||H^{1/2}(y_i - A s_i)||^2 + regularizers; `weights` is diag(H).
double term_sensitive_loss(const Eigen::MatrixXd& A, const Eigen::MatrixXd& S,
                           const Eigen::MatrixXd& Y,
                           const Eigen::VectorXd& weights, double lambda_a,
                           double lambda_s);

SampleGradients sample_gradients_ts(const Eigen::MatrixXd& A,
                                    const std::vector<Eigen::MatrixXd>& projections,
                                    const Eigen::VectorXd& s,
                                    const std::vector<Eigen::VectorXd>& xs,
                                    const Eigen::VectorXd& y,
                                    const Eigen::VectorXd& weights,
                                    const Hyperparams& hp,
                                    const std::vector<double>& gammas);

std::pair<MultimodalModel, ImportanceMatrix> train_zero(
    const Corpus& corpus_train, const Hyperparams& hp,
    const EventDefinition& event, const std::vector<double>& gammas = {},
    double alpha = 0.75);

// Binary vocabulary match over title + definition; throws EmptyQuery when no
// term overlaps.
EventQuery build_event_query(const EventDefinition& event,
                             const TermVocabulary& vocab);

Ranking cosine_rank(const MultimodalModel& model, const EventQuery& query,
                    const Corpus& corpus_test, int threads = 1);

}  // namespace videostory

#endif
