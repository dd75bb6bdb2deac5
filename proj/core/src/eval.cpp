#include "videostory/eval.hpp"

#include <algorithm>
#include <functional>
#include <numeric>
#include <unordered_map>

#include "videostory/baselines.hpp"
#include "videostory/errors.hpp"
#include "videostory/fusion.hpp"
#include "videostory/threading.hpp"

namespace videostory {

APResult average_precision(const std::vector<std::string>& video_ids,
                           const Eigen::VectorXd& scores,
                           const std::vector<int>& labels,
                           const std::string& event_id) {
  const std::size_t n = video_ids.size();
  if (static_cast<std::size_t>(scores.size()) != n || labels.size() != n)
    throw Error("ShapeMismatch", "ids, scores and labels disagree on length");

  std::size_t n_pos = 0;
  for (int l : labels) n_pos += (l != 0);
  if (n_pos == 0) throw Error("NoPositives", "AP is undefined without positives");

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0u);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (scores(static_cast<Eigen::Index>(a)) != scores(static_cast<Eigen::Index>(b)))
      return scores(static_cast<Eigen::Index>(a)) > scores(static_cast<Eigen::Index>(b));
    return video_ids[a] < video_ids[b];
  });

  double sum = 0.0;
  std::size_t hits = 0;
  for (std::size_t rank = 1; rank <= n; ++rank) {
    if (labels[order[rank - 1]] != 0) {
      ++hits;
      sum += static_cast<double>(hits) / static_cast<double>(rank);
    }
  }

  APResult result;
  result.event_id = event_id;
  result.ap = sum / static_cast<double>(n_pos);
  result.n_pos = n_pos;
  result.n_total = n;
  return result;
}

double mean_average_precision(const std::vector<APResult>& results) {
  if (results.empty()) throw Error("Empty", "mAP over zero events is undefined");
  double sum = 0.0;
  for (const auto& r : results) sum += r.ap;
  return sum / static_cast<double>(results.size());
}

double KernelClassifier::score(const Eigen::VectorXd& x) const {
  if (x.size() != train_reps.cols())
    throw Error("ShapeMismatch", "representation length differs from training data");
  double out = 0.0;
  for (Eigen::Index i = 0; i < train_reps.rows(); ++i) {
    const double d2 = (train_reps.row(i).transpose() - x).squaredNorm();
    out += coeffs(i) * std::exp(-rbf_gamma * d2);
  }
  return out;
}

KernelClassifier train_event_classifier(const Eigen::MatrixXd& representations,
                                        const std::vector<int>& labels,
                                        double reg, double rbf_gamma) {
  const auto n = representations.rows();
  if (static_cast<std::size_t>(n) != labels.size())
    throw Error("ShapeMismatch", "label count differs from representation count");
  if (!(reg > 0)) throw Error("BadParam", "classifier regularizer must be > 0");
  if (!(rbf_gamma > 0)) throw Error("BadParam", "rbf_gamma must be > 0");

  Eigen::MatrixXd kernel(n, n);
  for (Eigen::Index a = 0; a < n; ++a)
    for (Eigen::Index b = 0; b <= a; ++b) {
      const double d2 = (representations.row(a) - representations.row(b)).squaredNorm();
      kernel(a, b) = kernel(b, a) = std::exp(-rbf_gamma * d2);
    }
  kernel.diagonal().array() += reg;

  Eigen::VectorXd targets(n);
  for (Eigen::Index i = 0; i < n; ++i) targets(i) = labels[static_cast<std::size_t>(i)] != 0 ? 1.0 : -1.0;

  Eigen::LLT<Eigen::MatrixXd> llt(kernel);
  if (llt.info() != Eigen::Success)
    throw Error("Singular", "kernel system is not positive definite");

  KernelClassifier clf;
  clf.train_reps = representations;
  clf.coeffs = llt.solve(targets);
  clf.rbf_gamma = rbf_gamma;
  return clf;
}

namespace {

std::vector<Eigen::VectorXd> video_features(const Corpus& corpus, std::size_t i) {
  std::vector<Eigen::VectorXd> xs;
  xs.reserve(corpus.modality_count());
  for (const auto& fm : corpus.features)
    xs.push_back(fm.values.row(static_cast<Eigen::Index>(i)).transpose());
  return xs;
}

// Per-video representation vectors, one row per video.
using RepFn = std::function<Eigen::VectorXd(const Corpus&, std::size_t)>;

Eigen::MatrixXd build_reps(const Corpus& corpus, const RepFn& fn, int threads) {
  const std::size_t n = corpus.video_count();
  std::vector<Eigen::VectorXd> rows(n);
  parallel_for(n, threads, [&](std::size_t i) { rows[i] = fn(corpus, i); });
  Eigen::MatrixXd reps(static_cast<Eigen::Index>(n), rows.empty() ? 0 : rows[0].size());
  for (std::size_t i = 0; i < n; ++i) reps.row(static_cast<Eigen::Index>(i)) = rows[i].transpose();
  return reps;
}

Eigen::VectorXd concat_raw(const Corpus& corpus, std::size_t i) {
  Eigen::Index total = 0;
  for (const auto& fm : corpus.features) total += fm.values.cols();
  Eigen::VectorXd out(total);
  Eigen::Index offset = 0;
  for (const auto& fm : corpus.features) {
    out.segment(offset, fm.values.cols()) =
        fm.values.row(static_cast<Eigen::Index>(i)).transpose();
    offset += fm.values.cols();
  }
  return out;
}

std::vector<int> labels_for_corpus(const LabeledSet& set, const Corpus& corpus) {
  std::unordered_map<std::string, int> by_id;
  for (std::size_t i = 0; i < set.video_ids.size(); ++i)
    by_id[set.video_ids[i]] = set.labels[i];
  std::vector<int> out;
  out.reserve(corpus.video_count());
  for (const auto& id : corpus.video_ids) {
    auto it = by_id.find(id);
    if (it == by_id.end())
      throw Error("IdMismatch", "no label for video " + id + " in event " + set.event_id);
    out.push_back(it->second);
  }
  return out;
}

HarnessResult score_events(const Eigen::MatrixXd& train_reps,
                           const Eigen::MatrixXd& test_reps,
                           const Corpus& corpus_train, const Corpus& corpus_test,
                           const std::vector<LabeledSet>& train_labels,
                           const std::vector<LabeledSet>& test_labels,
                           const HarnessConfig& config) {
  if (train_labels.size() != test_labels.size())
    throw Error("ShapeMismatch", "train and test label sets disagree on event count");
  HarnessResult result;
  result.per_event.resize(train_labels.size());
  parallel_for(train_labels.size(), config.threads, [&](std::size_t e) {
    const auto ytrain = labels_for_corpus(train_labels[e], corpus_train);
    const auto ytest = labels_for_corpus(test_labels[e], corpus_test);
    const KernelClassifier clf = train_event_classifier(
        train_reps, ytrain, config.classifier_reg, config.rbf_gamma);
    Eigen::VectorXd scores(test_reps.rows());
    for (Eigen::Index i = 0; i < test_reps.rows(); ++i)
      scores(i) = clf.score(test_reps.row(i).transpose());
    result.per_event[e] = average_precision(corpus_test.video_ids, scores, ytest,
                                            train_labels[e].event_id);
  });
  result.map = mean_average_precision(result.per_event);
  return result;
}

// Late fusion: per-modality classifiers, averaged scores.
HarnessResult score_events_late(const std::vector<Eigen::MatrixXd>& train_reps,
                                const std::vector<Eigen::MatrixXd>& test_reps,
                                const Corpus& corpus_train, const Corpus& corpus_test,
                                const std::vector<LabeledSet>& train_labels,
                                const std::vector<LabeledSet>& test_labels,
                                const HarnessConfig& config) {
  HarnessResult result;
  result.per_event.resize(train_labels.size());
  parallel_for(train_labels.size(), config.threads, [&](std::size_t e) {
    const auto ytrain = labels_for_corpus(train_labels[e], corpus_train);
    const auto ytest = labels_for_corpus(test_labels[e], corpus_test);
    Eigen::VectorXd scores = Eigen::VectorXd::Zero(test_reps[0].rows());
    for (std::size_t j = 0; j < train_reps.size(); ++j) {
      const KernelClassifier clf = train_event_classifier(
          train_reps[j], ytrain, config.classifier_reg, config.rbf_gamma);
      for (Eigen::Index i = 0; i < test_reps[j].rows(); ++i)
        scores(i) += clf.score(test_reps[j].row(i).transpose());
    }
    scores /= static_cast<double>(train_reps.size());
    result.per_event[e] = average_precision(corpus_test.video_ids, scores, ytest,
                                            train_labels[e].event_id);
  });
  result.map = mean_average_precision(result.per_event);
  return result;
}

}  // namespace

HarnessResult few_example_harness(const Corpus& corpus_train,
                                  const Corpus& corpus_test,
                                  const std::vector<LabeledSet>& train_labels,
                                  const std::vector<LabeledSet>& test_labels,
                                  const HarnessConfig& config) {
  corpus_train.validate();
  corpus_test.validate();
  const std::size_t m_sel =
      config.m_sel > 0 ? config.m_sel : config.hyperparams.k;

  switch (config.representation) {
    case Representation::RawFeatures: {
      if (config.strategy == FusionStrategy::Late &&
          corpus_train.modality_count() > 1) {
        std::vector<Eigen::MatrixXd> train_reps, test_reps;
        for (std::size_t j = 0; j < corpus_train.modality_count(); ++j) {
          train_reps.push_back(corpus_train.features[j].values);
          test_reps.push_back(corpus_test.features[j].values);
        }
        return score_events_late(train_reps, test_reps, corpus_train, corpus_test,
                                 train_labels, test_labels, config);
      }
      const auto train_reps = build_reps(corpus_train, concat_raw, config.threads);
      const auto test_reps = build_reps(corpus_test, concat_raw, config.threads);
      return score_events(train_reps, test_reps, corpus_train, corpus_test,
                          train_labels, test_labels, config);
    }
    case Representation::TermAttributes: {
      const TermAttributeModel model =
          train_term_attributes_f(corpus_train, std::min(m_sel, corpus_train.vocabulary.size()),
                                  config.classifier_reg);
      auto rep = [&model](const Corpus& c, std::size_t i) {
        return model.representation(concat_raw(c, i));
      };
      const auto train_reps = build_reps(corpus_train, rep, config.threads);
      const auto test_reps = build_reps(corpus_test, rep, config.threads);
      return score_events(train_reps, test_reps, corpus_train, corpus_test,
                          train_labels, test_labels, config);
    }
    case Representation::DescriptionEmbedding: {
      const Corpus merged_train = concat_modalities(corpus_train);
      const Corpus merged_test = concat_modalities(corpus_test);
      const EmbeddingModel model =
          train_description_embedding(merged_train, config.hyperparams);
      auto rep = [&model](const Corpus& c, std::size_t i) {
        return embed(model, concat_raw(c, i));
      };
      const auto train_reps = build_reps(merged_train, rep, config.threads);
      const auto test_reps = build_reps(merged_test, rep, config.threads);
      return score_events(train_reps, test_reps, corpus_train, corpus_test,
                          train_labels, test_labels, config);
    }
    case Representation::VideoStory:
      break;
  }

  // VideoStory representations under the requested fusion strategy.
  switch (config.strategy) {
    case FusionStrategy::Early:
    case FusionStrategy::VsEarly: {
      const Corpus merged_train = concat_modalities(corpus_train);
      const Corpus merged_test = concat_modalities(corpus_test);
      const EmbeddingModel model = sgd_train(merged_train, config.hyperparams);
      auto rep = [&model](const Corpus& c, std::size_t i) {
        return embed(model, concat_raw(c, i));
      };
      const auto train_reps = build_reps(merged_train, rep, config.threads);
      const auto test_reps = build_reps(merged_test, rep, config.threads);
      return score_events(train_reps, test_reps, corpus_train, corpus_test,
                          train_labels, test_labels, config);
    }
    case FusionStrategy::Late:
    case FusionStrategy::VsLate: {
      // One embedding per modality; representations concatenated.
      std::vector<EmbeddingModel> models;
      for (std::size_t j = 0; j < corpus_train.modality_count(); ++j)
        models.push_back(sgd_train(corpus_train, config.hyperparams, j));
      auto rep = [&models](const Corpus& c, std::size_t i) {
        const auto xs = video_features(c, i);
        Eigen::Index k = models[0].A.cols();
        Eigen::VectorXd out(static_cast<Eigen::Index>(models.size()) * k);
        for (std::size_t j = 0; j < models.size(); ++j)
          out.segment(static_cast<Eigen::Index>(j) * k, k) = embed(models[j], xs[j]);
        return out;
      };
      const auto train_reps = build_reps(corpus_train, rep, config.threads);
      const auto test_reps = build_reps(corpus_test, rep, config.threads);
      return score_events(train_reps, test_reps, corpus_train, corpus_test,
                          train_labels, test_labels, config);
    }
    case FusionStrategy::VsJoint: {
      const MultimodalModel model = sgd_train_fused(corpus_train, config.hyperparams);
      auto rep = [&model](const Corpus& c, std::size_t i) {
        return embed_fused(model, video_features(c, i));
      };
      const auto train_reps = build_reps(corpus_train, rep, config.threads);
      const auto test_reps = build_reps(corpus_test, rep, config.threads);
      return score_events(train_reps, test_reps, corpus_train, corpus_test,
                          train_labels, test_labels, config);
    }
  }
  throw Error("BadParam", "unknown fusion strategy");
}

}  // namespace videostory
