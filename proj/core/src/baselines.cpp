#include "videostory/baselines.hpp"

#include <algorithm>
#include <numeric>
#include <random>

#include "videostory/errors.hpp"
#include "videostory/eval.hpp"
#include "videostory/oracle.hpp"
#include "videostory/rng.hpp"

namespace videostory {

namespace {

// Ridge linear scorer with bias on an augmented feature column.
Eigen::VectorXd ridge_scorer(const Eigen::MatrixXd& feats,  // n x D
                             const Eigen::VectorXd& targets, double reg) {
  const Eigen::Index n = feats.rows();
  const Eigen::Index d = feats.cols();
  Eigen::MatrixXd aug(n, d + 1);
  aug.leftCols(d) = feats;
  aug.col(d).setOnes();
  Eigen::MatrixXd sys = aug.transpose() * aug;
  sys.diagonal().array() += reg;
  Eigen::LLT<Eigen::MatrixXd> llt(sys);
  if (llt.info() != Eigen::Success)
    throw Error("Singular", "ridge normal equations are not positive definite");
  return llt.solve(aug.transpose() * targets);
}

Eigen::VectorXd term_labels(const Corpus& corpus, std::uint32_t term) {
  Eigen::VectorXd y =
      Eigen::VectorXd::Zero(static_cast<Eigen::Index>(corpus.video_count()));
  for (std::size_t i = 0; i < corpus.video_count(); ++i) {
    const auto& col = corpus.term_matrix.columns[i];
    if (std::binary_search(col.begin(), col.end(), term))
      y(static_cast<Eigen::Index>(i)) = 1.0;
  }
  return y;
}

}  // namespace

Eigen::VectorXd TermAttributeModel::representation(const Eigen::VectorXd& x) const {
  if (x.size() + 1 != weights.cols())
    throw Error("ShapeMismatch", "feature length differs from scorer width");
  Eigen::VectorXd aug(x.size() + 1);
  aug.head(x.size()) = x;
  aug(x.size()) = 1.0;
  return weights * aug;
}

TermAttributeModel train_term_attributes_f(const Corpus& corpus,
                                           std::size_t m_sel, double reg) {
  corpus.validate();
  if (m_sel > corpus.vocabulary.size())
    throw Error("RankTooLarge", "m_sel exceeds vocabulary size");
  const Corpus merged = concat_modalities(corpus);
  const Eigen::MatrixXd& feats = merged.features[0].values;

  TermAttributeModel model;
  model.weights.resize(static_cast<Eigen::Index>(m_sel), feats.cols() + 1);
  for (std::size_t j = 0; j < m_sel; ++j) {
    // Vocabulary is count-ordered, so the most frequent terms are a prefix.
    model.selected_terms.push_back(static_cast<std::uint32_t>(j));
    model.weights.row(static_cast<Eigen::Index>(j)) =
        ridge_scorer(feats, term_labels(merged, static_cast<std::uint32_t>(j)), reg)
            .transpose();
  }
  return model;
}

TermAttributeModel train_term_attributes(const Corpus& corpus,
                                         std::size_t m_sel, double reg,
                                         std::uint64_t seed) {
  corpus.validate();
  const Corpus merged = concat_modalities(corpus);
  const Eigen::MatrixXd& feats = merged.features[0].values;
  const std::size_t n = merged.video_count();

  struct Candidate {
    std::uint32_t term;
    double mean_ap;
  };
  std::vector<Candidate> candidates;

  for (std::uint32_t term = 0; term < merged.vocabulary.size(); ++term) {
    const Eigen::VectorXd y = term_labels(merged, term);
    std::vector<std::size_t> pos, neg;
    for (std::size_t i = 0; i < n; ++i)
      (y(static_cast<Eigen::Index>(i)) > 0 ? pos : neg).push_back(i);
    if (pos.size() < 2) continue;  // ineligible

    // Stratified seeded 2-fold split so each fold keeps at least one positive.
    std::mt19937_64 gen(seed ^ (0x9e3779b97f4a7c15ULL * (term + 1)));
    auto shuffle_idx = [&](std::vector<std::size_t>& v) {
      const auto perm = random_permutation(v.size(), gen);
      std::vector<std::size_t> out(v.size());
      for (std::size_t i = 0; i < v.size(); ++i) out[i] = v[perm[i]];
      v = std::move(out);
    };
    shuffle_idx(pos);
    shuffle_idx(neg);
    std::vector<int> fold(n, 0);
    for (std::size_t i = 0; i < pos.size(); ++i) fold[pos[i]] = static_cast<int>(i % 2);
    for (std::size_t i = 0; i < neg.size(); ++i) fold[neg[i]] = static_cast<int>(i % 2);

    double ap_sum = 0.0;
    bool usable = true;
    for (int held = 0; held < 2 && usable; ++held) {
      std::vector<std::size_t> train_idx, test_idx;
      for (std::size_t i = 0; i < n; ++i)
        (fold[i] == held ? test_idx : train_idx).push_back(i);
      if (train_idx.empty() || test_idx.empty()) {
        usable = false;
        break;
      }
      Eigen::MatrixXd ftrain(static_cast<Eigen::Index>(train_idx.size()), feats.cols());
      Eigen::VectorXd ytrain(static_cast<Eigen::Index>(train_idx.size()));
      for (std::size_t i = 0; i < train_idx.size(); ++i) {
        ftrain.row(static_cast<Eigen::Index>(i)) =
            feats.row(static_cast<Eigen::Index>(train_idx[i]));
        ytrain(static_cast<Eigen::Index>(i)) =
            y(static_cast<Eigen::Index>(train_idx[i]));
      }
      const Eigen::VectorXd w = ridge_scorer(ftrain, ytrain, reg);

      Eigen::VectorXd scores(static_cast<Eigen::Index>(test_idx.size()));
      std::vector<std::string> ids;
      std::vector<int> labels;
      for (std::size_t i = 0; i < test_idx.size(); ++i) {
        const auto row = static_cast<Eigen::Index>(test_idx[i]);
        scores(static_cast<Eigen::Index>(i)) =
            feats.row(row).dot(w.head(feats.cols())) + w(feats.cols());
        ids.push_back(merged.video_ids[test_idx[i]]);
        labels.push_back(y(row) > 0 ? 1 : 0);
      }
      ap_sum += average_precision(ids, scores, labels).ap;
    }
    if (usable) candidates.push_back({term, ap_sum / 2.0});
  }

  if (candidates.size() < m_sel)
    throw Error("TooFewEligible", "only " + std::to_string(candidates.size()) +
                                      " terms have enough positives");
  std::sort(candidates.begin(), candidates.end(), [](const Candidate& a, const Candidate& b) {
    if (a.mean_ap != b.mean_ap) return a.mean_ap > b.mean_ap;
    return a.term < b.term;
  });

  TermAttributeModel model;
  model.weights.resize(static_cast<Eigen::Index>(m_sel), feats.cols() + 1);
  for (std::size_t j = 0; j < m_sel; ++j) {
    const std::uint32_t term = candidates[j].term;
    model.selected_terms.push_back(term);
    model.weights.row(static_cast<Eigen::Index>(j)) =
        ridge_scorer(feats, term_labels(merged, term), reg).transpose();
  }
  return model;
}

EmbeddingModel train_description_embedding(const Corpus& corpus,
                                           const Hyperparams& hp,
                                           std::size_t modality_index,
                                           double tol, std::size_t max_iters) {
  corpus.validate();
  if (modality_index >= corpus.modality_count())
    throw Error("BadParam", "modality index out of range");
  const Eigen::MatrixXd Y = corpus.term_matrix.to_dense();
  const Eigen::MatrixXd X = feature_cols(corpus.features[modality_index]);

  // Step 1: descriptiveness-only alternating minimization.
  auto [A, S] = svd_init(Y, hp.k);
  double prev = descriptiveness_loss(A, S, Y, hp.lambda_a, hp.lambda_s);
  // Each cycle ends with the S update so the final S is the exact
  // descriptiveness-only fixed point of the final A.
  for (std::size_t it = 0; it < max_iters; ++it) {
    A = oracle::closed_form_A(Y, S, hp.lambda_a);
    S = oracle::lsi_closed_form_S(A, Y, hp.lambda_s);
    const double cur = descriptiveness_loss(A, S, Y, hp.lambda_a, hp.lambda_s);
    if (prev <= 0.0 || (prev - cur) / prev < tol) break;
    prev = cur;
  }

  // Step 2: ridge solve for W with S fixed.
  EmbeddingModel model;
  model.W = oracle::closed_form_W(X, S, hp.lambda_w);
  model.A = std::move(A);
  model.hyperparams = hp;
  return model;
}

}  // namespace videostory
