#include "videostory/oracle.hpp"

#include <Eigen/Cholesky>
#include <algorithm>
#include <random>

#include "videostory/errors.hpp"
#include "videostory/rng.hpp"

namespace videostory::oracle {

namespace {

Eigen::LLT<Eigen::MatrixXd> spd_factor(const Eigen::MatrixXd& mat) {
  Eigen::LLT<Eigen::MatrixXd> llt(mat);
  if (llt.info() != Eigen::Success)
    throw Error("Singular", "normal equations are not positive definite");
  return llt;
}

}  // namespace

Eigen::MatrixXd closed_form_W(const Eigen::MatrixXd& X, const Eigen::MatrixXd& S,
                              double lambda_w) {
  if (X.cols() != S.cols())
    throw Error("ShapeMismatch", "X and S disagree on sample count");
  Eigen::MatrixXd gram = X * X.transpose();
  gram.diagonal().array() += lambda_w;
  return spd_factor(gram).solve(X * S.transpose());
}

Eigen::MatrixXd closed_form_A(const Eigen::MatrixXd& Y, const Eigen::MatrixXd& S,
                              double lambda_a,
                              const Eigen::VectorXd& term_weights) {
  if (Y.cols() != S.cols())
    throw Error("ShapeMismatch", "Y and S disagree on sample count");
  const Eigen::MatrixXd gram = S * S.transpose();
  const Eigen::MatrixXd cross = Y * S.transpose();  // M x k
  if (term_weights.size() == 0) {
    Eigen::MatrixXd sys = gram;
    sys.diagonal().array() += lambda_a;
    return spd_factor(sys).solve(cross.transpose()).transpose();
  }
  // Weighted rows decouple: a_m = (h_m S S^T + la I)^{-1} h_m (Y S^T)_m.
  if (term_weights.size() != Y.rows())
    throw Error("ShapeMismatch", "weight length differs from term count");
  Eigen::MatrixXd A(Y.rows(), S.rows());
  for (Eigen::Index m = 0; m < Y.rows(); ++m) {
    Eigen::MatrixXd sys = term_weights(m) * gram;
    sys.diagonal().array() += lambda_a;
    A.row(m) =
        spd_factor(sys).solve((term_weights(m) * cross.row(m)).transpose()).transpose();
  }
  return A;
}

Eigen::MatrixXd closed_form_S(const Eigen::MatrixXd& A,
                              const std::vector<Eigen::MatrixXd>& projections,
                              const Eigen::MatrixXd& Y,
                              const std::vector<Eigen::MatrixXd>& Xs,
                              double lambda_s,
                              const std::vector<double>& gammas,
                              const Eigen::VectorXd& term_weights) {
  if (projections.size() != Xs.size())
    throw Error("ShapeMismatch", "projection count differs from feature count");
  const auto k = A.cols();
  double gamma_sum = 0.0;
  Eigen::MatrixXd rhs;
  if (term_weights.size() == 0) {
    rhs = A.transpose() * Y;
  } else {
    rhs = A.transpose() * (term_weights.asDiagonal() * Y);
  }
  for (std::size_t j = 0; j < projections.size(); ++j) {
    const double gamma = gammas.empty() ? 1.0 : gammas[j];
    gamma_sum += gamma;
    rhs += gamma * (projections[j].transpose() * Xs[j]);
  }
  Eigen::MatrixXd sys(k, k);
  if (term_weights.size() == 0) {
    sys = A.transpose() * A;
  } else {
    sys = A.transpose() * term_weights.asDiagonal() * A;
  }
  sys.diagonal().array() += gamma_sum + lambda_s;
  return spd_factor(sys).solve(rhs);
}

Eigen::MatrixXd lsi_closed_form_S(const Eigen::MatrixXd& A,
                                  const Eigen::MatrixXd& Y, double lambda_s) {
  Eigen::MatrixXd sys = A.transpose() * A;
  sys.diagonal().array() += lambda_s;
  return spd_factor(sys).solve(A.transpose() * Y);
}

double oracle_objective(const Eigen::MatrixXd& A,
                        const std::vector<Eigen::MatrixXd>& projections,
                        const Eigen::MatrixXd& S, const Eigen::MatrixXd& Y,
                        const std::vector<Eigen::MatrixXd>& Xs,
                        const Hyperparams& hp,
                        const std::vector<double>& gammas,
                        const Eigen::VectorXd& term_weights) {
  double descriptive;
  if (term_weights.size() == 0) {
    descriptive = descriptiveness_loss(A, S, Y, hp.lambda_a, hp.lambda_s);
  } else {
    descriptive = term_sensitive_loss(A, S, Y, term_weights, hp.lambda_a, hp.lambda_s);
  }
  return descriptive +
         multimodal_predictability_loss(S, projections, Xs, gammas, hp.lambda_w);
}

AltMinResult alternating_minimize(const Corpus& corpus, const Hyperparams& hp,
                                  std::size_t max_iters, double tol,
                                  const std::vector<double>& gammas,
                                  const Eigen::VectorXd& term_weights) {
  const Eigen::MatrixXd Y = corpus.term_matrix.to_dense();
  std::vector<Eigen::MatrixXd> Xs;
  Xs.reserve(corpus.modality_count());
  for (const auto& fm : corpus.features) Xs.push_back(feature_cols(fm));

  AltMinResult result;
  std::tie(result.A, result.S) = svd_init(Y, hp.k);
  result.W.reserve(Xs.size());
  for (const auto& X : Xs)
    result.W.push_back(closed_form_W(X, result.S, hp.lambda_w));

  double prev = oracle_objective(result.A, result.W, result.S, Y, Xs, hp, gammas,
                                 term_weights);
  result.objective_trace.push_back(prev);

  for (std::size_t it = 0; it < max_iters; ++it) {
    result.S = closed_form_S(result.A, result.W, Y, Xs, hp.lambda_s, gammas,
                             term_weights);
    result.A = closed_form_A(Y, result.S, hp.lambda_a, term_weights);
    for (std::size_t j = 0; j < Xs.size(); ++j)
      result.W[j] = closed_form_W(Xs[j], result.S, hp.lambda_w);

    const double cur = oracle_objective(result.A, result.W, result.S, Y, Xs, hp,
                                        gammas, term_weights);
    result.objective_trace.push_back(cur);
    if (prev <= 0.0 || (prev - cur) / prev < tol) break;
    prev = cur;
  }
  return result;
}

Eigen::VectorXd finite_difference_grad(
    const std::function<double(const Eigen::VectorXd&)>& objective,
    const Eigen::VectorXd& point, double h) {
  if (!(h > 0)) throw Error("BadParam", "step h must be > 0");
  Eigen::VectorXd grad(point.size());
  Eigen::VectorXd probe = point;
  for (Eigen::Index i = 0; i < point.size(); ++i) {
    probe(i) = point(i) + h;
    const double fp = objective(probe);
    probe(i) = point(i) - h;
    const double fm = objective(probe);
    probe(i) = point(i);
    if (!std::isfinite(fp) || !std::isfinite(fm))
      throw Error("NonFinite", "objective is non-finite near the probe point");
    grad(i) = (fp - fm) / (2.0 * h);
  }
  return grad;
}

void SynthSpec::validate() const {
  if (dims.empty()) throw Error("BadSpec", "at least one modality dimension required");
  std::size_t min_d = dims[0];
  for (std::size_t d : dims) min_d = std::min(min_d, d);
  if (k_true < 1 || k_true > std::min(n_terms, min_d))
    throw Error("BadSpec", "k_true must satisfy 1 <= k_true <= min(M, D)");
  if (n_videos < 1) throw Error("BadSpec", "need at least one video");
  if (noise_sigma < 0) throw Error("BadSpec", "noise_sigma must be >= 0");
  if (n_events > 0) {
    if (positives_per_event < 1)
      throw Error("BadSpec", "positives_per_event must be >= 1");
    if (n_events * positives_per_event > n_videos)
      throw Error("BadSpec", "more event positives than videos");
    if (!(term_threshold > 0))
      throw Error("BadSpec", "term_threshold must be > 0 when events are planted");
  }
}

SynthResult synth_corpus(const SynthSpec& spec) {
  spec.validate();
  std::mt19937_64 gen(spec.seed);
  const auto n = static_cast<Eigen::Index>(spec.n_videos);
  const auto m = static_cast<Eigen::Index>(spec.n_terms);
  const auto k = static_cast<Eigen::Index>(spec.k_true);
  const std::size_t j_count = spec.dims.size();

  auto gaussian_matrix = [&](Eigen::Index rows, Eigen::Index cols, double sigma) {
    Eigen::MatrixXd mat(rows, cols);
    for (Eigen::Index r = 0; r < rows; ++r)
      for (Eigen::Index c = 0; c < cols; ++c) mat(r, c) = sigma * gaussian(gen);
    return mat;
  };

  // True factors.
  Eigen::MatrixXd A_true =
      gaussian_matrix(m, k, 1.0 / std::sqrt(static_cast<double>(k)));
  std::vector<Eigen::MatrixXd> W_true;
  for (std::size_t j = 0; j < j_count; ++j)
    W_true.push_back(gaussian_matrix(static_cast<Eigen::Index>(spec.dims[j]), k,
                                     1.0 / std::sqrt(static_cast<double>(spec.dims[j]))));

  // Event cluster centers, norm 3 so positives stand clear of the unit
  // Gaussian background.
  std::vector<Eigen::VectorXd> centers;
  for (std::size_t e = 0; e < spec.n_events; ++e) {
    Eigen::VectorXd c = gaussian_matrix(k, 1, 1.0).col(0);
    centers.push_back(3.0 * c / c.norm());
  }
  // The last n_events term rows are event indicators: aligned with one
  // cluster direction and scaled so the threshold is rarely crossed by
  // background videos.
  for (std::size_t e = 0; e < spec.n_events; ++e) {
    const Eigen::Index row = m - static_cast<Eigen::Index>(spec.n_events - e);
    if (row >= 0)
      A_true.row(row) =
          (spec.term_threshold / 2.5) * (centers[e] / centers[e].norm()).transpose();
  }

  // Latent targets: positives cluster at their event center.
  const auto perm = random_permutation(spec.n_videos, gen);
  std::vector<std::ptrdiff_t> event_of(spec.n_videos, -1);
  {
    std::size_t cursor = 0;
    for (std::size_t e = 0; e < spec.n_events; ++e)
      for (std::size_t p = 0; p < spec.positives_per_event; ++p)
        event_of[perm[cursor++]] = static_cast<std::ptrdiff_t>(e);
  }
  // Background videos draw from k_true fixed prototypes and positives sit
  // exactly at their event center; all spread comes from noise_sigma. A
  // noiseless corpus therefore has at most k_true + n_events distinct latent
  // columns, so with no events Y is exactly rank <= k_true.
  std::vector<Eigen::VectorXd> prototypes;
  for (Eigen::Index p = 0; p < k; ++p)
    prototypes.push_back(gaussian_matrix(k, 1, 1.0).col(0));
  Eigen::MatrixXd S_target(k, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const std::ptrdiff_t e = event_of[static_cast<std::size_t>(i)];
    if (e >= 0) {
      S_target.col(i) = centers[static_cast<std::size_t>(e)];
    } else {
      S_target.col(i) = prototypes[static_cast<std::size_t>(gen() % spec.k_true)];
    }
  }

  // Features reproduce the latent target through the true projections:
  // x^j = B_j s / J with W^jT B_j = I, so sum_j W^jT x^j = s exactly.
  std::vector<Eigen::MatrixXd> basis;
  for (const auto& W : W_true) {
    const Eigen::MatrixXd gram = W.transpose() * W;  // k x k
    basis.push_back(W * gram.inverse());
  }
  std::vector<Eigen::MatrixXd> features_rows;  // N x D_j
  for (std::size_t j = 0; j < j_count; ++j)
    features_rows.push_back(
        (basis[j] * S_target / static_cast<double>(j_count)).transpose());

  // Realized latent: exact reconstruction plus optional Gaussian noise.
  Eigen::MatrixXd S_true = Eigen::MatrixXd::Zero(k, n);
  for (std::size_t j = 0; j < j_count; ++j)
    S_true += W_true[j].transpose() * features_rows[j].transpose();
  if (spec.noise_sigma > 0) S_true += gaussian_matrix(k, n, spec.noise_sigma);

  // Terms by thresholded activation.
  const Eigen::MatrixXd activation = A_true * S_true;  // m x n
  std::vector<std::uint32_t> counts_raw(static_cast<std::size_t>(m), 0);
  for (Eigen::Index t = 0; t < m; ++t)
    for (Eigen::Index i = 0; i < n; ++i)
      if (activation(t, i) > spec.term_threshold)
        ++counts_raw[static_cast<std::size_t>(t)];

  auto term_name = [&](Eigen::Index t) {
    std::string num = std::to_string(t);
    return "term" + std::string(5 - std::min<std::size_t>(5, num.size()), '0') + num;
  };

  // Keep terms that occur at least once, ordered by descending count then
  // name, matching the vocabulary convention.
  std::vector<Eigen::Index> kept;
  for (Eigen::Index t = 0; t < m; ++t)
    if (counts_raw[static_cast<std::size_t>(t)] > 0) kept.push_back(t);
  std::sort(kept.begin(), kept.end(), [&](Eigen::Index a, Eigen::Index b) {
    const auto ca = counts_raw[static_cast<std::size_t>(a)];
    const auto cb = counts_raw[static_cast<std::size_t>(b)];
    if (ca != cb) return ca > cb;
    return term_name(a) < term_name(b);
  });

  SynthResult result;
  TermVocabulary vocab;
  std::vector<Eigen::Index> new_index(static_cast<std::size_t>(m), -1);
  for (std::size_t pos = 0; pos < kept.size(); ++pos) {
    const Eigen::Index t = kept[pos];
    new_index[static_cast<std::size_t>(t)] = static_cast<Eigen::Index>(pos);
    vocab.terms.push_back(term_name(t));
    vocab.counts.push_back(counts_raw[static_cast<std::size_t>(t)]);
    vocab.index.emplace(vocab.terms.back(), static_cast<std::uint32_t>(pos));
  }

  TermMatrix tm;
  tm.term_count = kept.size();
  tm.columns.resize(spec.n_videos);
  for (Eigen::Index i = 0; i < n; ++i) {
    std::vector<std::uint32_t> indices;
    for (Eigen::Index t : kept)
      if (activation(t, i) > spec.term_threshold)
        indices.push_back(
            static_cast<std::uint32_t>(new_index[static_cast<std::size_t>(t)]));
    std::sort(indices.begin(), indices.end());
    tm.columns[static_cast<std::size_t>(i)] = std::move(indices);
  }

  std::vector<std::string> video_ids;
  for (Eigen::Index i = 0; i < n; ++i) {
    std::string num = std::to_string(i);
    video_ids.push_back("v" + std::string(6 - std::min<std::size_t>(6, num.size()), '0') +
                        num);
  }

  result.corpus.vocabulary = std::move(vocab);
  result.corpus.term_matrix = std::move(tm);
  result.corpus.video_ids = video_ids;
  static const char* kModalityNames[] = {"mod0", "mod1", "mod2", "mod3"};
  for (std::size_t j = 0; j < j_count; ++j) {
    FeatureMatrix fm;
    fm.modality = j < 4 ? kModalityNames[j] : "mod" + std::to_string(j);
    // Stored at float32 precision so file round-trips are bit-identical.
    fm.values = features_rows[j].cast<float>().cast<double>();
    fm.video_ids = video_ids;
    result.corpus.features.push_back(std::move(fm));
  }
  result.corpus.validate();

  // Event definitions: the indicator term plus the most activated terms at
  // the cluster center.
  for (std::size_t e = 0; e < spec.n_events; ++e) {
    const Eigen::VectorXd center_activation = A_true * centers[e];
    EventDefinition def;
    def.event_id = "e" + std::to_string(e);
    def.title = "planted event " + std::to_string(e);
    std::vector<std::pair<double, Eigen::Index>> ranked;
    for (Eigen::Index t : kept)
      ranked.emplace_back(center_activation(t), t);
    std::sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
      if (a.first != b.first) return a.first > b.first;
      return a.second < b.second;
    });
    std::string text;
    const std::size_t n_terms_def = std::min<std::size_t>(5, ranked.size());
    for (std::size_t r = 0; r < n_terms_def; ++r) {
      if (!text.empty()) text += " ";
      text += term_name(ranked[r].second);
    }
    const Eigen::Index indicator_row = m - static_cast<Eigen::Index>(spec.n_events - e);
    if (indicator_row >= 0 && new_index[static_cast<std::size_t>(indicator_row)] >= 0)
      text += " " + term_name(indicator_row);
    def.definition = text;
    result.events.push_back(std::move(def));

    LabeledSet labels;
    labels.event_id = "e" + std::to_string(e);
    labels.video_ids = video_ids;
    labels.labels.resize(spec.n_videos, 0);
    for (std::size_t i = 0; i < spec.n_videos; ++i)
      if (event_of[i] == static_cast<std::ptrdiff_t>(e)) labels.labels[i] = 1;
    result.labels.push_back(std::move(labels));
  }
  return result;
}

}  // namespace videostory::oracle
