#include "videostory/corpus.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <map>
#include <set>
#include <unordered_set>

#include "videostory/errors.hpp"
#include "videostory/rng.hpp"

namespace videostory {

Eigen::MatrixXd TermMatrix::to_dense() const {
  Eigen::MatrixXd dense = Eigen::MatrixXd::Zero(
      static_cast<Eigen::Index>(term_count),
      static_cast<Eigen::Index>(columns.size()));
  for (std::size_t i = 0; i < columns.size(); ++i)
    for (std::uint32_t j : columns[i])
      dense(j, static_cast<Eigen::Index>(i)) = 1.0;
  return dense;
}

Eigen::VectorXd TermMatrix::column_dense(std::size_t i) const {
  Eigen::VectorXd y = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(term_count));
  for (std::uint32_t j : columns.at(i)) y(j) = 1.0;
  return y;
}

void Corpus::validate() const {
  const std::size_t n = video_ids.size();
  if (term_matrix.video_count() != n)
    throw Error("IdMismatch", "term matrix column count differs from video id count");
  if (features.empty())
    throw Error("EmptyCorpus", "corpus has no feature modalities");
  if (term_matrix.term_count != vocabulary.size())
    throw Error("ShapeMismatch", "term matrix row count differs from vocabulary size");
  std::unordered_set<std::string> seen;
  for (const auto& id : video_ids)
    if (!seen.insert(id).second)
      throw Error("IdMismatch", "duplicate video id: " + id);
  for (const auto& fm : features) {
    if (fm.video_count() != n || fm.video_ids.size() != n)
      throw Error("IdMismatch", "modality '" + fm.modality + "' video count mismatch");
    for (std::size_t i = 0; i < n; ++i)
      if (fm.video_ids[i] != video_ids[i])
        throw Error("IdMismatch", "modality '" + fm.modality + "' id order mismatch at row " +
                                      std::to_string(i));
    if (!fm.values.allFinite())
      throw Error("NonFinite", "modality '" + fm.modality + "' contains non-finite values");
  }
}

std::vector<std::string> tokenize(std::string_view text) {
  std::vector<std::string> tokens;
  std::string current;
  for (char c : text) {
    const auto uc = static_cast<unsigned char>(c);
    if (std::isalnum(uc)) {
      current.push_back(static_cast<char>(std::tolower(uc)));
    } else if (!current.empty()) {
      tokens.push_back(std::move(current));
      current.clear();
    }
  }
  if (!current.empty()) tokens.push_back(std::move(current));
  return tokens;
}

TermVocabulary build_vocabulary(const std::vector<Description>& descriptions,
                                std::uint32_t min_occurrences) {
  if (descriptions.empty())
    throw Error("EmptyCorpus", "cannot build a vocabulary from zero descriptions");
  if (min_occurrences < 1)
    throw Error("BadParam", "min_occurrences must be >= 1");

  std::map<std::string, std::uint32_t> doc_counts;
  for (const auto& d : descriptions) {
    std::set<std::string> present;
    for (auto& tok : tokenize(d.text)) present.insert(std::move(tok));
    for (const auto& t : present) ++doc_counts[t];
  }

  std::vector<std::pair<std::string, std::uint32_t>> kept;
  for (auto& [term, count] : doc_counts)
    if (count >= min_occurrences) kept.emplace_back(term, count);

  std::sort(kept.begin(), kept.end(), [](const auto& a, const auto& b) {
    if (a.second != b.second) return a.second > b.second;
    return a.first < b.first;
  });

  TermVocabulary vocab;
  vocab.terms.reserve(kept.size());
  vocab.counts.reserve(kept.size());
  for (std::size_t i = 0; i < kept.size(); ++i) {
    vocab.terms.push_back(kept[i].first);
    vocab.counts.push_back(kept[i].second);
    vocab.index.emplace(kept[i].first, static_cast<std::uint32_t>(i));
  }
  return vocab;
}

TermMatrix encode_term_matrix(const std::vector<Description>& descriptions,
                              const TermVocabulary& vocab) {
  TermMatrix tm;
  tm.term_count = vocab.size();
  tm.columns.reserve(descriptions.size());
  for (const auto& d : descriptions) {
    std::set<std::uint32_t> indices;
    for (const auto& tok : tokenize(d.text))
      if (auto idx = vocab.find(tok)) indices.insert(*idx);
    tm.columns.emplace_back(indices.begin(), indices.end());
  }
  return tm;
}

Corpus make_corpus(TermVocabulary vocab,
                   const std::vector<Description>& descriptions,
                   std::vector<FeatureMatrix> features) {
  Corpus corpus;
  corpus.term_matrix = encode_term_matrix(descriptions, vocab);
  corpus.vocabulary = std::move(vocab);
  corpus.features = std::move(features);
  for (const auto& d : descriptions) corpus.video_ids.push_back(d.video_id);
  corpus.validate();
  return corpus;
}

std::pair<Corpus, Corpus> split_corpus(const Corpus& corpus,
                                       double train_fraction,
                                       std::uint64_t seed) {
  if (!(train_fraction > 0.0 && train_fraction < 1.0))
    throw Error("BadParam", "train_fraction must lie strictly in (0, 1)");
  const std::size_t n = corpus.video_count();
  if (n < 2) throw Error("TooFewVideos", "need at least 2 videos to split");

  std::mt19937_64 gen(seed);
  const auto perm = random_permutation(n, gen);
  const auto n_train = static_cast<std::size_t>(
      std::ceil(train_fraction * static_cast<double>(n)));

  auto take = [&](std::size_t begin, std::size_t end) {
    std::vector<std::size_t> idx(perm.begin() + static_cast<std::ptrdiff_t>(begin),
                                 perm.begin() + static_cast<std::ptrdiff_t>(end));
    Corpus part;
    part.vocabulary = corpus.vocabulary;
    part.term_matrix.term_count = corpus.term_matrix.term_count;
    for (std::size_t i : idx) {
      part.term_matrix.columns.push_back(corpus.term_matrix.columns[i]);
      part.video_ids.push_back(corpus.video_ids[i]);
    }
    for (const auto& fm : corpus.features) {
      FeatureMatrix out;
      out.modality = fm.modality;
      out.values.resize(static_cast<Eigen::Index>(idx.size()), fm.values.cols());
      for (std::size_t r = 0; r < idx.size(); ++r) {
        out.values.row(static_cast<Eigen::Index>(r)) =
            fm.values.row(static_cast<Eigen::Index>(idx[r]));
        out.video_ids.push_back(fm.video_ids[idx[r]]);
      }
      part.features.push_back(std::move(out));
    }
    return part;
  };

  return {take(0, n_train), take(n_train, n)};
}

Corpus concat_modalities(const Corpus& corpus) {
  if (corpus.features.size() == 1) return corpus;
  Corpus out;
  out.vocabulary = corpus.vocabulary;
  out.term_matrix = corpus.term_matrix;
  out.video_ids = corpus.video_ids;

  Eigen::Index total_dim = 0;
  for (const auto& fm : corpus.features) total_dim += fm.values.cols();

  FeatureMatrix merged;
  merged.modality = "concat";
  merged.video_ids = corpus.video_ids;
  merged.values.resize(static_cast<Eigen::Index>(corpus.video_count()), total_dim);
  Eigen::Index offset = 0;
  for (const auto& fm : corpus.features) {
    merged.values.middleCols(offset, fm.values.cols()) = fm.values;
    offset += fm.values.cols();
  }
  out.features.push_back(std::move(merged));
  return out;
}

Corpus select_modality(const Corpus& corpus, std::size_t modality_index) {
  if (modality_index >= corpus.features.size())
    throw Error("BadParam", "modality index out of range");
  Corpus out;
  out.vocabulary = corpus.vocabulary;
  out.term_matrix = corpus.term_matrix;
  out.video_ids = corpus.video_ids;
  out.features.push_back(corpus.features[modality_index]);
  return out;
}

}  // namespace videostory
