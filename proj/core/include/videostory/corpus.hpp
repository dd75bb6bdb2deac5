#ifndef VIDEOSTORY_CORPUS_HPP
#define VIDEOSTORY_CORPUS_HPP

#include <Eigen/Dense>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

namespace videostory {

struct Description {
  std::string video_id;
  std::string text;
};

// Ordered term <-> index bijection with per-term document counts.
// Order is descending count, ties lexicographically ascending, so the
// m most frequent terms are always a prefix.
struct TermVocabulary {
  std::vector<std::string> terms;
  std::vector<std::uint32_t> counts;
  std::unordered_map<std::string, std::uint32_t> index;

  std::size_t size() const { return terms.size(); }

  std::optional<std::uint32_t> find(const std::string& term) const {
    auto it = index.find(term);
    if (it == index.end()) return std::nullopt;
    return it->second;
  }
};

// Binary M x N term-document matrix, stored as per-video sorted index lists.
struct TermMatrix {
  std::size_t term_count = 0;                        // M
  std::vector<std::vector<std::uint32_t>> columns;   // one per video

  std::size_t video_count() const { return columns.size(); }
  Eigen::MatrixXd to_dense() const;                  // M x N
  Eigen::VectorXd column_dense(std::size_t i) const; // y_i
};

// Dense per-modality features, one row per video.
struct FeatureMatrix {
  std::string modality;
  Eigen::MatrixXd values;  // N x D
  std::vector<std::string> video_ids;

  std::size_t video_count() const { return static_cast<std::size_t>(values.rows()); }
  std::size_t dim() const { return static_cast<std::size_t>(values.cols()); }
};

struct Corpus {
  TermVocabulary vocabulary;
  TermMatrix term_matrix;
  std::vector<FeatureMatrix> features;
  std::vector<std::string> video_ids;

  std::size_t video_count() const { return video_ids.size(); }
  std::size_t modality_count() const { return features.size(); }
  void validate() const;  // throws on any broken invariant
};

// Lowercased tokens split on any non-alphanumeric byte.
std::vector<std::string> tokenize(std::string_view text);

TermVocabulary build_vocabulary(const std::vector<Description>& descriptions,
                                std::uint32_t min_occurrences);

TermMatrix encode_term_matrix(const std::vector<Description>& descriptions,
                              const TermVocabulary& vocab);

// Checks that every feature matrix covers exactly the description ids in the
// same order; throws IdMismatch otherwise.
Corpus make_corpus(TermVocabulary vocab,
                   const std::vector<Description>& descriptions,
                   std::vector<FeatureMatrix> features);

std::pair<Corpus, Corpus> split_corpus(const Corpus& corpus,
                                       double train_fraction,
                                       std::uint64_t seed);

// Single-modality corpus whose features are all modalities concatenated.
Corpus concat_modalities(const Corpus& corpus);

// Corpus restricted to one modality (shares vocabulary and term matrix).
Corpus select_modality(const Corpus& corpus, std::size_t modality_index);

}  // namespace videostory

#endif
