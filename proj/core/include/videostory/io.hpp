#ifndef VIDEOSTORY_IO_HPP
#define VIDEOSTORY_IO_HPP

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "videostory/corpus.hpp"
#include "videostory/eval.hpp"
#include "videostory/zeroshot.hpp"

namespace videostory {

// Descriptions: one line per video, `<video_id>\t<free text>`.
std::vector<Description> load_descriptions(const std::filesystem::path& path);
void save_descriptions(const std::filesystem::path& path,
                       const std::vector<Description>& descriptions);

// Vocabulary: one line per term, `<term>\t<count>`; line order is the index.
TermVocabulary load_vocabulary(const std::filesystem::path& path);
void save_vocabulary(const std::filesystem::path& path, const TermVocabulary& vocab);

// Term matrix: one line per video, `<video_id>\t<sorted indices>`.
std::pair<TermMatrix, std::vector<std::string>> load_term_matrix(
    const std::filesystem::path& path, std::size_t term_count);
void save_term_matrix(const std::filesystem::path& path, const TermMatrix& tm,
                      const std::vector<std::string>& video_ids);

// Feature file: "VSF1", u32 D, u32 N, N x D float32 LE rows; `<file>.ids`
// sidecar with one video id per line.
FeatureMatrix load_features(const std::filesystem::path& path, std::string modality);
void save_features(const std::filesystem::path& path, const FeatureMatrix& fm);

// Event definition: first line `<event_id>\t<title>`, rest free text.
EventDefinition load_event(const std::filesystem::path& path);
void save_event(const std::filesystem::path& path, const EventDefinition& event);

// Rankings: `rank\tvideo_id\tscore`, 9 significant digits.
void save_ranking(const std::filesystem::path& path, const Ranking& ranking);
Ranking load_ranking(const std::filesystem::path& path, std::string event_id = "");

// Labels: `event_id\tvideo_id\t0|1` lines, grouped into per-event sets.
std::vector<LabeledSet> load_labels(const std::filesystem::path& path);
void save_labels(const std::filesystem::path& path,
                 const std::vector<LabeledSet>& labels);

// Metrics report: `event_id\tap\tn_pos\tn_total` lines then `mAP\t<value>`.
void save_report(const std::filesystem::path& path,
                 const std::vector<APResult>& results, double map);

// 9 significant digits, round-half-even.
std::string format_sig9(double value);

}  // namespace videostory

#endif
