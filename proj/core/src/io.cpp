#include "videostory/io.hpp"

#include <algorithm>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>
#include <unordered_map>

#include "videostory/errors.hpp"

namespace videostory {

namespace {

std::ifstream open_in(const std::filesystem::path& path, bool binary = false) {
  std::ifstream in(path, binary ? std::ios::binary : std::ios::in);
  if (!in) throw Error("IoError", "cannot open " + path.string() + " for reading");
  return in;
}

std::ofstream open_out(const std::filesystem::path& path, bool binary = false) {
  std::ofstream out(path, binary ? std::ios::binary : std::ios::out);
  if (!out) throw Error("IoError", "cannot open " + path.string() + " for writing");
  return out;
}

void write_u32(std::ostream& out, std::uint32_t v) {
  unsigned char buf[4];
  for (int i = 0; i < 4; ++i) buf[i] = static_cast<unsigned char>((v >> (8 * i)) & 0xff);
  out.write(reinterpret_cast<const char*>(buf), 4);
}

std::uint32_t read_u32(std::istream& in) {
  unsigned char buf[4];
  in.read(reinterpret_cast<char*>(buf), 4);
  if (!in) throw Error("IoError", "truncated binary file");
  std::uint32_t v = 0;
  for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(buf[i]) << (8 * i);
  return v;
}

}  // namespace

std::string format_sig9(double value) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.9g", value);
  return buf;
}

std::vector<Description> load_descriptions(const std::filesystem::path& path) {
  auto in = open_in(path);
  std::vector<Description> out;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto tab = line.find('\t');
    if (tab == std::string::npos)
      throw Error("ParseError", "descriptions line without tab: " + line);
    out.push_back({line.substr(0, tab), line.substr(tab + 1)});
  }
  return out;
}

void save_descriptions(const std::filesystem::path& path,
                       const std::vector<Description>& descriptions) {
  auto out = open_out(path);
  for (const auto& d : descriptions) out << d.video_id << '\t' << d.text << '\n';
}

TermVocabulary load_vocabulary(const std::filesystem::path& path) {
  auto in = open_in(path);
  TermVocabulary vocab;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto tab = line.find('\t');
    if (tab == std::string::npos)
      throw Error("ParseError", "vocabulary line without tab: " + line);
    const std::string term = line.substr(0, tab);
    vocab.counts.push_back(static_cast<std::uint32_t>(std::stoul(line.substr(tab + 1))));
    vocab.index.emplace(term, static_cast<std::uint32_t>(vocab.terms.size()));
    vocab.terms.push_back(term);
  }
  return vocab;
}

void save_vocabulary(const std::filesystem::path& path, const TermVocabulary& vocab) {
  auto out = open_out(path);
  for (std::size_t i = 0; i < vocab.terms.size(); ++i)
    out << vocab.terms[i] << '\t' << vocab.counts[i] << '\n';
}

std::pair<TermMatrix, std::vector<std::string>> load_term_matrix(
    const std::filesystem::path& path, std::size_t term_count) {
  auto in = open_in(path);
  TermMatrix tm;
  tm.term_count = term_count;
  std::vector<std::string> ids;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto tab = line.find('\t');
    if (tab == std::string::npos)
      throw Error("ParseError", "term-matrix line without tab: " + line);
    ids.push_back(line.substr(0, tab));
    std::istringstream rest(line.substr(tab + 1));
    std::vector<std::uint32_t> indices;
    std::uint32_t idx;
    while (rest >> idx) {
      if (idx >= term_count)
        throw Error("ParseError", "term index out of range in " + path.string());
      indices.push_back(idx);
    }
    for (std::size_t i = 1; i < indices.size(); ++i)
      if (indices[i] <= indices[i - 1])
        throw Error("ParseError", "term indices not strictly ascending for " + ids.back());
    tm.columns.push_back(std::move(indices));
  }
  return {std::move(tm), std::move(ids)};
}

void save_term_matrix(const std::filesystem::path& path, const TermMatrix& tm,
                      const std::vector<std::string>& video_ids) {
  if (video_ids.size() != tm.video_count())
    throw Error("ShapeMismatch", "video id count differs from term matrix columns");
  auto out = open_out(path);
  for (std::size_t i = 0; i < video_ids.size(); ++i) {
    out << video_ids[i] << '\t';
    for (std::size_t j = 0; j < tm.columns[i].size(); ++j) {
      if (j) out << ' ';
      out << tm.columns[i][j];
    }
    out << '\n';
  }
}

FeatureMatrix load_features(const std::filesystem::path& path, std::string modality) {
  auto in = open_in(path, true);
  char magic[4];
  in.read(magic, 4);
  if (!in || std::memcmp(magic, "VSF1", 4) != 0)
    throw Error("ParseError", path.string() + " is not a VSF1 feature file");
  const std::uint32_t d = read_u32(in);
  const std::uint32_t n = read_u32(in);

  FeatureMatrix fm;
  fm.modality = std::move(modality);
  fm.values.resize(n, d);
  std::vector<float> row(d);
  for (std::uint32_t i = 0; i < n; ++i) {
    in.read(reinterpret_cast<char*>(row.data()),
            static_cast<std::streamsize>(sizeof(float) * d));
    if (!in) throw Error("IoError", "truncated feature file " + path.string());
    for (std::uint32_t c = 0; c < d; ++c) fm.values(i, c) = row[c];
  }

  auto ids_path = path;
  ids_path += ".ids";
  auto ids_in = open_in(ids_path);
  std::string line;
  while (std::getline(ids_in, line))
    if (!line.empty()) fm.video_ids.push_back(line);
  if (fm.video_ids.size() != n)
    throw Error("IdMismatch", "sidecar " + ids_path.string() + " lists " +
                                  std::to_string(fm.video_ids.size()) + " ids, expected " +
                                  std::to_string(n));
  return fm;
}

void save_features(const std::filesystem::path& path, const FeatureMatrix& fm) {
  auto out = open_out(path, true);
  out.write("VSF1", 4);
  write_u32(out, static_cast<std::uint32_t>(fm.dim()));
  write_u32(out, static_cast<std::uint32_t>(fm.video_count()));
  std::vector<float> row(fm.dim());
  for (Eigen::Index i = 0; i < fm.values.rows(); ++i) {
    for (Eigen::Index c = 0; c < fm.values.cols(); ++c)
      row[static_cast<std::size_t>(c)] = static_cast<float>(fm.values(i, c));
    out.write(reinterpret_cast<const char*>(row.data()),
              static_cast<std::streamsize>(sizeof(float) * row.size()));
  }
  auto ids_path = path;
  ids_path += ".ids";
  auto ids_out = open_out(ids_path);
  for (const auto& id : fm.video_ids) ids_out << id << '\n';
}

EventDefinition load_event(const std::filesystem::path& path) {
  auto in = open_in(path);
  std::string line;
  if (!std::getline(in, line))
    throw Error("ParseError", "empty event file " + path.string());
  const auto tab = line.find('\t');
  if (tab == std::string::npos)
    throw Error("ParseError", "event header line without tab: " + line);
  EventDefinition event;
  event.event_id = line.substr(0, tab);
  event.title = line.substr(tab + 1);
  std::string definition;
  while (std::getline(in, line)) {
    if (!definition.empty()) definition += "\n";
    definition += line;
  }
  event.definition = definition;
  if (event.title.empty() && event.definition.empty())
    throw Error("ParseError", "event " + event.event_id + " has no text");
  return event;
}

void save_event(const std::filesystem::path& path, const EventDefinition& event) {
  auto out = open_out(path);
  out << event.event_id << '\t' << event.title << '\n';
  if (!event.definition.empty()) out << event.definition << '\n';
}

void save_ranking(const std::filesystem::path& path, const Ranking& ranking) {
  auto out = open_out(path);
  for (std::size_t i = 0; i < ranking.entries.size(); ++i)
    out << (i + 1) << '\t' << ranking.entries[i].video_id << '\t'
        << format_sig9(ranking.entries[i].score) << '\n';
}

Ranking load_ranking(const std::filesystem::path& path, std::string event_id) {
  auto in = open_in(path);
  Ranking ranking;
  ranking.event_id = std::move(event_id);
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream ss(line);
    std::size_t rank;
    RankEntry entry;
    if (!(ss >> rank >> entry.video_id >> entry.score))
      throw Error("ParseError", "bad ranking line: " + line);
    ranking.entries.push_back(std::move(entry));
  }
  return ranking;
}

std::vector<LabeledSet> load_labels(const std::filesystem::path& path) {
  auto in = open_in(path);
  std::vector<LabeledSet> sets;
  std::unordered_map<std::string, std::size_t> by_event;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream ss(line);
    std::string event_id, video_id;
    int label;
    if (!(ss >> event_id >> video_id >> label))
      throw Error("ParseError", "bad labels line: " + line);
    auto [it, inserted] = by_event.try_emplace(event_id, sets.size());
    if (inserted) sets.push_back({event_id, {}, {}});
    sets[it->second].video_ids.push_back(video_id);
    sets[it->second].labels.push_back(label);
  }
  return sets;
}

void save_labels(const std::filesystem::path& path,
                 const std::vector<LabeledSet>& labels) {
  auto out = open_out(path);
  for (const auto& set : labels)
    for (std::size_t i = 0; i < set.video_ids.size(); ++i)
      out << set.event_id << '\t' << set.video_ids[i] << '\t' << set.labels[i] << '\n';
}

void save_report(const std::filesystem::path& path,
                 const std::vector<APResult>& results, double map) {
  auto out = open_out(path);
  for (const auto& r : results)
    out << r.event_id << '\t' << format_sig9(r.ap) << '\t' << r.n_pos << '\t'
        << r.n_total << '\n';
  out << "mAP\t" << format_sig9(map) << '\n';
}

}  // namespace videostory
