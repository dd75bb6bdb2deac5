#include "videostory/model_io.hpp"

#include <openssl/sha.h>

#include <cstring>
#include <fstream>
#include <sstream>

#include "videostory/errors.hpp"

namespace videostory {

namespace {

void write_u32(std::ostream& out, std::uint32_t v) {
  unsigned char buf[4];
  for (int i = 0; i < 4; ++i) buf[i] = static_cast<unsigned char>((v >> (8 * i)) & 0xff);
  out.write(reinterpret_cast<const char*>(buf), 4);
}

void write_u64(std::ostream& out, std::uint64_t v) {
  unsigned char buf[8];
  for (int i = 0; i < 8; ++i) buf[i] = static_cast<unsigned char>((v >> (8 * i)) & 0xff);
  out.write(reinterpret_cast<const char*>(buf), 8);
}

void write_f64(std::ostream& out, double v) {
  std::uint64_t bits;
  std::memcpy(&bits, &v, 8);
  write_u64(out, bits);
}

std::uint32_t read_u32(std::istream& in) {
  unsigned char buf[4];
  in.read(reinterpret_cast<char*>(buf), 4);
  if (!in) throw Error("IoError", "truncated model file");
  std::uint32_t v = 0;
  for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(buf[i]) << (8 * i);
  return v;
}

std::uint64_t read_u64(std::istream& in) {
  unsigned char buf[8];
  in.read(reinterpret_cast<char*>(buf), 8);
  if (!in) throw Error("IoError", "truncated model file");
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(buf[i]) << (8 * i);
  return v;
}

double read_f64(std::istream& in) {
  const std::uint64_t bits = read_u64(in);
  double v;
  std::memcpy(&v, &bits, 8);
  return v;
}

void write_matrix(std::ostream& out, const Eigen::MatrixXd& mat) {
  for (Eigen::Index r = 0; r < mat.rows(); ++r)
    for (Eigen::Index c = 0; c < mat.cols(); ++c) write_f64(out, mat(r, c));
}

Eigen::MatrixXd read_matrix(std::istream& in, Eigen::Index rows, Eigen::Index cols) {
  Eigen::MatrixXd mat(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r)
    for (Eigen::Index c = 0; c < cols; ++c) mat(r, c) = read_f64(in);
  return mat;
}

}  // namespace

std::array<unsigned char, 32> vocabulary_fingerprint(const TermVocabulary& vocab) {
  std::ostringstream text;
  for (std::size_t i = 0; i < vocab.terms.size(); ++i)
    text << vocab.terms[i] << '\t' << vocab.counts[i] << '\n';
  const std::string data = text.str();
  std::array<unsigned char, 32> digest{};
  SHA256(reinterpret_cast<const unsigned char*>(data.data()), data.size(),
         digest.data());
  return digest;
}

void save_model(const std::filesystem::path& path, const MultimodalModel& model) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("IoError", "cannot open " + path.string() + " for writing");
  out.write("VSM1", 4);
  write_u32(out, 1);  // version
  write_u32(out, static_cast<std::uint32_t>(model.A.rows()));
  write_u32(out, static_cast<std::uint32_t>(model.A.cols()));
  write_u32(out, static_cast<std::uint32_t>(model.projections.size()));
  write_matrix(out, model.A);
  for (const auto& W : model.projections) {
    write_u32(out, static_cast<std::uint32_t>(W.rows()));
    write_matrix(out, W);
  }
  const auto& hp = model.hyperparams;
  write_f64(out, hp.lambda_a);
  write_f64(out, hp.lambda_s);
  write_f64(out, hp.lambda_w);
  write_f64(out, hp.eta);
  write_f64(out, model.alpha);
  write_u32(out, static_cast<std::uint32_t>(hp.epochs));
  write_u64(out, hp.seed);
  out.write(reinterpret_cast<const char*>(model.vocab_fingerprint.data()), 32);
  if (!out) throw Error("IoError", "failed writing " + path.string());
}

MultimodalModel load_model(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("IoError", "cannot open " + path.string() + " for reading");
  char magic[4];
  in.read(magic, 4);
  if (!in || std::memcmp(magic, "VSM1", 4) != 0)
    throw Error("ParseError", path.string() + " is not a VSM1 model file");
  const std::uint32_t version = read_u32(in);
  if (version != 1)
    throw Error("ParseError", "unsupported model version " + std::to_string(version));
  const std::uint32_t m = read_u32(in);
  const std::uint32_t k = read_u32(in);
  const std::uint32_t j_count = read_u32(in);

  MultimodalModel model;
  model.A = read_matrix(in, m, k);
  for (std::uint32_t j = 0; j < j_count; ++j) {
    const std::uint32_t d = read_u32(in);
    model.projections.push_back(read_matrix(in, d, k));
    model.modalities.push_back("mod" + std::to_string(j));
  }
  model.gammas.assign(j_count, 1.0);
  model.hyperparams.k = k;
  model.hyperparams.lambda_a = read_f64(in);
  model.hyperparams.lambda_s = read_f64(in);
  model.hyperparams.lambda_w = read_f64(in);
  model.hyperparams.eta = read_f64(in);
  model.alpha = read_f64(in);
  model.hyperparams.epochs = read_u32(in);
  model.hyperparams.seed = read_u64(in);
  in.read(reinterpret_cast<char*>(model.vocab_fingerprint.data()), 32);
  if (!in) throw Error("IoError", "truncated model file " + path.string());
  return model;
}

void save_term_attribute_model(const std::filesystem::path& path,
                               const TermAttributeModel& model) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("IoError", "cannot open " + path.string() + " for writing");
  out << "VSA1\n";
  out << model.selected_terms.size() << ' ' << model.feature_dim() << '\n';
  for (std::size_t i = 0; i < model.selected_terms.size(); ++i) {
    if (i) out << ' ';
    out << model.selected_terms[i];
  }
  out << '\n';
  write_matrix(out, model.weights);
  if (!out) throw Error("IoError", "failed writing " + path.string());
}

TermAttributeModel load_term_attribute_model(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("IoError", "cannot open " + path.string() + " for reading");
  std::string magic;
  std::getline(in, magic);
  if (magic != "VSA1")
    throw Error("ParseError", path.string() + " is not a VSA1 model file");
  std::size_t m_sel, d;
  in >> m_sel >> d;
  TermAttributeModel model;
  model.selected_terms.resize(m_sel);
  for (auto& t : model.selected_terms) in >> t;
  in.ignore(1);  // trailing newline before the binary block
  if (!in) throw Error("ParseError", "bad VSA1 header in " + path.string());
  model.weights = read_matrix(in, static_cast<Eigen::Index>(m_sel),
                              static_cast<Eigen::Index>(d + 1));
  return model;
}

}  // namespace videostory
