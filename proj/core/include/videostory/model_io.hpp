#ifndef VIDEOSTORY_MODEL_IO_HPP
#define VIDEOSTORY_MODEL_IO_HPP

#include <array>
#include <filesystem>

#include "videostory/baselines.hpp"
#include "videostory/corpus.hpp"
#include "videostory/fusion.hpp"

namespace videostory {

// SHA-256 over the vocabulary file representation (`term\tcount\n` per term).
std::array<unsigned char, 32> vocabulary_fingerprint(const TermVocabulary& vocab);

// "VSM1" model format: magic, u32 version, u32 M, u32 k, u32 J, A (f64 LE
// row-major), per modality u32 D_j + W^j, then lambda_a, lambda_s, lambda_w,
// eta, alpha (f64), u32 epochs, u64 seed, 32-byte vocabulary fingerprint.
void save_model(const std::filesystem::path& path, const MultimodalModel& model);
MultimodalModel load_model(const std::filesystem::path& path);

// "VSA1" term-attribute format: text header (magic, m_sel and D, selected
// term indices), then the m_sel x (D+1) weight matrix as float64 LE.
void save_term_attribute_model(const std::filesystem::path& path,
                               const TermAttributeModel& model);
TermAttributeModel load_term_attribute_model(const std::filesystem::path& path);

}  // namespace videostory

#endif
