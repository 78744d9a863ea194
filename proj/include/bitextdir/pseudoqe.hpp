#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "bitextdir/corpus.hpp"
#include "bitextdir/ter.hpp"

namespace bitextdir {

/// One synthetic QE example. `mt` and `ref` are stored tokenized; tags align
/// with `mt`.
struct PseudoQERecord {
  std::string src;
  std::vector<std::string> mt;
  std::vector<std::string> ref;
  double sentence_score = 0.0;
  std::vector<QualityTag> tgt_tags;
  std::vector<QualityTag> gap_tags;

  friend bool operator==(const PseudoQERecord&, const PseudoQERecord&) = default;
};

/// Tokenizer used for pseudo labels: CJK-aware and case-sensitive.
inline TokenizerConfig default_label_tokenizer() {
  return {TokenizerMode::CharPerCjkElseWhitespace, false};
}

/// Scores `mt_line` against pair.tgt. A missing hypothesis (nullopt) raises
/// MissingMtLine.
PseudoQERecord make_pseudo_record(const SentencePair& pair,
                                  std::optional<std::string_view> mt_line,
                                  const TokenizerConfig& tok_cfg = default_label_tokenizer(),
                                  const TerOptions& ter_opts = {});

// ---------------------------------------------------------------------------
// WMT QE file layout: <prefix>.src .mt .pe .hter .tags [.gap_tags]
// ---------------------------------------------------------------------------

struct QeDatasetPaths {
  std::filesystem::path src, mt, pe, hter, tags, gap_tags;
};

QeDatasetPaths qe_paths(const std::filesystem::path& prefix);

/// Writes the dataset; returns the files written.
std::vector<std::filesystem::path> write_qe_dataset(const std::filesystem::path& prefix,
                                                    const std::vector<PseudoQERecord>& records,
                                                    bool with_gap_tags);

/// Reads a dataset written by write_qe_dataset (gap tags loaded if present).
std::vector<PseudoQERecord> read_qe_dataset(const std::filesystem::path& prefix);

struct FormatReport {
  std::size_t n_records = 0;
  bool has_gap_tags = false;
  std::vector<std::string> problems;  // "file:line: message"

  bool ok() const noexcept { return problems.empty(); }
};

/// Checks line counts, score range and formatting, tag vocabulary, and that
/// tag counts agree with the whitespace-token count of each .mt line.
FormatReport validate_format(const std::filesystem::path& prefix);

std::string format_score(double score);

}  // namespace bitextdir
