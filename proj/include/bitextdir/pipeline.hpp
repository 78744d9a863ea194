#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "bitextdir/corpus.hpp"
#include "bitextdir/direction.hpp"
#include "bitextdir/pseudoqe.hpp"

namespace bitextdir {

// ---------------------------------------------------------------------------
// Balanced sampling
// ---------------------------------------------------------------------------

enum class ShortfallPolicy { TakeAll, Error };

struct SamplingPlan {
  std::size_t per_corpus_n = 1;
  std::uint64_t seed = 42;
  ShortfallPolicy shortfall = ShortfallPolicy::TakeAll;
};

/// Draws per_corpus_n pairs from every sub-corpus without replacement. Each
/// sub-corpus uses its own stream derived from (seed, name). Output is in
/// manifest order, then ascending line index.
std::vector<SentencePair> balanced_sample(const CorpusManifest& manifest, const SamplingPlan& plan);

// ---------------------------------------------------------------------------
// Direction filtering
// ---------------------------------------------------------------------------

enum class KeepPolicy { SourceOriginal, TargetOriginal, Mixed };

std::string_view to_string(KeepPolicy keep) noexcept;
KeepPolicy parse_keep_policy(std::string_view text);

using PairKey = std::pair<std::string, std::size_t>;  // (sub_corpus, line id)
using ScoreTable = std::map<PairKey, EnsembleScore>;

ScoreTable make_score_table(std::span<const ScoreRow> rows);

struct FilterResult {
  std::vector<SentencePair> kept;
  std::size_t filtered_out = 0;
  std::size_t abstained = 0;
  bool empty_warning = false;  // nothing survived the filter
};

/// SourceOriginal keeps p >= tau; TargetOriginal keeps p <= 1 - tau except
/// p == tau (ties belong to SourceOriginal); Mixed keeps every pair.
/// Abstained pairs are excluded from both directional partitions. Kept pairs
/// get their direction from the score decision.
FilterResult filter_by_direction(std::span<const SentencePair> pairs, const ScoreTable& scores,
                                 KeepPolicy keep, double tau = 0.5);

// ---------------------------------------------------------------------------
// Real/synthetic mixing
// ---------------------------------------------------------------------------

struct MixSpec {
  std::uint64_t ratio_real = 1;
  std::uint64_t ratio_synth = 1;
  std::uint64_t seed = 42;
};

/// Parses "R:S".
MixSpec parse_mix_ratio(std::string_view text, std::uint64_t seed);

/// All real records plus floor(R * ratio_synth / ratio_real) sampled synthetic
/// records, deterministically shuffled.
std::vector<PseudoQERecord> mix_datasets(std::span<const PseudoQERecord> real,
                                         std::span<const PseudoQERecord> synth, const MixSpec& spec);

// ---------------------------------------------------------------------------
// End-to-end forge
// ---------------------------------------------------------------------------

struct ForgeConfig {
  std::filesystem::path manifest;     // corpus.manifest
  std::filesystem::path mt_manifest;  // corpus.mt: name<TAB>mt_path
  std::size_t per_corpus = 200;       // sample.per_corpus
  ShortfallPolicy shortfall = ShortfallPolicy::TakeAll;
  std::filesystem::path model_src;  // direction.model_src
  std::filesystem::path model_tgt;  // direction.model_tgt
  std::filesystem::path scores;     // direction.scores (bypass)
  double band = 0.0;                // direction.band
  KeepPolicy keep = KeepPolicy::SourceOriginal;
  double tau = 0.5;
  TokenizerConfig label_tokenizer = default_label_tokenizer();
  TerOptions ter;
  std::filesystem::path output_prefix;
  bool gap_tags = true;
  std::uint64_t seed = 42;
  std::size_t threads = 1;

  /// Canonical `section.key=value` lines, sorted; the basis of config_hash.
  std::vector<std::string> canonical() const;
};

/// Reads INI-style `[section]` / `key = value` text. Relative paths resolve
/// against the config file's directory. `overrides` are `section.key=value`
/// strings applied afterwards (relative paths resolve against the working
/// directory).
ForgeConfig load_forge_config(const std::optional<std::filesystem::path>& path,
                              std::span<const std::string> overrides);

struct StageCounts {
  std::size_t sampled = 0;
  std::size_t scored = 0;
  std::size_t kept = 0;
  std::size_t filtered_out = 0;
  std::size_t abstained = 0;
  std::size_t emitted = 0;
};

struct ForgeSummary {
  StageCounts counts;
  std::vector<std::filesystem::path> outputs;  // dataset files + run manifest
  std::filesystem::path run_manifest;
  bool empty_warning = false;
};

/// sample -> score (models or bypass TSV) -> filter -> pseudo labels -> emit.
/// Outputs are staged in a temporary directory and moved into place only on
/// success.
ForgeSummary run_forge(const ForgeConfig& config);

/// `git hash-object` style SHA-1 of a file's content.
std::string git_blob_sha1(const std::filesystem::path& path);
std::string sha1_hex(std::string_view bytes);

}  // namespace bitextdir
