#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "bitextdir/corpus.hpp"
#include "bitextdir/types.hpp"

namespace bitextdir {

struct FeatureConfig {
  std::vector<int> word_ngram_orders{1, 2};
  std::vector<int> char_ngram_orders{2, 3};
  std::uint32_t hash_buckets = 1u << 20;
  std::uint64_t hash_seed = 0;

  /// Throws InvalidArgument: orders >= 1, buckets a power of two >= 2^10.
  void validate() const;
  friend bool operator==(const FeatureConfig&, const FeatureConfig&) = default;
};

/// (bucket, count) pairs sorted by bucket, no zero counts.
using SparseFeatures = std::vector<std::pair<std::uint32_t, std::uint32_t>>;

/// Word n-grams over the token sequence plus character n-grams over the
/// tokens joined by single spaces, each hashed into `hash_buckets`.
SparseFeatures extract_features(std::span<const std::string> tokens, const FeatureConfig& cfg);

enum class TextClass : int { Original = 0, Translationese = 1 };

struct TrainingMeta {
  std::size_t n_original = 0;
  std::size_t n_translationese = 0;
  double alpha = 1.0;
  std::string version = "v1";
  friend bool operator==(const TrainingMeta&, const TrainingMeta&) = default;
};

/// Multinomial Naive Bayes over hashed n-grams for one language side.
/// Immutable once built; safe to share across threads.
class DirectionModel {
 public:
  DirectionModel(Side side, FeatureConfig features, TokenizerConfig tokenizer,
                 std::array<double, 2> class_log_priors,
                 std::vector<double> feature_log_likelihoods, TrainingMeta meta);

  Side side() const noexcept { return side_; }
  const FeatureConfig& feature_config() const noexcept { return features_; }
  const TokenizerConfig& tokenizer() const noexcept { return tokenizer_; }
  const std::array<double, 2>& class_log_priors() const noexcept { return log_priors_; }
  /// Row-major [bucket][class].
  std::span<const double> feature_log_likelihoods() const noexcept { return log_likelihoods_; }
  double log_likelihood(std::uint32_t bucket, TextClass c) const noexcept {
    return log_likelihoods_[2 * static_cast<std::size_t>(bucket) + static_cast<std::size_t>(c)];
  }
  const TrainingMeta& meta() const noexcept { return meta_; }

  /// Posterior probability that the text is original.
  double predict(const SparseFeatures& features) const;
  double predict_tokens(std::span<const std::string> tokens) const;
  double predict_text(std::string_view text) const;

  friend bool operator==(const DirectionModel&, const DirectionModel&) = default;

 private:
  Side side_;
  FeatureConfig features_;
  TokenizerConfig tokenizer_;
  std::array<double, 2> log_priors_;
  std::vector<double> log_likelihoods_;
  TrainingMeta meta_;
};

/// Accumulates per-class bucket counts; the result does not depend on the
/// order in which documents are added.
class NaiveBayesTrainer {
 public:
  NaiveBayesTrainer(Side side, FeatureConfig features, TokenizerConfig tokenizer);

  void add(TextClass c, std::span<const std::string> tokens);
  void add_text(TextClass c, std::string_view text);
  /// Merges counts of a trainer with the same configuration.
  void merge(const NaiveBayesTrainer& other);

  DirectionModel finish(double alpha) const;

 private:
  Side side_;
  FeatureConfig features_;
  TokenizerConfig tokenizer_;
  std::array<std::size_t, 2> docs_{};
  std::array<std::uint64_t, 2> totals_{};
  std::vector<std::uint64_t> counts_;  // [bucket][class]
};

DirectionModel train_side_classifier(Side side, std::span<const std::string> original_texts,
                                     std::span<const std::string> translationese_texts,
                                     const FeatureConfig& cfg, double alpha,
                                     const TokenizerConfig& tokenizer = {});

double predict_side(const DirectionModel& model, std::span<const std::string> tokens);

struct EnsembleScore {
  double p_src_side = 0.0;  // source text is original
  double p_tgt_side = 0.0;  // target text is translationese
  double p_ensemble = 0.0;  // pair is source-original
  Decision decision = Decision::Abstain;
};

/// Arithmetic mean of the two side scores; Abstain iff
/// |p_ensemble - 0.5| < abstain_band, otherwise SourceOriginal iff p >= 0.5.
EnsembleScore combine_side_scores(double p_src_side, double p_tgt_side, double abstain_band);

/// Scores the pair and, unless abstaining, sets pair.direction.
EnsembleScore classify_pair(const DirectionModel& model_src, const DirectionModel& model_tgt,
                            SentencePair& pair, double abstain_band = 0.0);

struct ClassifierEvaluation {
  double macro_f1 = 0.0;
  // index 0 = SourceOriginal, 1 = TargetOriginal
  std::array<double, 2> precision{};
  std::array<double, 2> recall{};
  std::array<double, 2> f1{};
  // rows: gold {S-O, T-O}; columns: predicted {S-O, T-O, Abstain}
  std::array<std::array<std::size_t, 3>, 2> confusion{};
};

/// Abstentions count against the recall of the gold class.
ClassifierEvaluation evaluate_classifier(std::span<const Decision> predictions,
                                         std::span<const Direction> gold);

// ---------------------------------------------------------------------------
// Model files
// ---------------------------------------------------------------------------

inline constexpr std::string_view kModelMagic = "BITEXTDIR";
inline constexpr std::string_view kModelVersion = "v1";

void save_model(const DirectionModel& model, std::ostream& out);
void save_model(const DirectionModel& model, const std::filesystem::path& path);
/// Throws VersionMismatch for another format version, CorruptModel otherwise.
DirectionModel load_model(std::istream& in);
DirectionModel load_model(const std::filesystem::path& path);

// ---------------------------------------------------------------------------
// Score files: sub_corpus<TAB>line<TAB>p_src_side<TAB>p_tgt_side<TAB>p_ensemble<TAB>decision
// ---------------------------------------------------------------------------

struct ScoreRow {
  std::string sub_corpus;
  std::size_t line = 0;  // zero-based pair id
  EnsembleScore score;
};

void write_scores_tsv(std::ostream& out, std::span<const ScoreRow> rows);
std::vector<ScoreRow> read_scores_tsv(const std::filesystem::path& path);

}  // namespace bitextdir
