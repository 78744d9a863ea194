#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <set>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "bitextdir/types.hpp"

namespace bitextdir {

/// Closed-class words; every token not in the list counts as a content word.
class FunctionWordList {
 public:
  FunctionWordList(std::string language, std::set<std::string, std::less<>> words);

  /// One token per line; blank lines and `#` comments skipped.
  static FunctionWordList load(const std::filesystem::path& path, std::string language);
  /// Bundled stoplist for "en" or "zh".
  static FunctionWordList builtin(std::string_view language);

  const std::string& language() const noexcept { return language_; }
  const std::set<std::string, std::less<>>& words() const noexcept { return words_; }
  bool contains(std::string_view token) const { return words_.find(token) != words_.end(); }

 private:
  std::string language_;
  std::set<std::string, std::less<>> words_;
};

double compute_ttr(std::span<const std::string> tokens);
double compute_lexical_density(std::span<const std::string> tokens, const FunctionWordList& fw);

/// Relative token frequencies, sorted by token.
struct VocabDistribution {
  std::vector<std::pair<std::string, double>> probs;
  std::size_t n_tokens = 0;

  double prob(std::string_view token) const noexcept;
};

/// Key under which truncated vocabulary mass is pooled.
inline constexpr std::string_view kOovToken = "<oov>";

/// `max_types` = 0 keeps every type. Otherwise the most frequent types are
/// kept (ties by token order) and the remaining mass is pooled under kOovToken.
VocabDistribution vocab_distribution(std::span<const std::string> tokens, std::size_t max_types = 0);

/// KL(p||q) in nats after additive smoothing by `epsilon` over the union
/// support (both sides renormalized).
double kl_divergence(const VocabDistribution& p, const VocabDistribution& q, double epsilon);

/// Jensen-Shannon divergence in nats, bit-symmetric in its arguments.
double js_divergence(const VocabDistribution& p, const VocabDistribution& q);

struct StyleProfile {
  Side side = Side::Source;
  double ttr = 0.0;
  double lexical_density = 0.0;
  std::size_t n_tokens = 0;
  std::size_t n_types = 0;
};

/// Tokenized sentences of one partition of a bitext.
struct TextPartition {
  std::string name;
  std::vector<std::vector<std::string>> src;
  std::vector<std::vector<std::string>> tgt;
};

struct StyleReportConfig {
  std::size_t token_budget = 100000;  // TTR/density sample size per side
  std::uint64_t seed = 42;
  std::size_t max_types = 50000;  // vocabulary cap for JS
};

struct StyleRow {
  std::string partition;
  StyleProfile profile;
};

struct JsRow {
  std::string partition_a;
  std::string partition_b;
  double js_nats = 0.0;
};

struct StyleReport {
  std::vector<StyleRow> profiles;  // partition order, source before target
  std::vector<JsRow> js;           // all pairs a < b in partition order, target side
};

/// Takes the first `budget` tokens after shuffling sentence order with a
/// seeded permutation. The permutation depends only on the sentence count.
std::vector<std::string> sample_tokens(const std::vector<std::vector<std::string>>& sentences,
                                       std::size_t budget, std::uint64_t seed);

StyleProfile style_profile(Side side, std::span<const std::string> sample, const FunctionWordList& fw);

StyleReport corpus_style_report(std::span<const TextPartition> partitions,
                                const FunctionWordList& fw_src, const FunctionWordList& fw_tgt,
                                const StyleReportConfig& cfg = {});

void write_style_csv(std::ostream& out, const StyleReport& report);
void write_js_csv(std::ostream& out, const StyleReport& report);

}  // namespace bitextdir
