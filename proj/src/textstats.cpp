#include "bitextdir/textstats.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <ostream>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include "bitextdir/corpus.hpp"
#include "bitextdir/error.hpp"
#include "bitextdir/rng.hpp"

namespace bitextdir {

// Generated from data/function_words/*.txt at configure time.
extern const char* const kFunctionWordsEn;
extern const char* const kFunctionWordsZh;

namespace {

std::set<std::string, std::less<>> parse_word_list(std::istream& in) {
  std::set<std::string, std::less<>> words;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const auto first = line.find_first_not_of(" \t");
    if (first == std::string::npos || line[first] == '#') continue;
    const auto last = line.find_last_not_of(" \t");
    words.insert(line.substr(first, last - first + 1));
  }
  return words;
}

}  // namespace

FunctionWordList::FunctionWordList(std::string language, std::set<std::string, std::less<>> words)
    : language_(std::move(language)), words_(std::move(words)) {
  if (words_.empty()) fail(Errc::InvalidArgument, "function-word list '" + language_ + "' is empty");
  const TokenizerConfig lower{TokenizerMode::Whitespace, true};
  for (const auto& w : words_) {
    const auto folded = tokenize(w, lower);
    if (folded.size() != 1 || folded.front() != w) {
      fail(Errc::InvalidArgument,
           "function-word list '" + language_ + "': entry '" + w + "' is not a lowercase token");
    }
  }
}

FunctionWordList FunctionWordList::load(const std::filesystem::path& path, std::string language) {
  std::istringstream in;
  std::string text;
  for (const auto& line : read_lines(path)) text += line + '\n';
  in.str(text);
  return FunctionWordList(std::move(language), parse_word_list(in));
}

FunctionWordList FunctionWordList::builtin(std::string_view language) {
  const char* data = nullptr;
  if (language == "en") data = kFunctionWordsEn;
  if (language == "zh") data = kFunctionWordsZh;
  if (!data) fail(Errc::InvalidArgument, "no bundled function-word list for '" + std::string(language) + "'");
  std::istringstream in(data);
  return FunctionWordList(std::string(language), parse_word_list(in));
}

double compute_ttr(std::span<const std::string> tokens) {
  if (tokens.empty()) fail(Errc::EmptyInput, "compute_ttr: no tokens");
  std::unordered_set<std::string_view> types(tokens.begin(), tokens.end());
  return static_cast<double>(types.size()) / static_cast<double>(tokens.size());
}

double compute_lexical_density(std::span<const std::string> tokens, const FunctionWordList& fw) {
  if (tokens.empty()) fail(Errc::EmptyInput, "compute_lexical_density: no tokens");
  const auto content = std::count_if(tokens.begin(), tokens.end(),
                                     [&](const std::string& t) { return !fw.contains(t); });
  return static_cast<double>(content) / static_cast<double>(tokens.size());
}

double VocabDistribution::prob(std::string_view token) const noexcept {
  auto it = std::lower_bound(probs.begin(), probs.end(), token,
                             [](const auto& entry, std::string_view t) { return entry.first < t; });
  return (it != probs.end() && it->first == token) ? it->second : 0.0;
}

VocabDistribution vocab_distribution(std::span<const std::string> tokens, std::size_t max_types) {
  if (tokens.empty()) fail(Errc::EmptyInput, "vocab_distribution: no tokens");
  std::unordered_map<std::string_view, std::size_t> counts;
  for (const auto& t : tokens) ++counts[t];

  std::vector<std::pair<std::string_view, std::size_t>> ranked(counts.begin(), counts.end());
  std::size_t pooled = 0;
  if (max_types > 0 && ranked.size() > max_types) {
    std::sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
      return a.second != b.second ? a.second > b.second : a.first < b.first;
    });
    for (std::size_t k = max_types; k < ranked.size(); ++k) pooled += ranked[k].second;
    ranked.resize(max_types);
  }

  VocabDistribution dist;
  dist.n_tokens = tokens.size();
  const double total = static_cast<double>(tokens.size());
  std::map<std::string, double, std::less<>> sorted;
  for (const auto& [tok, c] : ranked) sorted.emplace(std::string(tok), static_cast<double>(c) / total);
  if (pooled > 0) sorted[std::string(kOovToken)] += static_cast<double>(pooled) / total;
  dist.probs.assign(sorted.begin(), sorted.end());
  return dist;
}

namespace {

/// Walks the union support of two sorted distributions in token order.
template <class F>
void for_each_union(const VocabDistribution& p, const VocabDistribution& q, F&& f) {
  auto a = p.probs.begin(), b = q.probs.begin();
  while (a != p.probs.end() || b != q.probs.end()) {
    if (b == q.probs.end() || (a != p.probs.end() && a->first < b->first)) {
      f(a->second, 0.0);
      ++a;
    } else if (a == p.probs.end() || b->first < a->first) {
      f(0.0, b->second);
      ++b;
    } else {
      f(a->second, b->second);
      ++a, ++b;
    }
  }
}

}  // namespace

double kl_divergence(const VocabDistribution& p, const VocabDistribution& q, double epsilon) {
  if (!(epsilon > 0.0) || !std::isfinite(epsilon)) {
    fail(Errc::InvalidEpsilon, "kl_divergence: smoothing epsilon must be > 0");
  }
  std::size_t support = 0;
  for_each_union(p, q, [&](double, double) { ++support; });
  const double norm = 1.0 + epsilon * static_cast<double>(support);
  double sum = 0.0;
  for_each_union(p, q, [&](double pv, double qv) {
    const double ps = (pv + epsilon) / norm;
    const double qs = (qv + epsilon) / norm;
    sum += ps * std::log(ps / qs);
  });
  return std::max(0.0, sum);
}

double js_divergence(const VocabDistribution& p, const VocabDistribution& q) {
  double sum = 0.0;
  for_each_union(p, q, [&](double pv, double qv) {
    // Per-token term is symmetric in (pv, qv): m and the final addition are
    // both commutative, so JS(p,q) and JS(q,p) agree bit for bit.
    const double m = (pv + qv) / 2.0;
    const double tp = pv > 0.0 ? pv * std::log(pv / m) : 0.0;
    const double tq = qv > 0.0 ? qv * std::log(qv / m) : 0.0;
    sum += tp + tq;
  });
  return std::clamp(sum / 2.0, 0.0, std::log(2.0));
}

std::vector<std::string> sample_tokens(const std::vector<std::vector<std::string>>& sentences,
                                       std::size_t budget, std::uint64_t seed) {
  std::vector<std::size_t> order(sentences.size());
  for (std::size_t k = 0; k < order.size(); ++k) order[k] = k;
  Rng rng(seed);
  rng.shuffle(order);
  std::vector<std::string> out;
  for (std::size_t idx : order) {
    for (const auto& t : sentences[idx]) {
      if (budget > 0 && out.size() >= budget) return out;
      out.push_back(t);
    }
  }
  return out;
}

StyleProfile style_profile(Side side, std::span<const std::string> sample, const FunctionWordList& fw) {
  StyleProfile prof;
  prof.side = side;
  prof.n_tokens = sample.size();
  prof.n_types = std::unordered_set<std::string_view>(sample.begin(), sample.end()).size();
  prof.ttr = compute_ttr(sample);
  prof.lexical_density = compute_lexical_density(sample, fw);
  return prof;
}

StyleReport corpus_style_report(std::span<const TextPartition> partitions,
                                const FunctionWordList& fw_src, const FunctionWordList& fw_tgt,
                                const StyleReportConfig& cfg) {
  auto all_tokens = [](const std::vector<std::vector<std::string>>& sents) {
    std::vector<std::string> out;
    for (const auto& s : sents) out.insert(out.end(), s.begin(), s.end());
    return out;
  };

  StyleReport report;
  std::vector<VocabDistribution> tgt_vocab;
  for (const auto& part : partitions) {
    const auto src_sample = sample_tokens(part.src, cfg.token_budget, cfg.seed);
    const auto tgt_sample = sample_tokens(part.tgt, cfg.token_budget, cfg.seed);
    if (src_sample.empty() || tgt_sample.empty()) {
      fail(Errc::EmptyPartition, "partition '" + part.name + "' has no tokens");
    }
    report.profiles.push_back({part.name, style_profile(Side::Source, src_sample, fw_src)});
    report.profiles.push_back({part.name, style_profile(Side::Target, tgt_sample, fw_tgt)});
    tgt_vocab.push_back(vocab_distribution(all_tokens(part.tgt), cfg.max_types));
  }
  for (std::size_t a = 0; a < partitions.size(); ++a) {
    for (std::size_t b = a + 1; b < partitions.size(); ++b) {
      report.js.push_back(
          {partitions[a].name, partitions[b].name, js_divergence(tgt_vocab[a], tgt_vocab[b])});
    }
  }
  return report;
}

void write_style_csv(std::ostream& out, const StyleReport& report) {
  out << "partition,side,n_tokens,n_types,ttr,lexical_density\n";
  for (const auto& row : report.profiles) {
    const auto& p = row.profile;
    out << fmt::format("{},{},{},{},{:.6f},{:.6f}\n", row.partition, to_string(p.side), p.n_tokens,
                       p.n_types, p.ttr, p.lexical_density);
  }
}

void write_js_csv(std::ostream& out, const StyleReport& report) {
  out << "partition_a,partition_b,js_nats\n";
  for (const auto& row : report.js) {
    out << fmt::format("{},{},{:.6f}\n", row.partition_a, row.partition_b, row.js_nats);
  }
}

}  // namespace bitextdir
