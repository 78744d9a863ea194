#include "bitextdir/direction.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <bit>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>

#include "bitextdir/error.hpp"
#include "bitextdir/evalmetrics.hpp"
#include "bitextdir/rng.hpp"

namespace bitextdir {

void FeatureConfig::validate() const {
  for (const auto* orders : {&word_ngram_orders, &char_ngram_orders}) {
    for (int o : *orders) {
      if (o < 1) fail(Errc::InvalidArgument, "n-gram orders must be >= 1");
    }
  }
  if (word_ngram_orders.empty() && char_ngram_orders.empty()) {
    fail(Errc::InvalidArgument, "at least one n-gram order is required");
  }
  if (hash_buckets < (1u << 10) || !std::has_single_bit(hash_buckets)) {
    fail(Errc::InvalidArgument, "hash_buckets must be a power of two >= 1024");
  }
}

SparseFeatures extract_features(std::span<const std::string> tokens, const FeatureConfig& cfg) {
  SparseFeatures out;
  if (tokens.empty()) return out;
  const std::uint64_t basis = derive_seed(cfg.hash_seed, "ngram-features");
  const std::uint32_t mask = cfg.hash_buckets - 1;
  std::vector<std::uint32_t> buckets;
  std::string key;

  for (int order : cfg.word_ngram_orders) {
    const auto n = static_cast<std::size_t>(order);
    for (std::size_t i = 0; i + n <= tokens.size(); ++i) {
      key = "w" + std::to_string(order);
      for (std::size_t k = 0; k < n; ++k) {
        key.push_back('\x1f');
        key += tokens[i + k];
      }
      buckets.push_back(static_cast<std::uint32_t>(fnv1a64(key, basis)) & mask);
    }
  }

  if (!cfg.char_ngram_orders.empty()) {
    std::string joined;
    for (std::size_t k = 0; k < tokens.size(); ++k) {
      if (k) joined.push_back(' ');
      joined += tokens[k];
    }
    std::u32string cps;
    if (!decode_utf8(joined, cps)) fail(Errc::InvalidUtf8, "extract_features: invalid UTF-8 token");
    for (int order : cfg.char_ngram_orders) {
      const auto n = static_cast<std::size_t>(order);
      for (std::size_t i = 0; i + n <= cps.size(); ++i) {
        key = "c" + std::to_string(order) + '\x1f';
        for (std::size_t k = 0; k < n; ++k) append_utf8(cps[i + k], key);
        buckets.push_back(static_cast<std::uint32_t>(fnv1a64(key, basis)) & mask);
      }
    }
  }

  std::sort(buckets.begin(), buckets.end());
  for (std::uint32_t b : buckets) {
    if (!out.empty() && out.back().first == b) {
      ++out.back().second;
    } else {
      out.emplace_back(b, 1u);
    }
  }
  return out;
}

// ---------------------------------------------------------------------------

DirectionModel::DirectionModel(Side side, FeatureConfig features, TokenizerConfig tokenizer,
                               std::array<double, 2> class_log_priors,
                               std::vector<double> feature_log_likelihoods, TrainingMeta meta)
    : side_(side),
      features_(std::move(features)),
      tokenizer_(tokenizer),
      log_priors_(class_log_priors),
      log_likelihoods_(std::move(feature_log_likelihoods)),
      meta_(std::move(meta)) {
  features_.validate();
  if (log_likelihoods_.size() != 2 * static_cast<std::size_t>(features_.hash_buckets)) {
    fail(Errc::CorruptModel, "likelihood table size does not match hash_buckets");
  }
}

double DirectionModel::predict(const SparseFeatures& features) const {
  double joint_orig = log_priors_[0];
  double joint_trans = log_priors_[1];
  for (const auto& [bucket, count] : features) {
    if (bucket >= features_.hash_buckets) fail(Errc::InvalidArgument, "feature bucket out of range");
    joint_orig += count * log_likelihood(bucket, TextClass::Original);
    joint_trans += count * log_likelihood(bucket, TextClass::Translationese);
  }
  // Logistic of the log-odds, evaluated on the side that cannot overflow.
  const double log_odds = joint_orig - joint_trans;
  if (log_odds >= 0.0) return 1.0 / (1.0 + std::exp(-log_odds));
  const double e = std::exp(log_odds);
  return e / (1.0 + e);
}

double DirectionModel::predict_tokens(std::span<const std::string> tokens) const {
  return predict(extract_features(tokens, features_));
}

double DirectionModel::predict_text(std::string_view text) const {
  return predict_tokens(tokenize(text, tokenizer_));
}

double predict_side(const DirectionModel& model, std::span<const std::string> tokens) {
  return model.predict_tokens(tokens);
}

// ---------------------------------------------------------------------------

NaiveBayesTrainer::NaiveBayesTrainer(Side side, FeatureConfig features, TokenizerConfig tokenizer)
    : side_(side), features_(std::move(features)), tokenizer_(tokenizer) {
  features_.validate();
  counts_.assign(2 * static_cast<std::size_t>(features_.hash_buckets), 0);
}

void NaiveBayesTrainer::add(TextClass c, std::span<const std::string> tokens) {
  const auto k = static_cast<std::size_t>(c);
  ++docs_[k];
  for (const auto& [bucket, count] : extract_features(tokens, features_)) {
    counts_[2 * static_cast<std::size_t>(bucket) + k] += count;
    totals_[k] += count;
  }
}

void NaiveBayesTrainer::add_text(TextClass c, std::string_view text) {
  add(c, tokenize(text, tokenizer_));
}

void NaiveBayesTrainer::merge(const NaiveBayesTrainer& other) {
  if (other.side_ != side_ || other.features_ != features_ || other.tokenizer_ != tokenizer_) {
    fail(Errc::InvalidArgument, "cannot merge trainers with different configurations");
  }
  for (std::size_t k = 0; k < 2; ++k) {
    docs_[k] += other.docs_[k];
    totals_[k] += other.totals_[k];
  }
  for (std::size_t i = 0; i < counts_.size(); ++i) counts_[i] += other.counts_[i];
}

DirectionModel NaiveBayesTrainer::finish(double alpha) const {
  if (!(alpha > 0.0) || !std::isfinite(alpha)) fail(Errc::InvalidAlpha, "alpha must be > 0");
  if (docs_[0] == 0) fail(Errc::EmptyClass, "no original training texts");
  if (docs_[1] == 0) fail(Errc::EmptyClass, "no translationese training texts");

  const double n_docs = static_cast<double>(docs_[0] + docs_[1]);
  const std::array<double, 2> log_priors{std::log(static_cast<double>(docs_[0]) / n_docs),
                                         std::log(static_cast<double>(docs_[1]) / n_docs)};
  const double buckets = static_cast<double>(features_.hash_buckets);
  const std::array<double, 2> log_denoms{
      std::log(static_cast<double>(totals_[0]) + alpha * buckets),
      std::log(static_cast<double>(totals_[1]) + alpha * buckets)};

  std::vector<double> table(counts_.size());
  for (std::size_t i = 0; i < counts_.size(); ++i) {
    table[i] = std::log(static_cast<double>(counts_[i]) + alpha) - log_denoms[i % 2];
  }
  TrainingMeta meta{docs_[0], docs_[1], alpha, std::string(kModelVersion)};
  return DirectionModel(side_, features_, tokenizer_, log_priors, std::move(table), std::move(meta));
}

DirectionModel train_side_classifier(Side side, std::span<const std::string> original_texts,
                                     std::span<const std::string> translationese_texts,
                                     const FeatureConfig& cfg, double alpha,
                                     const TokenizerConfig& tokenizer) {
  if (!(alpha > 0.0) || !std::isfinite(alpha)) fail(Errc::InvalidAlpha, "alpha must be > 0");
  if (original_texts.empty()) fail(Errc::EmptyClass, "no original training texts");
  if (translationese_texts.empty()) fail(Errc::EmptyClass, "no translationese training texts");
  NaiveBayesTrainer trainer(side, cfg, tokenizer);
  for (const auto& t : original_texts) trainer.add_text(TextClass::Original, t);
  for (const auto& t : translationese_texts) trainer.add_text(TextClass::Translationese, t);
  return trainer.finish(alpha);
}

// ---------------------------------------------------------------------------

EnsembleScore combine_side_scores(double p_src_side, double p_tgt_side, double abstain_band) {
  if (!(abstain_band >= 0.0 && abstain_band < 0.5)) {
    fail(Errc::InvalidArgument, "abstain band must lie in [0, 0.5)");
  }
  EnsembleScore s;
  s.p_src_side = p_src_side;
  s.p_tgt_side = p_tgt_side;
  s.p_ensemble = (p_src_side + p_tgt_side) / 2.0;
  if (std::abs(s.p_ensemble - 0.5) < abstain_band) {
    s.decision = Decision::Abstain;
  } else {
    s.decision = s.p_ensemble >= 0.5 ? Decision::SourceOriginal : Decision::TargetOriginal;
  }
  return s;
}

EnsembleScore classify_pair(const DirectionModel& model_src, const DirectionModel& model_tgt,
                            SentencePair& pair, double abstain_band) {
  if (model_src.side() != Side::Source || model_tgt.side() != Side::Target) {
    fail(Errc::SideMismatch, "classify_pair expects a source-side and a target-side model");
  }
  const double p_src_original = model_src.predict_text(pair.src);
  const double p_tgt_translationese = 1.0 - model_tgt.predict_text(pair.tgt);
  const auto score = combine_side_scores(p_src_original, p_tgt_translationese, abstain_band);
  if (score.decision == Decision::SourceOriginal) pair.direction = Direction::SourceOriginal;
  if (score.decision == Decision::TargetOriginal) pair.direction = Direction::TargetOriginal;
  return score;
}

ClassifierEvaluation evaluate_classifier(std::span<const Decision> predictions,
                                         std::span<const Direction> gold) {
  if (predictions.size() != gold.size()) {
    fail(Errc::LengthMismatch, "evaluate_classifier: " + std::to_string(predictions.size()) +
                                   " predictions for " + std::to_string(gold.size()) + " gold labels");
  }
  if (gold.empty()) fail(Errc::EmptyInput, "evaluate_classifier: no examples");

  ClassifierEvaluation ev;
  std::vector<int> p(predictions.size()), g(gold.size());
  for (std::size_t i = 0; i < gold.size(); ++i) {
    if (gold[i] == Direction::Unknown) {
      fail(Errc::InvalidArgument, "evaluate_classifier: gold label " + std::to_string(i) + " is Unknown");
    }
    g[i] = static_cast<int>(gold[i]);
    p[i] = static_cast<int>(predictions[i]);
    ++ev.confusion[static_cast<std::size_t>(g[i])][static_cast<std::size_t>(p[i])];
  }
  const std::array<int, 2> classes{static_cast<int>(Direction::SourceOriginal),
                                   static_cast<int>(Direction::TargetOriginal)};
  const auto scores = macro_f1(p, g, classes);
  ev.macro_f1 = scores.macro_f1;
  for (std::size_t k = 0; k < 2; ++k) {
    ev.precision[k] = scores.per_class[k].precision;
    ev.recall[k] = scores.per_class[k].recall;
    ev.f1[k] = scores.per_class[k].f1;
  }
  return ev;
}

// ---------------------------------------------------------------------------

namespace {

std::string join_orders(const std::vector<int>& orders) {
  std::string out;
  for (std::size_t k = 0; k < orders.size(); ++k) {
    if (k) out.push_back(',');
    out += std::to_string(orders[k]);
  }
  return out;
}

[[noreturn]] void corrupt(const std::string& why) { fail(Errc::CorruptModel, why); }

template <class T>
T parse_number(const std::string& key, const std::string& text) {
  T value{};
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    corrupt("metadata '" + key + "' has malformed value '" + text + "'");
  }
  return value;
}

std::vector<int> parse_orders(const std::string& key, const std::string& text) {
  std::vector<int> out;
  if (text.empty()) return out;
  std::size_t start = 0;
  for (;;) {
    const auto comma = text.find(',', start);
    out.push_back(parse_number<int>(key, text.substr(start, comma - start)));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return out;
}

}  // namespace

void save_model(const DirectionModel& model, std::ostream& out) {
  const auto& f = model.feature_config();
  const auto& m = model.meta();
  out << kModelMagic << '\t' << kModelVersion << '\n';
  // Doubles are written in shortest round-trip form, so parsing is exact.
  out << fmt::format("side\t{}\n", to_string(model.side()));
  out << fmt::format("word_orders\t{}\n", join_orders(f.word_ngram_orders));
  out << fmt::format("char_orders\t{}\n", join_orders(f.char_ngram_orders));
  out << fmt::format("hash_buckets\t{}\n", f.hash_buckets);
  out << fmt::format("hash_seed\t{}\n", f.hash_seed);
  out << fmt::format("tokenizer\t{}\n", to_string(model.tokenizer().mode));
  out << fmt::format("lowercase\t{}\n", model.tokenizer().lowercase ? 1 : 0);
  out << fmt::format("alpha\t{}\n", m.alpha);
  out << fmt::format("n_original\t{}\n", m.n_original);
  out << fmt::format("n_translationese\t{}\n", m.n_translationese);
  out << fmt::format("log_prior_original\t{}\n", model.class_log_priors()[0]);
  out << fmt::format("log_prior_translationese\t{}\n", model.class_log_priors()[1]);
  out << '\n';

  const auto table = model.feature_log_likelihoods();
  auto put_u64 = [&](std::uint64_t v) {
    char bytes[8];
    for (int k = 0; k < 8; ++k) bytes[k] = static_cast<char>((v >> (8 * k)) & 0xFF);
    out.write(bytes, 8);
  };
  put_u64(table.size());
  for (double v : table) put_u64(std::bit_cast<std::uint64_t>(v));
  if (!out) fail(Errc::Io, "failed to write model");
}

void save_model(const DirectionModel& model, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) fail(Errc::Io, "cannot write model '" + path.string() + "'");
  save_model(model, out);
  out.flush();
  if (!out) fail(Errc::Io, "failed to write model '" + path.string() + "'");
}

DirectionModel load_model(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) corrupt("empty model file");
  const auto tab = line.find('\t');
  if (tab == std::string::npos || line.substr(0, tab) != kModelMagic) corrupt("bad magic header");
  const std::string version = line.substr(tab + 1);
  if (version != kModelVersion) {
    fail(Errc::VersionMismatch, "model format '" + version + "', reader supports '" +
                                    std::string(kModelVersion) + "'");
  }

  std::map<std::string, std::string> meta;
  for (;;) {
    if (!std::getline(in, line)) corrupt("truncated metadata");
    if (line.empty()) break;
    const auto t = line.find('\t');
    if (t == std::string::npos) corrupt("metadata line without TAB");
    meta[line.substr(0, t)] = line.substr(t + 1);
  }
  auto get = [&](const std::string& key) -> const std::string& {
    auto it = meta.find(key);
    if (it == meta.end()) corrupt("missing metadata key '" + key + "'");
    return it->second;
  };

  const auto side = parse_side(get("side"));
  if (!side) corrupt("unknown side '" + get("side") + "'");
  FeatureConfig features;
  features.word_ngram_orders = parse_orders("word_orders", get("word_orders"));
  features.char_ngram_orders = parse_orders("char_orders", get("char_orders"));
  features.hash_buckets = parse_number<std::uint32_t>("hash_buckets", get("hash_buckets"));
  features.hash_seed = parse_number<std::uint64_t>("hash_seed", get("hash_seed"));
  try {
    features.validate();
  } catch (const Error& e) {
    corrupt(std::string("invalid feature configuration: ") + e.what());
  }

  TokenizerConfig tokenizer;
  const auto& mode = get("tokenizer");
  if (mode == "whitespace") tokenizer.mode = TokenizerMode::Whitespace;
  else if (mode == "cjk") tokenizer.mode = TokenizerMode::CharPerCjkElseWhitespace;
  else corrupt("unknown tokenizer '" + mode + "'");
  tokenizer.lowercase = parse_number<int>("lowercase", get("lowercase")) != 0;

  TrainingMeta tm;
  tm.alpha = parse_number<double>("alpha", get("alpha"));
  tm.n_original = parse_number<std::size_t>("n_original", get("n_original"));
  tm.n_translationese = parse_number<std::size_t>("n_translationese", get("n_translationese"));
  tm.version = version;
  const std::array<double, 2> priors{
      parse_number<double>("log_prior_original", get("log_prior_original")),
      parse_number<double>("log_prior_translationese", get("log_prior_translationese"))};

  auto get_u64 = [&]() {
    unsigned char bytes[8];
    if (!in.read(reinterpret_cast<char*>(bytes), 8)) corrupt("truncated likelihood table");
    std::uint64_t v = 0;
    for (int k = 7; k >= 0; --k) v = (v << 8) | bytes[k];
    return v;
  };
  const std::uint64_t n = get_u64();
  if (n != 2 * static_cast<std::uint64_t>(features.hash_buckets)) {
    corrupt("likelihood table length " + std::to_string(n) + " does not match hash_buckets");
  }
  std::vector<double> table(n);
  for (auto& v : table) v = std::bit_cast<double>(get_u64());
  if (in.peek() != std::char_traits<char>::eof()) corrupt("trailing bytes after likelihood table");

  return DirectionModel(*side, std::move(features), tokenizer, priors, std::move(table), std::move(tm));
}

DirectionModel load_model(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(Errc::MissingFile, "cannot open model '" + path.string() + "'");
  return load_model(in);
}

// ---------------------------------------------------------------------------

void write_scores_tsv(std::ostream& out, std::span<const ScoreRow> rows) {
  for (const auto& r : rows) {
    out << fmt::format("{}\t{}\t{:.6f}\t{:.6f}\t{:.6f}\t{}\n", r.sub_corpus, r.line, r.score.p_src_side,
                       r.score.p_tgt_side, r.score.p_ensemble, to_string(r.score.decision));
  }
}

std::vector<ScoreRow> read_scores_tsv(const std::filesystem::path& path) {
  LineReader reader(path);
  std::vector<ScoreRow> rows;
  std::string line;
  while (reader.next(line)) {
    if (line.empty() || line.front() == '#') continue;
    auto bad = [&](const std::string& why) {
      fail(Errc::FormatViolation, path.string() + ":" + std::to_string(reader.line_number()) + ": " + why);
    };
    std::vector<std::string> f;
    std::istringstream ss(line);
    std::string field;
    while (std::getline(ss, field, '\t')) f.push_back(field);
    if (f.size() != 6) bad("expected 6 TAB-separated fields");
    ScoreRow row;
    row.sub_corpus = f[0];
    auto num = [&](const std::string& s, auto& v) {
      const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
      if (ec != std::errc() || ptr != s.data() + s.size()) bad("malformed number '" + s + "'");
    };
    num(f[1], row.line);
    num(f[2], row.score.p_src_side);
    num(f[3], row.score.p_tgt_side);
    num(f[4], row.score.p_ensemble);
    for (double p : {row.score.p_src_side, row.score.p_tgt_side, row.score.p_ensemble}) {
      if (!(p >= 0.0 && p <= 1.0)) bad("probability outside [0, 1]");
    }
    const auto decision = parse_decision(f[5]);
    if (!decision) bad("unknown decision '" + f[5] + "'");
    row.score.decision = *decision;
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace bitextdir
