#include "bitextdir/pipeline.hpp"

#include <fmt/format.h>
#include <openssl/evp.h>

#include <algorithm>
#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <charconv>
#include <fstream>
#include <json.hpp>
#include <memory>
#include <set>
#include <sstream>

#include "bitextdir/error.hpp"
#include "bitextdir/parallel.hpp"
#include "bitextdir/rng.hpp"

namespace bitextdir {

namespace fs = std::filesystem;

std::vector<SentencePair> balanced_sample(const CorpusManifest& manifest, const SamplingPlan& plan) {
  if (plan.per_corpus_n < 1) fail(Errc::InvalidArgument, "per_corpus_n must be >= 1");
  std::vector<SentencePair> out;
  for (const auto& entry : manifest.entries()) {
    auto pairs = read_sub_corpus(entry);
    if (pairs.size() < plan.per_corpus_n && plan.shortfall == ShortfallPolicy::Error) {
      fail(Errc::Shortfall, "sub-corpus '" + entry.name + "' has " + std::to_string(pairs.size()) +
                                " usable pairs, " + std::to_string(plan.per_corpus_n) + " requested");
    }
    Rng rng(derive_seed(plan.seed, entry.name));
    for (std::size_t idx : rng.sample_indices(pairs.size(), plan.per_corpus_n)) {
      out.push_back(std::move(pairs[idx]));
    }
  }
  return out;
}

// ---------------------------------------------------------------------------

std::string_view to_string(KeepPolicy keep) noexcept {
  switch (keep) {
    case KeepPolicy::SourceOriginal: return "source-original";
    case KeepPolicy::TargetOriginal: return "target-original";
    case KeepPolicy::Mixed: return "mixed";
  }
  return "mixed";
}

KeepPolicy parse_keep_policy(std::string_view text) {
  if (text == "source-original" || text == "SourceOriginal" || text == "S-O") return KeepPolicy::SourceOriginal;
  if (text == "target-original" || text == "TargetOriginal" || text == "T-O") return KeepPolicy::TargetOriginal;
  if (text == "mixed" || text == "Mixed" || text == "Mix") return KeepPolicy::Mixed;
  fail(Errc::InvalidArgument, "unknown keep policy '" + std::string(text) +
                                  "' (expected source-original, target-original or mixed)");
}

ScoreTable make_score_table(std::span<const ScoreRow> rows) {
  ScoreTable table;
  for (const auto& r : rows) table[{r.sub_corpus, r.line}] = r.score;
  return table;
}

FilterResult filter_by_direction(std::span<const SentencePair> pairs, const ScoreTable& scores,
                                 KeepPolicy keep, double tau) {
  if (!(tau >= 0.0 && tau <= 1.0)) fail(Errc::InvalidArgument, "tau must lie in [0, 1]");
  FilterResult result;
  for (const auto& pair : pairs) {
    auto it = scores.find({pair.sub_corpus, pair.id});
    if (it == scores.end()) {
      fail(Errc::MissingScore, "no direction score for sub-corpus '" + pair.sub_corpus + "' line " +
                                   std::to_string(pair.id));
    }
    const EnsembleScore& s = it->second;
    const bool abstain = s.decision == Decision::Abstain;
    bool take = false;
    switch (keep) {
      case KeepPolicy::Mixed:
        take = true;
        break;
      case KeepPolicy::SourceOriginal:
        take = !abstain && s.p_ensemble >= tau;
        break;
      case KeepPolicy::TargetOriginal:
        take = !abstain && s.p_ensemble <= 1.0 - tau && s.p_ensemble != tau;
        break;
    }
    if (take) {
      SentencePair kept = pair;
      if (s.decision == Decision::SourceOriginal) kept.direction = Direction::SourceOriginal;
      if (s.decision == Decision::TargetOriginal) kept.direction = Direction::TargetOriginal;
      result.kept.push_back(std::move(kept));
    } else if (abstain) {
      ++result.abstained;
    } else {
      ++result.filtered_out;
    }
  }
  result.empty_warning = result.kept.empty();
  return result;
}

// ---------------------------------------------------------------------------

MixSpec parse_mix_ratio(std::string_view text, std::uint64_t seed) {
  const auto colon = text.find(':');
  MixSpec spec;
  spec.seed = seed;
  auto parse = [&](std::string_view s, std::uint64_t& v) {
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    return ec == std::errc() && ptr == s.data() + s.size();
  };
  if (colon == std::string_view::npos || !parse(text.substr(0, colon), spec.ratio_real) ||
      !parse(text.substr(colon + 1), spec.ratio_synth) || spec.ratio_real == 0 || spec.ratio_synth == 0) {
    fail(Errc::InvalidArgument, "ratio must look like R:S with positive integers, got '" + std::string(text) + "'");
  }
  return spec;
}

std::vector<PseudoQERecord> mix_datasets(std::span<const PseudoQERecord> real,
                                         std::span<const PseudoQERecord> synth, const MixSpec& spec) {
  if (spec.ratio_real == 0 || spec.ratio_synth == 0) {
    fail(Errc::InvalidArgument, "mix ratios must be positive");
  }
  if (real.empty()) fail(Errc::EmptyInput, "mix_datasets: no real records");
  if (synth.empty()) fail(Errc::EmptyInput, "mix_datasets: no synthetic records");
  const std::uint64_t need = static_cast<std::uint64_t>(real.size()) * spec.ratio_synth / spec.ratio_real;
  if (need > synth.size()) {
    fail(Errc::InsufficientSynthetic, "need " + std::to_string(need) + " synthetic records, have " +
                                          std::to_string(synth.size()));
  }
  Rng rng(derive_seed(spec.seed, "mix"));
  std::vector<PseudoQERecord> out(real.begin(), real.end());
  for (std::size_t idx : rng.sample_indices(synth.size(), static_cast<std::size_t>(need))) {
    out.push_back(synth[idx]);
  }
  rng.shuffle(out);
  return out;
}

// ---------------------------------------------------------------------------

std::string sha1_hex(std::string_view bytes) {
  std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(), &EVP_MD_CTX_free);
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (!ctx || EVP_DigestInit_ex(ctx.get(), EVP_sha1(), nullptr) != 1 ||
      EVP_DigestUpdate(ctx.get(), bytes.data(), bytes.size()) != 1 ||
      EVP_DigestFinal_ex(ctx.get(), digest, &len) != 1) {
    fail(Errc::Io, "SHA-1 computation failed");
  }
  std::string hex;
  for (unsigned int k = 0; k < len; ++k) hex += fmt::format("{:02x}", digest[k]);
  return hex;
}

std::string git_blob_sha1(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(Errc::MissingFile, "cannot open '" + path.string() + "'");
  std::ostringstream content;
  content << in.rdbuf();
  const std::string body = content.str();
  std::string blob = "blob " + std::to_string(body.size());
  blob.push_back('\0');
  blob += body;
  return sha1_hex(blob);
}

// ---------------------------------------------------------------------------

namespace {

const std::set<std::string, std::less<>> kConfigKeys = {
    "corpus.manifest",        "corpus.mt",          "sample.per_corpus", "sample.shortfall",
    "direction.model_src",    "direction.model_tgt", "direction.scores",  "direction.band",
    "filter.keep",            "filter.tau",          "labels.tokenizer",  "labels.lowercase",
    "labels.max_shift_distance", "labels.max_shift_size", "output.prefix", "output.gap_tags",
    "run.seed",               "run.threads",
};

template <class T>
T parse_value(const std::string& key, const std::string& text) {
  T v{};
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    fail(Errc::InvalidArgument, "config key '" + key + "': malformed value '" + text + "'");
  }
  return v;
}

bool parse_bool(const std::string& key, const std::string& text) {
  if (text == "1" || text == "true" || text == "yes" || text == "on") return true;
  if (text == "0" || text == "false" || text == "no" || text == "off") return false;
  fail(Errc::InvalidArgument, "config key '" + key + "': expected a boolean, got '" + text + "'");
}

void apply_key(ForgeConfig& cfg, const std::string& key, const std::string& value, const fs::path& base) {
  auto path = [&] {
    fs::path p(value);
    return (p.is_absolute() || value.empty()) ? p : base / p;
  };
  if (!kConfigKeys.contains(key)) fail(Errc::InvalidArgument, "unknown config key '" + key + "'");
  if (key == "corpus.manifest") cfg.manifest = path();
  else if (key == "corpus.mt") cfg.mt_manifest = path();
  else if (key == "sample.per_corpus") cfg.per_corpus = parse_value<std::size_t>(key, value);
  else if (key == "sample.shortfall") {
    if (value == "take-all") cfg.shortfall = ShortfallPolicy::TakeAll;
    else if (value == "error") cfg.shortfall = ShortfallPolicy::Error;
    else fail(Errc::InvalidArgument, "sample.shortfall must be take-all or error");
  } else if (key == "direction.model_src") cfg.model_src = path();
  else if (key == "direction.model_tgt") cfg.model_tgt = path();
  else if (key == "direction.scores") cfg.scores = path();
  else if (key == "direction.band") cfg.band = parse_value<double>(key, value);
  else if (key == "filter.keep") cfg.keep = parse_keep_policy(value);
  else if (key == "filter.tau") cfg.tau = parse_value<double>(key, value);
  else if (key == "labels.tokenizer") cfg.label_tokenizer.mode = parse_tokenizer_mode(value);
  else if (key == "labels.lowercase") cfg.label_tokenizer.lowercase = parse_bool(key, value);
  else if (key == "labels.max_shift_distance") cfg.ter.max_shift_distance = parse_value<std::size_t>(key, value);
  else if (key == "labels.max_shift_size") cfg.ter.max_shift_size = parse_value<std::size_t>(key, value);
  else if (key == "output.prefix") cfg.output_prefix = path();
  else if (key == "output.gap_tags") cfg.gap_tags = parse_bool(key, value);
  else if (key == "run.seed") cfg.seed = parse_value<std::uint64_t>(key, value);
  else if (key == "run.threads") cfg.threads = parse_value<std::size_t>(key, value);
}

}  // namespace

std::vector<std::string> ForgeConfig::canonical() const {
  std::vector<std::string> lines{
      "corpus.manifest=" + manifest.string(),
      "corpus.mt=" + mt_manifest.string(),
      "sample.per_corpus=" + std::to_string(per_corpus),
      std::string("sample.shortfall=") + (shortfall == ShortfallPolicy::TakeAll ? "take-all" : "error"),
      "direction.model_src=" + model_src.string(),
      "direction.model_tgt=" + model_tgt.string(),
      "direction.scores=" + scores.string(),
      fmt::format("direction.band={}", band),
      "filter.keep=" + std::string(to_string(keep)),
      fmt::format("filter.tau={}", tau),
      "labels.tokenizer=" + std::string(to_string(label_tokenizer.mode)),
      fmt::format("labels.lowercase={}", label_tokenizer.lowercase),
      fmt::format("labels.max_shift_distance={}", ter.max_shift_distance),
      fmt::format("labels.max_shift_size={}", ter.max_shift_size),
      "output.prefix=" + output_prefix.string(),
      fmt::format("output.gap_tags={}", gap_tags),
      fmt::format("run.seed={}", seed),
  };
  // run.threads is deliberately absent: it must not change any output.
  std::sort(lines.begin(), lines.end());
  return lines;
}

ForgeConfig load_forge_config(const std::optional<fs::path>& path, std::span<const std::string> overrides) {
  ForgeConfig cfg;
  if (path) {
    if (!fs::is_regular_file(*path)) fail(Errc::MissingFile, "no such config file '" + path->string() + "'");
    boost::property_tree::ptree tree;
    try {
      boost::property_tree::ini_parser::read_ini(path->string(), tree);
    } catch (const boost::property_tree::ini_parser_error& e) {
      fail(Errc::InvalidArgument, std::string("config: ") + e.what());
    }
    const fs::path base = path->parent_path();
    for (const auto& [section, body] : tree) {
      if (body.empty()) fail(Errc::InvalidArgument, "config key '" + section + "' outside a section");
      for (const auto& [key, node] : body) {
        apply_key(cfg, section + "." + key, node.get_value<std::string>(), base);
      }
    }
  }
  for (const auto& ov : overrides) {
    const auto eq = ov.find('=');
    if (eq == std::string::npos) fail(Errc::InvalidArgument, "override '" + ov + "' is not section.key=value");
    apply_key(cfg, ov.substr(0, eq), ov.substr(eq + 1), fs::path());
  }
  return cfg;
}

namespace {

void validate_config(const ForgeConfig& cfg) {
  auto need = [](bool ok, const std::string& what) {
    if (!ok) fail(Errc::InvalidArgument, what);
  };
  need(!cfg.manifest.empty(), "corpus.manifest is required");
  need(!cfg.mt_manifest.empty(), "corpus.mt is required");
  need(!cfg.output_prefix.empty() && cfg.output_prefix.has_filename(), "output.prefix is required");
  need(cfg.per_corpus >= 1, "sample.per_corpus must be >= 1");
  need(!cfg.scores.empty() || (!cfg.model_src.empty() && !cfg.model_tgt.empty()),
       "either direction.scores or both direction.model_src and direction.model_tgt are required");
  need(cfg.band >= 0.0 && cfg.band < 0.5, "direction.band must lie in [0, 0.5)");
  need(cfg.tau >= 0.0 && cfg.tau <= 1.0, "filter.tau must lie in [0, 1]");
}

/// name<TAB>mt_path lines; returns lines per sub-corpus plus the files read.
std::map<std::string, std::vector<std::string>> load_mt(const fs::path& mt_manifest,
                                                        std::vector<fs::path>& inputs) {
  std::map<std::string, std::vector<std::string>> out;
  LineReader reader(mt_manifest);
  std::string line;
  while (reader.next(line)) {
    if (line.empty() || line.front() == '#') continue;
    const auto tab = line.find('\t');
    if (tab == std::string::npos || line.find('\t', tab + 1) != std::string::npos) {
      fail(Errc::ManifestSyntax, mt_manifest.string() + ":" + std::to_string(reader.line_number()) +
                                     ": expected name<TAB>mt_path");
    }
    const std::string name = line.substr(0, tab);
    fs::path p(line.substr(tab + 1));
    if (p.is_relative()) p = mt_manifest.parent_path() / p;
    if (out.contains(name)) fail(Errc::DuplicateName, "MT manifest names '" + name + "' twice");
    out[name] = read_lines(p);
    inputs.push_back(p);
  }
  return out;
}

class StagingDir {
 public:
  explicit StagingDir(const fs::path& prefix)
      : dir_(prefix.parent_path() / ("." + prefix.filename().string() + ".forge-tmp")) {
    std::error_code ec;
    fs::remove_all(dir_, ec);
    fs::create_directories(dir_);
  }
  ~StagingDir() {
    std::error_code ec;
    fs::remove_all(dir_, ec);
  }
  StagingDir(const StagingDir&) = delete;
  StagingDir& operator=(const StagingDir&) = delete;

  const fs::path& dir() const noexcept { return dir_; }

 private:
  fs::path dir_;
};

}  // namespace

ForgeSummary run_forge(const ForgeConfig& config) {
  validate_config(config);
  ForgeSummary summary;
  std::vector<fs::path> inputs{config.manifest};

  const auto manifest = load_manifest(config.manifest);
  for (const auto& e : manifest.entries()) {
    inputs.push_back(e.src_path);
    inputs.push_back(e.tgt_path);
  }
  inputs.push_back(config.mt_manifest);
  const auto mt = load_mt(config.mt_manifest, inputs);

  // sample
  const auto sampled = balanced_sample(manifest, {config.per_corpus, config.seed, config.shortfall});
  summary.counts.sampled = sampled.size();

  // score
  ScoreTable scores;
  if (!config.scores.empty()) {
    inputs.push_back(config.scores);
    scores = make_score_table(read_scores_tsv(config.scores));
    for (const auto& p : sampled) {
      if (scores.contains({p.sub_corpus, p.id})) ++summary.counts.scored;
    }
  } else {
    inputs.push_back(config.model_src);
    inputs.push_back(config.model_tgt);
    const auto model_src = load_model(config.model_src);
    const auto model_tgt = load_model(config.model_tgt);
    std::vector<EnsembleScore> results(sampled.size());
    parallel_for(sampled.size(), config.threads, [&](std::size_t i) {
      SentencePair copy = sampled[i];
      results[i] = classify_pair(model_src, model_tgt, copy, config.band);
    });
    for (std::size_t i = 0; i < sampled.size(); ++i) {
      scores[{sampled[i].sub_corpus, sampled[i].id}] = results[i];
    }
    summary.counts.scored = sampled.size();
  }

  // filter
  auto filtered = filter_by_direction(sampled, scores, config.keep, config.tau);
  summary.counts.kept = filtered.kept.size();
  summary.counts.filtered_out = filtered.filtered_out;
  summary.counts.abstained = filtered.abstained;
  summary.empty_warning = filtered.empty_warning;

  // pseudo labels
  std::vector<PseudoQERecord> records(filtered.kept.size());
  parallel_for(filtered.kept.size(), config.threads, [&](std::size_t i) {
    const auto& pair = filtered.kept[i];
    std::optional<std::string_view> mt_line;
    if (auto it = mt.find(pair.sub_corpus); it != mt.end() && pair.id < it->second.size()) {
      mt_line = it->second[pair.id];
    }
    records[i] = make_pseudo_record(pair, mt_line, config.label_tokenizer, config.ter);
  });
  summary.counts.emitted = records.size();

  // emit
  const fs::path prefix = config.output_prefix;
  if (prefix.has_parent_path()) fs::create_directories(prefix.parent_path());
  StagingDir staging(prefix);
  const fs::path staged_prefix = staging.dir() / prefix.filename();
  const auto staged = write_qe_dataset(staged_prefix, records, config.gap_tags);

  nlohmann::json run;
  run["version"] = "1";
  run["seeds"] = {{"sample", config.seed}};
  std::string canonical;
  for (const auto& line : config.canonical()) canonical += line + "\n";
  run["config"] = config.canonical();
  run["config_hash"] = sha1_hex(canonical);
  run["input_hashes"] = nlohmann::json::object();
  for (const auto& p : inputs) run["input_hashes"][p.string()] = git_blob_sha1(p);
  run["stage_counts"] = {{"sampled", summary.counts.sampled},
                         {"scored", summary.counts.scored},
                         {"kept", summary.counts.kept},
                         {"filtered_out", summary.counts.filtered_out},
                         {"abstained", summary.counts.abstained},
                         {"emitted", summary.counts.emitted}};
  run["output_files"] = nlohmann::json::array();
  for (const auto& p : staged) {
    const fs::path final_path = prefix.parent_path() / p.filename();
    run["output_files"].push_back({{"path", final_path.string()}, {"sha1", git_blob_sha1(p)}});
  }
  const fs::path staged_run = staging.dir() / (prefix.filename().string() + ".run.json");
  {
    std::ofstream out(staged_run, std::ios::binary | std::ios::trunc);
    out << run.dump(2) << '\n';
    if (!out) fail(Errc::Io, "cannot write run manifest");
  }

  std::vector<fs::path> to_move(staged.begin(), staged.end());
  to_move.push_back(staged_run);
  if (!config.gap_tags) {
    std::error_code ec;
    fs::remove(qe_paths(prefix).gap_tags, ec);  // stale file from an earlier run
  }
  for (const auto& p : to_move) {
    const fs::path final_path = prefix.parent_path() / p.filename();
    fs::rename(p, final_path);
    summary.outputs.push_back(final_path);
  }
  summary.run_manifest = summary.outputs.back();
  return summary;
}

}  // namespace bitextdir
