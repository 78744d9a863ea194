// bitextdir: translation-direction analysis and pseudo-QE data forging.

#include <fmt/format.h>

#include <CLI11.hpp>
#include <charconv>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "bitextdir/corpus.hpp"
#include "bitextdir/direction.hpp"
#include "bitextdir/error.hpp"
#include "bitextdir/evalmetrics.hpp"
#include "bitextdir/parallel.hpp"
#include "bitextdir/pipeline.hpp"
#include "bitextdir/pseudoqe.hpp"
#include "bitextdir/textstats.hpp"

namespace bx = bitextdir;
namespace fs = std::filesystem;

namespace {

struct Globals {
  std::uint64_t seed = 42;
  std::size_t threads = 0;
  bool quiet = false;
  bool verbose = false;
  std::string config;
};

/// Usage problems found after CLI11 parsing (bad values, missing combos).
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct TokenizerFlags {
  std::string mode = "cjk";
  bool lowercase = true;

  void add(CLI::App* cmd, bool default_lowercase) {
    lowercase = default_lowercase;
    cmd->add_option("--tokenizer", mode, "Tokenizer: cjk (CJK codepoints split) or whitespace")
        ->check(CLI::IsMember({"cjk", "whitespace"}))
        ->capture_default_str();
    cmd->add_flag("--lowercase,!--no-lowercase", lowercase, "Unicode lowercasing before splitting")
        ->capture_default_str();
  }
  bx::TokenizerConfig config() const { return {bx::parse_tokenizer_mode(mode), lowercase}; }
};

std::ofstream open_output(const fs::path& path) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) bx::fail(bx::Errc::Io, "cannot write '" + path.string() + "'");
  return out;
}

void note(const Globals& g, const std::string& msg) {
  if (!g.quiet) std::cerr << msg << '\n';
}

std::vector<int> parse_orders(const std::string& text, const char* flag) {
  std::vector<int> out;
  if (text.empty()) return out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    int v = 0;
    const auto [ptr, ec] = std::from_chars(item.data(), item.data() + item.size(), v);
    if (ec != std::errc() || ptr != item.data() + item.size() || v < 1) {
      throw UsageError(fmt::format("{}: '{}' is not a comma-separated list of orders >= 1", flag, text));
    }
    out.push_back(v);
  }
  return out;
}

std::string tags_line(const std::vector<bx::QualityTag>& tags) {
  std::string out;
  for (std::size_t k = 0; k < tags.size(); ++k) {
    if (k) out.push_back(' ');
    out += bx::to_string(tags[k]);
  }
  return out;
}

std::vector<std::vector<std::string>> tokenize_all(const std::vector<std::string>& lines,
                                                   const bx::TokenizerConfig& cfg) {
  std::vector<std::vector<std::string>> out;
  out.reserve(lines.size());
  for (const auto& l : lines) out.push_back(bx::tokenize(l, cfg));
  return out;
}

// --------------------------------------------------------------------------
// stats
// --------------------------------------------------------------------------

struct StatsArgs {
  std::string manifest, scores, reference, fw_src, fw_tgt, out;
  std::string src_lang = "en", tgt_lang = "zh";
  double tau = 0.5;
  std::size_t token_budget = 100000;
  std::size_t max_types = 50000;
  TokenizerFlags tok;
};

void add_partition(std::vector<bx::TextPartition>& parts, const std::string& name,
                   const std::vector<bx::SentencePair>& pairs, const bx::TokenizerConfig& tok) {
  bx::TextPartition p;
  p.name = name;
  for (const auto& pair : pairs) {
    p.src.push_back(bx::tokenize(pair.src, tok));
    p.tgt.push_back(bx::tokenize(pair.tgt, tok));
  }
  parts.push_back(std::move(p));
}

int run_stats(const StatsArgs& a, const Globals& g) {
  const auto tok = a.tok.config();
  const auto fw_src = a.fw_src.empty() ? bx::FunctionWordList::builtin(a.src_lang)
                                       : bx::FunctionWordList::load(a.fw_src, a.src_lang);
  const auto fw_tgt = a.fw_tgt.empty() ? bx::FunctionWordList::builtin(a.tgt_lang)
                                       : bx::FunctionWordList::load(a.fw_tgt, a.tgt_lang);
  const auto manifest = bx::load_manifest(a.manifest);

  std::vector<bx::TextPartition> parts;
  if (!a.scores.empty()) {
    const auto pairs = bx::read_pairs(manifest);
    const auto table = bx::make_score_table(bx::read_scores_tsv(a.scores));
    add_partition(parts, "S-O",
                  bx::filter_by_direction(pairs, table, bx::KeepPolicy::SourceOriginal, a.tau).kept, tok);
    add_partition(parts, "T-O",
                  bx::filter_by_direction(pairs, table, bx::KeepPolicy::TargetOriginal, a.tau).kept, tok);
    add_partition(parts, "Mix", pairs, tok);
  } else {
    for (const auto& e : manifest.entries()) add_partition(parts, e.name, bx::read_sub_corpus(e), tok);
  }
  if (!a.reference.empty()) {
    const auto ref = bx::load_manifest(a.reference);
    for (const auto& e : ref.entries()) add_partition(parts, e.name, bx::read_sub_corpus(e), tok);
  }
  for (const auto& p : parts) {
    if (p.src.empty()) bx::fail(bx::Errc::EmptyPartition, "partition '" + p.name + "' is empty");
  }

  bx::StyleReportConfig cfg{a.token_budget, g.seed, a.max_types};
  const auto report = bx::corpus_style_report(parts, fw_src, fw_tgt, cfg);
  if (a.out.empty()) {
    bx::write_style_csv(std::cout, report);
    std::cout << '\n';
    bx::write_js_csv(std::cout, report);
  } else {
    auto style = open_output(a.out + ".style.csv");
    bx::write_style_csv(style, report);
    auto js = open_output(a.out + ".js.csv");
    bx::write_js_csv(js, report);
    note(g, fmt::format("wrote {}.style.csv and {}.js.csv", a.out, a.out));
  }
  return 0;
}

// --------------------------------------------------------------------------
// jsdiv
// --------------------------------------------------------------------------

struct JsArgs {
  std::string a, b;
  std::size_t max_types = 50000;
  TokenizerFlags tok;
};

int run_jsdiv(const JsArgs& args) {
  const auto tok = args.tok.config();
  auto tokens_of = [&](const std::string& path) {
    std::vector<std::string> all;
    for (const auto& line : bx::read_lines(path)) {
      auto t = bx::tokenize(line, tok);
      all.insert(all.end(), t.begin(), t.end());
    }
    return all;
  };
  const auto p = bx::vocab_distribution(tokens_of(args.a), args.max_types);
  const auto q = bx::vocab_distribution(tokens_of(args.b), args.max_types);
  std::cout << "partition_a,partition_b,js_nats\n";
  std::cout << fmt::format("{},{},{:.6f}\n", args.a, args.b, bx::js_divergence(p, q));
  return 0;
}

// --------------------------------------------------------------------------
// train-direction
// --------------------------------------------------------------------------

struct TrainArgs {
  std::string side, original, translationese, out;
  double alpha = 1.0;
  int hash_bits = 20;
  std::uint64_t hash_seed = 0;
  std::string word_orders = "1,2", char_orders = "2,3";
  TokenizerFlags tok;
};

int run_train(const TrainArgs& a, const Globals& g) {
  const auto side = bx::parse_side(a.side);
  if (!side) throw UsageError("--side must be source or target");
  if (a.hash_bits < 10 || a.hash_bits > 28) throw UsageError("--hash-bits must lie in [10, 28]");
  if (!(a.alpha > 0.0)) throw UsageError("--alpha must be > 0");
  bx::FeatureConfig features;
  features.word_ngram_orders = parse_orders(a.word_orders, "--word-orders");
  features.char_ngram_orders = parse_orders(a.char_orders, "--char-orders");
  features.hash_buckets = 1u << a.hash_bits;
  features.hash_seed = a.hash_seed;
  features.validate();

  bx::NaiveBayesTrainer trainer(*side, features, a.tok.config());
  std::size_t n_orig = 0, n_trans = 0;
  for (const auto& [path, cls, count] :
       {std::tuple{a.original, bx::TextClass::Original, &n_orig},
        std::tuple{a.translationese, bx::TextClass::Translationese, &n_trans}}) {
    bx::LineReader reader(path);
    std::string line;
    while (reader.next(line)) {
      if (bx::is_blank(line)) continue;
      trainer.add_text(cls, line);
      ++*count;
    }
  }
  const auto model = trainer.finish(a.alpha);
  const fs::path out(a.out);
  if (out.has_parent_path()) fs::create_directories(out.parent_path());
  bx::save_model(model, out);
  note(g, fmt::format("trained {} model on {} original / {} translationese lines -> {}", a.side, n_orig,
                      n_trans, a.out));
  return 0;
}

// --------------------------------------------------------------------------
// classify
// --------------------------------------------------------------------------

struct ClassifyArgs {
  std::string manifest, model_src, model_tgt, out;
  double band = 0.0;
};

int run_classify(const ClassifyArgs& a, const Globals& g) {
  if (!(a.band >= 0.0 && a.band < 0.5)) throw UsageError("--band must lie in [0, 0.5)");
  const auto manifest = bx::load_manifest(a.manifest);
  const auto model_src = bx::load_model(a.model_src);
  const auto model_tgt = bx::load_model(a.model_tgt);
  auto pairs = bx::read_pairs(manifest);
  std::vector<bx::ScoreRow> rows(pairs.size());
  bx::parallel_for(pairs.size(), g.threads, [&](std::size_t i) {
    rows[i] = {pairs[i].sub_corpus, pairs[i].id, bx::classify_pair(model_src, model_tgt, pairs[i], a.band)};
  });
  if (a.out.empty()) {
    bx::write_scores_tsv(std::cout, rows);
  } else {
    auto out = open_output(a.out);
    bx::write_scores_tsv(out, rows);
    note(g, fmt::format("scored {} pairs -> {}", rows.size(), a.out));
  }
  return 0;
}

// --------------------------------------------------------------------------
// ter / make-pseudo
// --------------------------------------------------------------------------

struct TerArgs {
  std::string hyp, ref, out;
  std::size_t max_shift_distance = 10, max_shift_size = 10;
  bool gap_tags = true;
  TokenizerFlags tok;
};

int run_ter(const TerArgs& a, const Globals& g) {
  const auto hyp = bx::read_lines(a.hyp);
  const auto ref = bx::read_lines(a.ref);
  if (hyp.size() != ref.size()) {
    bx::fail(bx::Errc::LengthMismatch, fmt::format("{} has {} lines but {} has {}", a.hyp, hyp.size(),
                                                   a.ref, ref.size()));
  }
  const auto tok = a.tok.config();
  const bx::TerOptions opts{a.max_shift_distance, a.max_shift_size};
  std::vector<bx::TerResult> scores(hyp.size());
  std::vector<bx::WordTags> tags(hyp.size());
  bx::parallel_for(hyp.size(), g.threads, [&](std::size_t i) {
    const auto h = bx::tokenize(hyp[i], tok);
    const auto r = bx::tokenize(ref[i], tok);
    auto out = bx::ter(h, r, opts);
    scores[i] = out.result;
    tags[i] = bx::word_tags(out.script, h.size());
  });
  if (a.out.empty()) {
    for (const auto& s : scores) std::cout << bx::format_score(s.score) << '\n';
    return 0;
  }
  auto hter = open_output(a.out + ".hter");
  auto tag_out = open_output(a.out + ".tags");
  std::optional<std::ofstream> gap_out;
  if (a.gap_tags) gap_out = open_output(a.out + ".gap_tags");
  for (std::size_t i = 0; i < scores.size(); ++i) {
    hter << bx::format_score(scores[i].score) << '\n';
    tag_out << tags_line(tags[i].tgt_tags) << '\n';
    if (gap_out) *gap_out << tags_line(tags[i].gap_tags) << '\n';
  }
  note(g, fmt::format("scored {} segments -> {}.hter", scores.size(), a.out));
  return 0;
}

struct PseudoArgs {
  std::string src, mt, ref, out;
  std::size_t max_shift_distance = 10, max_shift_size = 10;
  bool gap_tags = true;
  TokenizerFlags tok;
};

int run_make_pseudo(const PseudoArgs& a, const Globals& g) {
  const auto entry_manifest = bx::CorpusManifest::from_entries({{"input", a.src, a.ref, 0}});
  const auto pairs = bx::read_sub_corpus(entry_manifest.entries().front());
  const auto mt = bx::read_lines(a.mt);
  const auto tok = a.tok.config();
  const bx::TerOptions opts{a.max_shift_distance, a.max_shift_size};
  std::vector<bx::PseudoQERecord> records(pairs.size());
  bx::parallel_for(pairs.size(), g.threads, [&](std::size_t i) {
    std::optional<std::string_view> line;
    if (pairs[i].id < mt.size()) line = mt[pairs[i].id];
    records[i] = bx::make_pseudo_record(pairs[i], line, tok, opts);
  });
  bx::write_qe_dataset(a.out, records, a.gap_tags);
  note(g, fmt::format("wrote {} records under {}", records.size(), a.out));
  return 0;
}

// --------------------------------------------------------------------------
// sample / mix / forge
// --------------------------------------------------------------------------

struct SampleArgs {
  std::string manifest, out, shortfall = "take-all";
  std::size_t per_corpus = 0;
};

int run_sample(const SampleArgs& a, const Globals& g) {
  if (a.per_corpus < 1) throw UsageError("--per-corpus must be >= 1");
  const auto manifest = bx::load_manifest(a.manifest);
  bx::SamplingPlan plan{a.per_corpus, g.seed,
                        a.shortfall == "error" ? bx::ShortfallPolicy::Error : bx::ShortfallPolicy::TakeAll};
  const auto sample = bx::balanced_sample(manifest, plan);
  auto src = open_output(a.out + ".src");
  auto tgt = open_output(a.out + ".tgt");
  auto ids = open_output(a.out + ".ids");
  for (const auto& p : sample) {
    src << p.src << '\n';
    tgt << p.tgt << '\n';
    ids << p.sub_corpus << '\t' << p.id << '\n';
  }
  note(g, fmt::format("sampled {} pairs -> {}.{{src,tgt,ids}}", sample.size(), a.out));
  return 0;
}

struct MixArgs {
  std::string real, synth, ratio, out;
};

int run_mix(const MixArgs& a, const Globals& g) {
  const auto spec = bx::parse_mix_ratio(a.ratio, g.seed);
  const auto real = bx::read_qe_dataset(a.real);
  const auto synth = bx::read_qe_dataset(a.synth);
  const auto mixed = bx::mix_datasets(real, synth, spec);
  const bool gaps = fs::is_regular_file(bx::qe_paths(a.real).gap_tags) &&
                    fs::is_regular_file(bx::qe_paths(a.synth).gap_tags);
  bx::write_qe_dataset(a.out, mixed, gaps);
  note(g, fmt::format("mixed {} real + {} synthetic -> {}", real.size(), mixed.size() - real.size(), a.out));
  return 0;
}

struct ForgeArgs {
  std::vector<std::string> overrides;
};

int run_forge_cmd(const ForgeArgs& a, const Globals& g, bool seed_given, bool threads_given) {
  std::vector<std::string> overrides = a.overrides;
  if (seed_given) overrides.push_back(fmt::format("run.seed={}", g.seed));
  if (threads_given) overrides.push_back(fmt::format("run.threads={}", g.threads));
  std::optional<fs::path> config;
  if (!g.config.empty()) config = g.config;
  auto cfg = bx::load_forge_config(config, overrides);
  if (!seed_given && !config) cfg.seed = g.seed;
  const auto summary = bx::run_forge(cfg);
  if (summary.empty_warning) std::cerr << "warning: no pairs survived the direction filter\n";
  const auto& c = summary.counts;
  note(g, fmt::format("forge: sampled={} scored={} kept={} filtered_out={} abstained={} emitted={}",
                      c.sampled, c.scored, c.kept, c.filtered_out, c.abstained, c.emitted));
  if (g.verbose) {
    for (const auto& p : summary.outputs) std::cerr << "  " << p.string() << '\n';
  }
  return 0;
}

// --------------------------------------------------------------------------
// eval / validate-format
// --------------------------------------------------------------------------

struct EvalArgs {
  std::string task, pred, gold;
};

std::vector<double> read_scores_file(const std::string& path) {
  std::vector<double> out;
  bx::LineReader reader(path);
  std::string line;
  while (reader.next(line)) {
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(line.data(), line.data() + line.size(), v);
    if (ec != std::errc() || ptr != line.data() + line.size()) {
      bx::fail(bx::Errc::FormatViolation,
               fmt::format("{}:{}: '{}' is not a number", path, reader.line_number(), line));
    }
    out.push_back(v);
  }
  return out;
}

std::vector<std::vector<std::string>> read_tag_file(const std::string& path) {
  return tokenize_all(bx::read_lines(path), {bx::TokenizerMode::Whitespace, false});
}

int run_eval(const EvalArgs& a) {
  std::cout << "metric,value\n";
  if (a.task == "sentence") {
    const auto pred = read_scores_file(a.pred);
    const auto gold = read_scores_file(a.gold);
    std::cout << fmt::format("pearson,{:.6f}\n", bx::pearson(pred, gold));
  } else if (a.task == "word") {
    const auto pred = read_tag_file(a.pred);
    const auto gold = read_tag_file(a.gold);
    if (pred.size() != gold.size()) {
      bx::fail(bx::Errc::LengthMismatch, fmt::format("{} has {} lines, {} has {}", a.pred, pred.size(),
                                                     a.gold, gold.size()));
    }
    std::vector<int> p, q;
    for (std::size_t line = 0; line < pred.size(); ++line) {
      if (pred[line].size() != gold[line].size()) {
        bx::fail(bx::Errc::LengthMismatch,
                 fmt::format("{}:{}: {} tags vs {} gold tags", a.pred, line + 1, pred[line].size(),
                             gold[line].size()));
      }
      for (std::size_t k = 0; k < pred[line].size(); ++k) {
        for (const auto* tag : {&pred[line][k], &gold[line][k]}) {
          if (*tag != "OK" && *tag != "BAD") {
            bx::fail(bx::Errc::FormatViolation, fmt::format("line {}: invalid tag '{}'", line + 1, *tag));
          }
        }
        p.push_back(pred[line][k] == "BAD");
        q.push_back(gold[line][k] == "BAD");
      }
    }
    std::cout << fmt::format("mcc,{:.6f}\n", bx::mcc(p, q, 1));
  } else {
    // direction: pred is a scores TSV, gold is sub_corpus<TAB>line<TAB>label
    const auto rows = bx::read_scores_tsv(a.pred);
    std::map<bx::PairKey, bx::Direction> gold;
    bx::LineReader reader(a.gold);
    std::string line;
    while (reader.next(line)) {
      if (line.empty() || line.front() == '#') continue;
      std::vector<std::string> f;
      std::stringstream ss(line);
      std::string field;
      while (std::getline(ss, field, '\t')) f.push_back(field);
      std::size_t id = 0;
      const auto dir = f.size() == 3 ? bx::parse_direction(f[2]) : std::nullopt;
      const bool id_ok = f.size() == 3 && std::from_chars(f[1].data(), f[1].data() + f[1].size(), id).ec ==
                                              std::errc();
      if (!dir || !id_ok || *dir == bx::Direction::Unknown) {
        bx::fail(bx::Errc::FormatViolation,
                 fmt::format("{}:{}: expected sub_corpus<TAB>line<TAB>SourceOriginal|TargetOriginal", a.gold,
                             reader.line_number()));
      }
      gold[{f[0], id}] = *dir;
    }
    std::vector<bx::Decision> pred;
    std::vector<bx::Direction> labels;
    for (const auto& r : rows) {
      auto it = gold.find({r.sub_corpus, r.line});
      if (it == gold.end()) {
        bx::fail(bx::Errc::MissingScore, fmt::format("no gold label for {} line {}", r.sub_corpus, r.line));
      }
      pred.push_back(r.score.decision);
      labels.push_back(it->second);
    }
    if (pred.size() != gold.size()) {
      bx::fail(bx::Errc::LengthMismatch,
               fmt::format("{} predictions for {} gold labels", pred.size(), gold.size()));
    }
    const auto ev = bx::evaluate_classifier(pred, labels);
    std::cout << fmt::format("macro_f1,{:.6f}\n", ev.macro_f1);
    const char* names[2] = {"source_original", "target_original"};
    for (int k = 0; k < 2; ++k) {
      std::cout << fmt::format("precision_{},{:.6f}\n", names[k], ev.precision[k]);
      std::cout << fmt::format("recall_{},{:.6f}\n", names[k], ev.recall[k]);
      std::cout << fmt::format("f1_{},{:.6f}\n", names[k], ev.f1[k]);
    }
  }
  return 0;
}

int run_validate(const std::string& prefix, const Globals& g) {
  const auto report = bx::validate_format(prefix);
  if (!report.ok()) {
    for (const auto& p : report.problems) std::cerr << "error: " << p << '\n';
    return 2;
  }
  note(g, fmt::format("{}: {} records OK{}", prefix, report.n_records,
                      report.has_gap_tags ? " (with gap tags)" : ""));
  return 0;
}

constexpr const char* kFormats = R"(File formats:
  manifest      name<TAB>src_path<TAB>tgt_path per line; '#' lines ignored
  corpus        UTF-8, one sentence per line (CRLF accepted)
  scores TSV    sub_corpus<TAB>line<TAB>p_src_side<TAB>p_tgt_side<TAB>p_ensemble<TAB>decision
  QE dataset    <prefix>.src .mt .pe .hter .tags [.gap_tags]
  model         BITEXTDIR<TAB>v1 header, key<TAB>value metadata, binary likelihood table)";

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Translation-direction analysis and pseudo quality-estimation data forging"};
  app.require_subcommand(1);
  app.fallthrough();
  app.footer(kFormats);

  Globals g;
  auto* seed_opt = app.add_option("--seed", g.seed, "Random seed for every randomized step")
                       ->envname("BITEXTDIR_SEED")
                       ->capture_default_str();
  auto* threads_opt = app.add_option("--threads", g.threads, "Worker threads (0 = all cores)");
  app.add_flag("-q,--quiet", g.quiet, "Suppress progress messages");
  app.add_flag("-v,--verbose", g.verbose, "Print extra detail");
  app.add_option("--config", g.config, "INI run configuration (forge)");

  StatsArgs stats;
  auto* c_stats = app.add_subcommand("stats", "Style profiles (TTR, lexical density) and target-side JS divergence");
  c_stats->add_option("--manifest", stats.manifest, "Corpus manifest; each entry is a partition")->required();
  c_stats->add_option("--scores", stats.scores, "Direction scores TSV: partition the manifest into S-O, T-O, Mix");
  c_stats->add_option("--tau", stats.tau, "Direction threshold used with --scores")->capture_default_str();
  c_stats->add_option("--reference", stats.reference, "Manifest of reference partitions (e.g. real QE data)");
  c_stats->add_option("--fw-src", stats.fw_src, "Source function-word list (default: bundled --src-lang list)");
  c_stats->add_option("--fw-tgt", stats.fw_tgt, "Target function-word list (default: bundled --tgt-lang list)");
  c_stats->add_option("--src-lang", stats.src_lang, "Bundled source list: en or zh")->capture_default_str();
  c_stats->add_option("--tgt-lang", stats.tgt_lang, "Bundled target list: en or zh")->capture_default_str();
  c_stats->add_option("--token-budget", stats.token_budget, "Tokens sampled per side for TTR")->capture_default_str();
  c_stats->add_option("--max-types", stats.max_types, "Vocabulary cap for JS (0 = none)")->capture_default_str();
  c_stats->add_option("--out", stats.out, "Write <out>.style.csv and <out>.js.csv instead of stdout");
  stats.tok.add(c_stats, true);

  JsArgs js;
  auto* c_js = app.add_subcommand("jsdiv", "JS divergence between the vocabularies of two text files");
  c_js->add_option("--a", js.a, "First text file")->required();
  c_js->add_option("--b", js.b, "Second text file")->required();
  c_js->add_option("--max-types", js.max_types, "Vocabulary cap (0 = none)")->capture_default_str();
  js.tok.add(c_js, true);

  TrainArgs train;
  auto* c_train = app.add_subcommand("train-direction", "Train one side of the direction classifier");
  c_train->add_option("--side", train.side, "source or target")->required();
  c_train->add_option("--original", train.original, "Original (native) text, one sentence per line")->required();
  c_train->add_option("--translationese", train.translationese, "Translated text, one sentence per line")->required();
  c_train->add_option("--out", train.out, "Model file to write")->required();
  c_train->add_option("--alpha", train.alpha, "Additive smoothing")->capture_default_str();
  c_train->add_option("--hash-bits", train.hash_bits, "log2 of the hash bucket count")->capture_default_str();
  c_train->add_option("--hash-seed", train.hash_seed, "Feature hash seed")->capture_default_str();
  c_train->add_option("--word-orders", train.word_orders, "Word n-gram orders")->capture_default_str();
  c_train->add_option("--char-orders", train.char_orders, "Character n-gram orders (empty = none)")->capture_default_str();
  train.tok.add(c_train, true);

  ClassifyArgs cls;
  auto* c_cls = app.add_subcommand("classify", "Score every pair of a corpus with the two-sided ensemble");
  c_cls->add_option("--manifest", cls.manifest, "Corpus manifest")->required();
  c_cls->add_option("--model-src", cls.model_src, "Source-side model")->required();
  c_cls->add_option("--model-tgt", cls.model_tgt, "Target-side model")->required();
  c_cls->add_option("--band", cls.band, "Abstain band around 0.5")->capture_default_str();
  c_cls->add_option("--out", cls.out, "Scores TSV (default stdout)");

  TerArgs terargs;
  auto* c_ter = app.add_subcommand("ter", "TER with shifts plus OK/BAD word tags for line-aligned files");
  c_ter->add_option("--hyp", terargs.hyp, "MT hypotheses")->required();
  c_ter->add_option("--ref", terargs.ref, "References")->required();
  c_ter->add_option("--out", terargs.out, "Write <out>.hter, .tags, .gap_tags (default: scores to stdout)");
  c_ter->add_option("--max-shift-distance", terargs.max_shift_distance)->capture_default_str();
  c_ter->add_option("--max-shift-size", terargs.max_shift_size)->capture_default_str();
  c_ter->add_flag("--gap-tags,!--no-gap-tags", terargs.gap_tags, "Emit gap tags")->capture_default_str();
  terargs.tok.add(c_ter, false);

  PseudoArgs pseudo;
  auto* c_pseudo = app.add_subcommand("make-pseudo", "Build a pseudo-QE dataset from src/mt/ref files");
  c_pseudo->add_option("--src", pseudo.src, "Source sentences")->required();
  c_pseudo->add_option("--mt", pseudo.mt, "MT hypotheses, line-aligned")->required();
  c_pseudo->add_option("--ref", pseudo.ref, "References (parallel target side)")->required();
  c_pseudo->add_option("--out", pseudo.out, "Output prefix")->required();
  c_pseudo->add_option("--max-shift-distance", pseudo.max_shift_distance)->capture_default_str();
  c_pseudo->add_option("--max-shift-size", pseudo.max_shift_size)->capture_default_str();
  c_pseudo->add_flag("--gap-tags,!--no-gap-tags", pseudo.gap_tags, "Emit gap tags")->capture_default_str();
  pseudo.tok.add(c_pseudo, false);

  SampleArgs sample;
  auto* c_sample = app.add_subcommand("sample", "Draw an equal number of pairs from every sub-corpus");
  c_sample->add_option("--manifest", sample.manifest, "Corpus manifest")->required();
  c_sample->add_option("--per-corpus", sample.per_corpus, "Pairs per sub-corpus")->required();
  c_sample->add_option("--shortfall", sample.shortfall, "take-all or error")
      ->check(CLI::IsMember({"take-all", "error"}))
      ->capture_default_str();
  c_sample->add_option("--out", sample.out, "Writes <out>.src, .tgt, .ids")->required();

  MixArgs mix;
  auto* c_mix = app.add_subcommand("mix", "Mix real and synthetic QE data at a given ratio");
  c_mix->add_option("--real", mix.real, "Real QE dataset prefix")->required();
  c_mix->add_option("--synth", mix.synth, "Synthetic QE dataset prefix")->required();
  c_mix->add_option("--ratio", mix.ratio, "real:synthetic, e.g. 1:10")->required();
  c_mix->add_option("--out", mix.out, "Output prefix")->required();

  ForgeArgs forge;
  auto* c_forge = app.add_subcommand("forge", "Run sample -> classify -> filter -> pseudo-label -> emit");
  c_forge->add_option("--set", forge.overrides, "Override a config key: section.key=value (repeatable)");
  c_forge->footer(
      "Config keys: corpus.manifest corpus.mt sample.per_corpus sample.shortfall direction.model_src\n"
      "direction.model_tgt direction.scores direction.band filter.keep filter.tau labels.tokenizer\n"
      "labels.lowercase labels.max_shift_distance labels.max_shift_size output.prefix output.gap_tags\n"
      "run.seed run.threads");

  EvalArgs ev;
  auto* c_eval = app.add_subcommand("eval", "Pearson (sentence), MCC (word) or macro F1 (direction)");
  c_eval->add_option("--task", ev.task, "sentence, word or direction")
      ->required()
      ->check(CLI::IsMember({"sentence", "word", "direction"}));
  c_eval->add_option("--pred", ev.pred, "Predictions (.hter, .tags or scores TSV)")->required();
  c_eval->add_option("--gold", ev.gold, "Gold (.hter, .tags or sub_corpus<TAB>line<TAB>label)")->required();

  std::string validate_prefix;
  auto* c_validate = app.add_subcommand("validate-format", "Check a dataset against the WMT QE layout");
  c_validate->add_option("--prefix", validate_prefix, "Dataset prefix")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n\n";
    const CLI::App* failing = &app;
    for (auto* sub : app.get_subcommands()) failing = sub;
    std::cerr << failing->help();
    return 1;
  }

  try {
    if (*c_stats) return run_stats(stats, g);
    if (*c_js) return run_jsdiv(js);
    if (*c_train) return run_train(train, g);
    if (*c_cls) return run_classify(cls, g);
    if (*c_ter) return run_ter(terargs, g);
    if (*c_pseudo) return run_make_pseudo(pseudo, g);
    if (*c_sample) return run_sample(sample, g);
    if (*c_mix) return run_mix(mix, g);
    if (*c_forge) return run_forge_cmd(forge, g, seed_opt->count() > 0 || std::getenv("BITEXTDIR_SEED"),
                                       threads_opt->count() > 0);
    if (*c_eval) return run_eval(ev);
    if (*c_validate) return run_validate(validate_prefix, g);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const bx::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return e.code() == bx::Errc::InvalidArgument ? 1 : 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 1;
}
