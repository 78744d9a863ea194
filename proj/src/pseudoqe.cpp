#include "bitextdir/pseudoqe.hpp"

#include <fmt/format.h>

#include <charconv>
#include <fstream>
#include <sstream>

#include "bitextdir/error.hpp"

namespace bitextdir {

namespace fs = std::filesystem;

PseudoQERecord make_pseudo_record(const SentencePair& pair,
                                  std::optional<std::string_view> mt_line,
                                  const TokenizerConfig& tok_cfg, const TerOptions& ter_opts) {
  if (!mt_line) {
    fail(Errc::MissingMtLine, "no MT hypothesis for sub-corpus '" + pair.sub_corpus + "' line " +
                                  std::to_string(pair.id + 1));
  }
  PseudoQERecord rec;
  rec.src = pair.src;
  rec.mt = tokenize(*mt_line, tok_cfg);
  rec.ref = tokenize(pair.tgt, tok_cfg);
  auto scored = ter(rec.mt, rec.ref, ter_opts);
  auto tags = word_tags(scored.script, rec.mt.size());
  rec.sentence_score = scored.result.score;
  rec.tgt_tags = std::move(tags.tgt_tags);
  rec.gap_tags = std::move(tags.gap_tags);
  return rec;
}

QeDatasetPaths qe_paths(const fs::path& prefix) {
  auto with = [&](const char* ext) { return fs::path(prefix.string() + ext); };
  return {with(".src"), with(".mt"), with(".pe"), with(".hter"), with(".tags"), with(".gap_tags")};
}

std::string format_score(double score) { return fmt::format("{:.6f}", score); }

namespace {

std::string join(const std::vector<std::string>& tokens) {
  std::string out;
  for (std::size_t k = 0; k < tokens.size(); ++k) {
    if (k) out.push_back(' ');
    out += tokens[k];
  }
  return out;
}

std::string join_tags(const std::vector<QualityTag>& tags) {
  std::string out;
  for (std::size_t k = 0; k < tags.size(); ++k) {
    if (k) out.push_back(' ');
    out += to_string(tags[k]);
  }
  return out;
}

std::vector<std::string> split_ws(const std::string& line) {
  std::vector<std::string> out;
  std::istringstream in(line);
  std::string tok;
  while (in >> tok) out.push_back(tok);
  return out;
}

std::optional<QualityTag> parse_tag(std::string_view s) {
  if (s == "OK") return QualityTag::OK;
  if (s == "BAD") return QualityTag::BAD;
  return std::nullopt;
}

std::ofstream open_out(const fs::path& p) {
  std::ofstream out(p, std::ios::binary | std::ios::trunc);
  if (!out) fail(Errc::Io, "cannot write '" + p.string() + "'");
  return out;
}

// Strict "d.dddddd" parse; returns nullopt on anything else.
std::optional<double> parse_score(const std::string& s) {
  const auto dot = s.find('.');
  if (dot == std::string::npos || s.size() - dot - 1 != 6 || dot == 0) return std::nullopt;
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) return std::nullopt;
  return v;
}

}  // namespace

std::vector<fs::path> write_qe_dataset(const fs::path& prefix,
                                       const std::vector<PseudoQERecord>& records,
                                       bool with_gap_tags) {
  const auto paths = qe_paths(prefix);
  if (prefix.has_parent_path()) fs::create_directories(prefix.parent_path());
  auto src = open_out(paths.src);
  auto mt = open_out(paths.mt);
  auto pe = open_out(paths.pe);
  auto hter = open_out(paths.hter);
  auto tags = open_out(paths.tags);
  std::ofstream gaps;
  if (with_gap_tags) gaps = open_out(paths.gap_tags);

  for (const auto& r : records) {
    src << r.src << '\n';
    mt << join(r.mt) << '\n';
    pe << join(r.ref) << '\n';
    hter << format_score(r.sentence_score) << '\n';
    tags << join_tags(r.tgt_tags) << '\n';
    if (with_gap_tags) gaps << join_tags(r.gap_tags) << '\n';
  }
  for (auto* s : {&src, &mt, &pe, &hter, &tags}) {
    s->flush();
    if (!*s) fail(Errc::Io, "write failed under prefix '" + prefix.string() + "'");
  }
  std::vector<fs::path> written{paths.src, paths.mt, paths.pe, paths.hter, paths.tags};
  if (with_gap_tags) {
    gaps.flush();
    if (!gaps) fail(Errc::Io, "cannot write '" + paths.gap_tags.string() + "'");
    written.push_back(paths.gap_tags);
  }
  return written;
}

std::vector<PseudoQERecord> read_qe_dataset(const fs::path& prefix) {
  const auto report = validate_format(prefix);
  if (!report.ok()) fail(Errc::FormatViolation, report.problems.front());

  const auto paths = qe_paths(prefix);
  const auto src = read_lines(paths.src);
  const auto mt = read_lines(paths.mt);
  const auto pe = read_lines(paths.pe);
  const auto hter = read_lines(paths.hter);
  const auto tags = read_lines(paths.tags);
  std::vector<std::string> gaps;
  if (report.has_gap_tags) gaps = read_lines(paths.gap_tags);

  std::vector<PseudoQERecord> out(src.size());
  for (std::size_t k = 0; k < src.size(); ++k) {
    auto& r = out[k];
    r.src = src[k];
    r.mt = split_ws(mt[k]);
    r.ref = split_ws(pe[k]);
    r.sentence_score = *parse_score(hter[k]);
    for (const auto& t : split_ws(tags[k])) r.tgt_tags.push_back(*parse_tag(t));
    if (report.has_gap_tags) {
      for (const auto& t : split_ws(gaps[k])) r.gap_tags.push_back(*parse_tag(t));
    }
  }
  return out;
}

FormatReport validate_format(const fs::path& prefix) {
  FormatReport report;
  const auto paths = qe_paths(prefix);
  auto problem = [&](const fs::path& p, std::size_t line, const std::string& msg) {
    report.problems.push_back(p.string() + ":" + std::to_string(line) + ": " + msg);
  };

  for (const auto* p : {&paths.src, &paths.mt, &paths.pe, &paths.hter, &paths.tags}) {
    if (!fs::is_regular_file(*p)) problem(*p, 0, "missing file");
  }
  if (!report.ok()) return report;
  report.has_gap_tags = fs::is_regular_file(paths.gap_tags);

  std::vector<std::string> src, mt, pe, hter, tags, gaps;
  try {
    src = read_lines(paths.src);
    mt = read_lines(paths.mt);
    pe = read_lines(paths.pe);
    hter = read_lines(paths.hter);
    tags = read_lines(paths.tags);
    if (report.has_gap_tags) gaps = read_lines(paths.gap_tags);
  } catch (const Error& e) {
    report.problems.emplace_back(e.what());
    return report;
  }

  const std::size_t n = src.size();
  report.n_records = n;
  auto check_count = [&](const fs::path& p, std::size_t count) {
    if (count != n) {
      problem(p, count, "has " + std::to_string(count) + " lines, expected " + std::to_string(n));
    }
  };
  check_count(paths.mt, mt.size());
  check_count(paths.pe, pe.size());
  check_count(paths.hter, hter.size());
  check_count(paths.tags, tags.size());
  if (report.has_gap_tags) check_count(paths.gap_tags, gaps.size());
  if (!report.ok()) return report;

  for (std::size_t k = 0; k < n; ++k) {
    const std::size_t line = k + 1;
    if (is_blank(src[k])) problem(paths.src, line, "blank source sentence");
    if (is_blank(pe[k])) problem(paths.pe, line, "blank reference");

    const auto score = parse_score(hter[k]);
    if (!score) {
      problem(paths.hter, line, "score '" + hter[k] + "' is not a 6-decimal number");
    } else if (*score < 0.0 || *score > 1.0) {
      problem(paths.hter, line, "score " + hter[k] + " outside [0, 1]");
    }

    const std::size_t n_mt = split_ws(mt[k]).size();
    const auto word_tags = split_ws(tags[k]);
    if (word_tags.size() != n_mt) {
      problem(paths.tags, line, std::to_string(word_tags.size()) + " tags for " +
                                    std::to_string(n_mt) + " MT tokens");
    }
    for (const auto& t : word_tags) {
      if (!parse_tag(t)) problem(paths.tags, line, "invalid tag '" + t + "'");
    }
    if (report.has_gap_tags) {
      const auto gap_tags = split_ws(gaps[k]);
      if (gap_tags.size() != n_mt + 1) {
        problem(paths.gap_tags, line, std::to_string(gap_tags.size()) + " gap tags for " +
                                          std::to_string(n_mt) + " MT tokens");
      }
      for (const auto& t : gap_tags) {
        if (!parse_tag(t)) problem(paths.gap_tags, line, "invalid tag '" + t + "'");
      }
    }
  }
  return report;
}

}  // namespace bitextdir
