#include "bitextdir/corpus.hpp"

#include <unicode/uchar.h>
#include <unicode/uscript.h>

#include <set>

#include "bitextdir/error.hpp"

namespace bitextdir {

bool decode_utf8(std::string_view text, std::u32string& out) {
  out.clear();
  out.reserve(text.size());
  const auto* p = reinterpret_cast<const unsigned char*>(text.data());
  const auto* end = p + text.size();
  while (p < end) {
    unsigned char lead = *p;
    if (lead < 0x80) {
      out.push_back(lead);
      ++p;
      continue;
    }
    int extra;
    char32_t cp;
    char32_t min;
    if ((lead & 0xE0) == 0xC0) {
      extra = 1, cp = lead & 0x1F, min = 0x80;
    } else if ((lead & 0xF0) == 0xE0) {
      extra = 2, cp = lead & 0x0F, min = 0x800;
    } else if ((lead & 0xF8) == 0xF0) {
      extra = 3, cp = lead & 0x07, min = 0x10000;
    } else {
      return false;
    }
    if (end - p <= extra) return false;
    for (int k = 1; k <= extra; ++k) {
      unsigned char c = p[k];
      if ((c & 0xC0) != 0x80) return false;
      cp = (cp << 6) | (c & 0x3F);
    }
    if (cp < min || cp > 0x10FFFF || (cp >= 0xD800 && cp <= 0xDFFF)) return false;
    out.push_back(cp);
    p += extra + 1;
  }
  return true;
}

void append_utf8(char32_t cp, std::string& out) {
  if (cp < 0x80) {
    out.push_back(static_cast<char>(cp));
  } else if (cp < 0x800) {
    out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else if (cp < 0x10000) {
    out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else {
    out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  }
}

bool is_unicode_whitespace(char32_t cp) noexcept {
  return u_isUWhiteSpace(static_cast<UChar32>(cp));
}

bool is_cjk(char32_t cp) noexcept {
  const auto c = static_cast<UChar32>(cp);
  UErrorCode status = U_ZERO_ERROR;
  switch (uscript_getScript(c, &status)) {
    case USCRIPT_HAN:
    case USCRIPT_HIRAGANA:
    case USCRIPT_KATAKANA:
    case USCRIPT_HANGUL:
    case USCRIPT_BOPOMOFO:
      return true;
    default:
      break;
  }
  const UBlockCode block = ublock_getCode(c);
  return (block == UBLOCK_CJK_SYMBOLS_AND_PUNCTUATION ||
          block == UBLOCK_HALFWIDTH_AND_FULLWIDTH_FORMS) &&
         !u_isUWhiteSpace(c);
}

std::string_view to_string(TokenizerMode mode) noexcept {
  return mode == TokenizerMode::Whitespace ? "whitespace" : "cjk";
}

TokenizerMode parse_tokenizer_mode(std::string_view text) {
  if (text == "whitespace" || text == "Whitespace") return TokenizerMode::Whitespace;
  if (text == "cjk" || text == "CharPerCjkElseWhitespace") {
    return TokenizerMode::CharPerCjkElseWhitespace;
  }
  fail(Errc::InvalidArgument, "unknown tokenizer mode '" + std::string(text) + "'");
}

std::vector<std::string> tokenize(std::string_view text, const TokenizerConfig& cfg) {
  std::u32string cps;
  if (!decode_utf8(text, cps)) fail(Errc::InvalidUtf8, "tokenize: invalid UTF-8 input");

  std::vector<std::string> tokens;
  std::string current;
  auto flush = [&] {
    if (!current.empty()) tokens.push_back(std::move(current));
    current.clear();
  };
  const bool split_cjk = cfg.mode == TokenizerMode::CharPerCjkElseWhitespace;
  for (char32_t cp : cps) {
    if (cfg.lowercase) cp = static_cast<char32_t>(u_tolower(static_cast<UChar32>(cp)));
    if (is_unicode_whitespace(cp)) {
      flush();
    } else if (split_cjk && is_cjk(cp)) {
      flush();
      append_utf8(cp, current);
      flush();
    } else {
      append_utf8(cp, current);
    }
  }
  flush();
  return tokens;
}

bool is_blank(std::string_view text) {
  std::u32string cps;
  if (!decode_utf8(text, cps)) fail(Errc::InvalidUtf8, "is_blank: invalid UTF-8 input");
  for (char32_t cp : cps) {
    if (!is_unicode_whitespace(cp)) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------

LineReader::LineReader(const fs::path& path) : path_(path), in_(path, std::ios::binary) {
  if (!in_) fail(Errc::MissingFile, "cannot open '" + path.string() + "'");
}

bool LineReader::next(std::string& line) {
  if (!std::getline(in_, line)) return false;
  ++line_no_;
  if (!line.empty() && line.back() == '\r') line.pop_back();
  std::u32string scratch;
  if (!decode_utf8(line, scratch)) {
    fail(Errc::InvalidUtf8,
         path_.string() + ":" + std::to_string(line_no_) + ": invalid UTF-8 byte sequence");
  }
  return true;
}

std::vector<std::string> read_lines(const fs::path& path) {
  LineReader reader(path);
  std::vector<std::string> lines;
  std::string line;
  while (reader.next(line)) lines.push_back(line);
  return lines;
}

std::size_t count_lines(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(Errc::MissingFile, "cannot open '" + path.string() + "'");
  std::size_t n = 0;
  std::string line;
  while (std::getline(in, line)) ++n;
  return n;
}

// ---------------------------------------------------------------------------

CorpusManifest CorpusManifest::from_entries(std::vector<ManifestEntry> entries) {
  std::set<std::string, std::less<>> names;
  for (auto& e : entries) {
    if (e.name.empty()) fail(Errc::ManifestSyntax, "empty sub-corpus name");
    if (!names.insert(e.name).second) {
      fail(Errc::DuplicateName, "sub-corpus name '" + e.name + "' appears more than once");
    }
    for (const auto* p : {&e.src_path, &e.tgt_path}) {
      if (!fs::is_regular_file(*p)) {
        fail(Errc::MissingFile, "sub-corpus '" + e.name + "': no such file '" + p->string() + "'");
      }
    }
    const std::size_t n_src = count_lines(e.src_path);
    const std::size_t n_tgt = count_lines(e.tgt_path);
    if (n_src != n_tgt) {
      fail(Errc::LineCountMismatch, "sub-corpus '" + e.name + "': source has " +
                                        std::to_string(n_src) + " lines, target has " +
                                        std::to_string(n_tgt));
    }
    e.line_count = n_src;
  }
  CorpusManifest m;
  m.entries_ = std::move(entries);
  return m;
}

const ManifestEntry* CorpusManifest::find(std::string_view name) const noexcept {
  for (const auto& e : entries_) {
    if (e.name == name) return &e;
  }
  return nullptr;
}

CorpusManifest load_manifest(const fs::path& path) {
  if (!fs::is_regular_file(path)) fail(Errc::MissingFile, "no such manifest '" + path.string() + "'");
  const fs::path base = path.parent_path();
  auto resolve = [&](const std::string& p) {
    fs::path q(p);
    return q.is_absolute() ? q : base / q;
  };

  LineReader reader(path);
  std::vector<ManifestEntry> entries;
  std::string line;
  while (reader.next(line)) {
    if (line.empty() || line.front() == '#') continue;
    std::vector<std::string> fields;
    std::size_t start = 0;
    for (;;) {
      const auto tab = line.find('\t', start);
      fields.push_back(line.substr(start, tab - start));
      if (tab == std::string::npos) break;
      start = tab + 1;
    }
    if (fields.size() != 3 || fields[0].empty() || fields[1].empty() || fields[2].empty()) {
      fail(Errc::ManifestSyntax, path.string() + ":" + std::to_string(reader.line_number()) +
                                     ": expected name<TAB>src_path<TAB>tgt_path");
    }
    entries.push_back({fields[0], resolve(fields[1]), resolve(fields[2]), 0});
  }
  return CorpusManifest::from_entries(std::move(entries));
}

namespace {

StreamStats stream_entry(const ManifestEntry& entry, const PairSink& sink) {
  LineReader src(entry.src_path);
  LineReader tgt(entry.tgt_path);
  StreamStats stats;
  std::string s, t;
  std::size_t id = 0;
  for (;; ++id) {
    const bool has_s = src.next(s);
    const bool has_t = tgt.next(t);
    if (!has_s && !has_t) break;
    if (has_s != has_t) {
      fail(Errc::LineCountMismatch, "sub-corpus '" + entry.name + "' changed while reading");
    }
    const bool blank_s = is_blank(s);
    const bool blank_t = is_blank(t);
    if (blank_s && blank_t) {
      ++stats.skipped;
      continue;
    }
    if (blank_s || blank_t) {
      const auto& which = blank_s ? entry.src_path : entry.tgt_path;
      fail(Errc::OneSidedBlankLine, which.string() + ":" + std::to_string(id + 1) +
                                        ": sub-corpus '" + entry.name +
                                        "' has a blank line on one side only");
    }
    sink(SentencePair{id, entry.name, s, t, Direction::Unknown});
    ++stats.emitted;
  }
  return stats;
}

}  // namespace

StreamStats stream_pairs(const CorpusManifest& manifest, const PairSink& sink) {
  StreamStats total;
  for (const auto& entry : manifest.entries()) {
    const auto s = stream_entry(entry, sink);
    total.emitted += s.emitted;
    total.skipped += s.skipped;
  }
  return total;
}

std::vector<SentencePair> read_pairs(const CorpusManifest& manifest, StreamStats* stats) {
  std::vector<SentencePair> pairs;
  const auto s = stream_pairs(manifest, [&](SentencePair&& p) { pairs.push_back(std::move(p)); });
  if (stats) *stats = s;
  return pairs;
}

std::vector<SentencePair> read_sub_corpus(const ManifestEntry& entry, StreamStats* stats) {
  std::vector<SentencePair> pairs;
  const auto s = stream_entry(entry, [&](SentencePair&& p) { pairs.push_back(std::move(p)); });
  if (stats) *stats = s;
  return pairs;
}

}  // namespace bitextdir
