#pragma once

#include <cstddef>
#include <filesystem>
#include <fstream>
#include <functional>
#include <string>
#include <string_view>
#include <vector>

#include "bitextdir/types.hpp"

namespace bitextdir {

namespace fs = std::filesystem;

// ---------------------------------------------------------------------------
// Text handling
// ---------------------------------------------------------------------------

/// Strict UTF-8 decoding. Returns false on any malformed, overlong or
/// surrogate sequence.
bool decode_utf8(std::string_view text, std::u32string& out);
void append_utf8(char32_t cp, std::string& out);

bool is_unicode_whitespace(char32_t cp) noexcept;
/// Han, kana, hangul, bopomofo, and the CJK punctuation blocks.
bool is_cjk(char32_t cp) noexcept;

enum class TokenizerMode { Whitespace, CharPerCjkElseWhitespace };

struct TokenizerConfig {
  TokenizerMode mode = TokenizerMode::CharPerCjkElseWhitespace;
  bool lowercase = true;
  friend bool operator==(const TokenizerConfig&, const TokenizerConfig&) = default;
};

std::string_view to_string(TokenizerMode mode) noexcept;
TokenizerMode parse_tokenizer_mode(std::string_view text);

/// Splits on Unicode whitespace runs; in CJK mode every CJK codepoint becomes
/// its own token. Lowercasing is Unicode simple case mapping, applied before
/// splitting. Input must be valid UTF-8 (throws InvalidUtf8 otherwise).
std::vector<std::string> tokenize(std::string_view text, const TokenizerConfig& cfg);

/// True when the text consists only of Unicode whitespace.
bool is_blank(std::string_view text);

// ---------------------------------------------------------------------------
// Line-oriented file access
// ---------------------------------------------------------------------------

/// Reads a UTF-8 text file one line at a time. CRLF is normalized to LF and
/// every line is validated; errors name the file and the 1-based line.
class LineReader {
 public:
  explicit LineReader(const fs::path& path);

  bool next(std::string& line);
  std::size_t line_number() const noexcept { return line_no_; }
  const fs::path& path() const noexcept { return path_; }

 private:
  fs::path path_;
  std::ifstream in_;
  std::size_t line_no_ = 0;
};

std::vector<std::string> read_lines(const fs::path& path);
std::size_t count_lines(const fs::path& path);

// ---------------------------------------------------------------------------
// Parallel corpora
// ---------------------------------------------------------------------------

struct SentencePair {
  std::size_t id = 0;  // zero-based line index within the sub-corpus
  std::string sub_corpus;
  std::string src;
  std::string tgt;
  Direction direction = Direction::Unknown;

  friend bool operator==(const SentencePair&, const SentencePair&) = default;
};

struct ManifestEntry {
  std::string name;
  fs::path src_path;
  fs::path tgt_path;
  std::size_t line_count = 0;  // filled in by validation
};

/// Immutable, validated list of sub-corpora.
class CorpusManifest {
 public:
  /// Validates names, file existence and line counts.
  static CorpusManifest from_entries(std::vector<ManifestEntry> entries);

  const std::vector<ManifestEntry>& entries() const noexcept { return entries_; }
  std::size_t size() const noexcept { return entries_.size(); }
  const ManifestEntry* find(std::string_view name) const noexcept;

 private:
  std::vector<ManifestEntry> entries_;
};

/// Parses `name<TAB>src_path<TAB>tgt_path` lines; `#` lines and empty lines
/// are ignored. Relative paths resolve against the manifest's directory.
CorpusManifest load_manifest(const fs::path& path);

struct StreamStats {
  std::size_t emitted = 0;
  std::size_t skipped = 0;  // lines blank on both sides
};

using PairSink = std::function<void(SentencePair&&)>;

/// Emits pairs in manifest order, then line order. Lines blank on both sides
/// are skipped and counted; a line blank on only one side is an error.
StreamStats stream_pairs(const CorpusManifest& manifest, const PairSink& sink);

std::vector<SentencePair> read_pairs(const CorpusManifest& manifest,
                                     StreamStats* stats = nullptr);

/// Pairs of a single sub-corpus, with the same skipping rules.
std::vector<SentencePair> read_sub_corpus(const ManifestEntry& entry,
                                          StreamStats* stats = nullptr);

}  // namespace bitextdir
