#include "bitextdir/corpus.hpp"

#include "test_util.hpp"

using namespace bitextdir;
using testutil::TempDir;

namespace {

const TokenizerConfig kWs{TokenizerMode::Whitespace, false};
const TokenizerConfig kCjk{TokenizerMode::CharPerCjkElseWhitespace, true};

}  // namespace

TEST(Tokenize, WhitespaceCollapsesRuns) {
  EXPECT_EQ(tokenize("the cat  sat", kWs), (std::vector<std::string>{"the", "cat", "sat"}));
}

TEST(Tokenize, CjkCharactersSplitAndLatinLowercased) {
  EXPECT_EQ(tokenize("AB 你好", kCjk), (std::vector<std::string>{"ab", "你", "好"}));
}

TEST(Tokenize, EmptyAndBlank) {
  EXPECT_TRUE(tokenize("", kCjk).empty());
  EXPECT_TRUE(tokenize(" \t　 ", kCjk).empty());
  EXPECT_TRUE(is_blank(" \t　"));
  EXPECT_FALSE(is_blank(" x "));
}

TEST(Tokenize, MixedScriptInsideOneWord) {
  EXPECT_EQ(tokenize("GPU显卡ok", kCjk), (std::vector<std::string>{"gpu", "显", "卡", "ok"}));
  EXPECT_EQ(tokenize("カタカナ", kCjk).size(), 4u);
  EXPECT_EQ(tokenize("한국어", kCjk).size(), 3u);
}

TEST(Tokenize, UnicodeLowercasing) {
  EXPECT_EQ(tokenize("ÉCOLE Straße", kCjk), (std::vector<std::string>{"école", "straße"}));
  EXPECT_EQ(tokenize("ÉCOLE", kWs), (std::vector<std::string>{"ÉCOLE"}));
}

TEST(Tokenize, ModeNamesRoundTrip) {
  EXPECT_EQ(parse_tokenizer_mode(to_string(TokenizerMode::Whitespace)), TokenizerMode::Whitespace);
  EXPECT_EQ(parse_tokenizer_mode(to_string(TokenizerMode::CharPerCjkElseWhitespace)),
            TokenizerMode::CharPerCjkElseWhitespace);
  EXPECT_ERRC(parse_tokenizer_mode("bpe"), InvalidArgument);
}

TEST(Utf8, RejectsMalformedInput) {
  std::u32string out;
  EXPECT_TRUE(decode_utf8("a你", out));
  EXPECT_EQ(out, U"a你");
  EXPECT_FALSE(decode_utf8("\xC3", out));
  EXPECT_FALSE(decode_utf8("\xC0\xAF", out));      // overlong
  EXPECT_FALSE(decode_utf8("\xED\xA0\x80", out));  // surrogate
  std::string enc;
  append_utf8(U'😀', enc);
  EXPECT_EQ(enc, "\xF0\x9F\x98\x80");
}

TEST(LineReader, StripsCrlfAndCountsLines) {
  TempDir dir;
  const auto p = dir.write("a.txt", "one\r\ntwo\nthree");
  EXPECT_EQ(read_lines(p), (std::vector<std::string>{"one", "two", "three"}));
  EXPECT_EQ(count_lines(p), 3u);
}

TEST(LineReader, InvalidUtf8ReportsLine) {
  TempDir dir;
  const auto p = dir.write("bad.txt", "ok\n\xFF\n");
  try {
    read_lines(p);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::InvalidUtf8);
    EXPECT_NE(std::string(e.what()).find("bad.txt:2"), std::string::npos) << e.what();
  }
}

TEST(LineReader, MissingFile) {
  EXPECT_ERRC(read_lines("/nonexistent/file.txt"), MissingFile);
}

TEST(Manifest, SingleEntry) {
  TempDir dir;
  dir.write("a.en", "1\n2\n3\n");
  dir.write("a.zh", "一\n二\n三\n");
  const auto m = load_manifest(dir.write("m.tsv", "# comment\n\nnews\ta.en\ta.zh\n"));
  ASSERT_EQ(m.size(), 1u);
  EXPECT_EQ(m.entries()[0].name, "news");
  EXPECT_EQ(m.entries()[0].line_count, 3u);
  EXPECT_NE(m.find("news"), nullptr);
  EXPECT_EQ(m.find("web"), nullptr);
}

TEST(Manifest, LineCountMismatch) {
  TempDir dir;
  dir.write("a.en", "1\n2\n3\n");
  dir.write("a.zh", "一\n二\n");
  EXPECT_ERRC(load_manifest(dir.write("m.tsv", "news\ta.en\ta.zh\n")), LineCountMismatch);
}

TEST(Manifest, DuplicateName) {
  TempDir dir;
  dir.write("a.en", "1\n");
  dir.write("a.zh", "一\n");
  EXPECT_ERRC(load_manifest(dir.write("m.tsv", "news\ta.en\ta.zh\nnews\ta.en\ta.zh\n")), DuplicateName);
}

TEST(Manifest, SyntaxAndMissingFiles) {
  TempDir dir;
  EXPECT_ERRC(load_manifest(dir.write("m1.tsv", "news\tonly-two\n")), ManifestSyntax);
  EXPECT_ERRC(load_manifest(dir.write("m2.tsv", "news\tx.en\tx.zh\n")), MissingFile);
  EXPECT_ERRC(load_manifest(dir / "absent.tsv"), MissingFile);
}

TEST(Stream, DeterministicOrderAcrossSubCorpora) {
  TempDir dir;
  dir.write("a.en", "a0\na1\n");
  dir.write("a.zh", "甲\n乙\n");
  dir.write("b.en", "b0\nb1\n");
  dir.write("b.zh", "丙\n丁\n");
  const auto m = load_manifest(dir.write("m.tsv", "a\ta.en\ta.zh\nb\tb.en\tb.zh\n"));
  const auto pairs = read_pairs(m);
  ASSERT_EQ(pairs.size(), 4u);
  EXPECT_EQ(pairs[0].sub_corpus, "a");
  EXPECT_EQ(pairs[1].src, "a1");
  EXPECT_EQ(pairs[1].id, 1u);
  EXPECT_EQ(pairs[2].sub_corpus, "b");
  EXPECT_EQ(pairs[3].tgt, "丁");
  EXPECT_EQ(pairs[3].direction, Direction::Unknown);
}

TEST(Stream, OneSidedBlankLine) {
  TempDir dir;
  dir.write("a.en", "x\n\n");
  dir.write("a.zh", "一\n二\n");
  const auto m = load_manifest(dir.write("m.tsv", "a\ta.en\ta.zh\n"));
  EXPECT_ERRC(read_pairs(m), OneSidedBlankLine);
}

TEST(Stream, BothBlankSkippedAndIdsKeepLinePositions) {
  TempDir dir;
  dir.write("a.en", "1\n2\n3\n4\n \n6\n");
  dir.write("a.zh", "一\n二\n三\n四\n\n六\n");
  const auto m = load_manifest(dir.write("m.tsv", "a\ta.en\ta.zh\n"));
  StreamStats stats;
  const auto pairs = read_pairs(m, &stats);
  EXPECT_EQ(stats.skipped, 1u);
  EXPECT_EQ(stats.emitted, 5u);
  ASSERT_EQ(pairs.size(), 5u);
  EXPECT_EQ(pairs[4].id, 5u);
  EXPECT_EQ(pairs[4].src, "6");
}
