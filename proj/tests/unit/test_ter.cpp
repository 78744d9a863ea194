#include "bitextdir/ter.hpp"

#include <random>

#include "../oracle/oracles.hpp"
#include "test_util.hpp"

using namespace bitextdir;
using Tokens = std::vector<std::string>;

namespace {

Tokens T(std::string_view s) {
  Tokens out;
  for (char c : s) out.emplace_back(1, c);
  return out;
}

std::vector<QualityTag> tags(std::string_view s) {
  std::vector<QualityTag> out;
  for (char c : s) out.push_back(c == 'O' ? QualityTag::OK : QualityTag::BAD);
  return out;
}

}  // namespace

TEST(Levenshtein, IdentityIsAllMatches) {
  const auto s = levenshtein_script(T("abc"), T("abc"));
  EXPECT_EQ(s.n_edits, 0u);
  ASSERT_EQ(s.ops.size(), 3u);
  for (const auto& op : s.ops) EXPECT_TRUE(std::holds_alternative<edit::Match>(op));
}

TEST(Levenshtein, SingleInsert) {
  const auto s = levenshtein_script(T("abd"), T("abcd"));
  EXPECT_EQ(s.n_edits, 1u);
  EXPECT_EQ(apply_script(T("abd"), s), T("abcd"));
  std::size_t inserts = 0;
  for (const auto& op : s.ops)
    if (const auto* ins = std::get_if<edit::Insert>(&op)) {
      ++inserts;
      EXPECT_EQ(ins->token, "c");
    }
  EXPECT_EQ(inserts, 1u);
}

TEST(Levenshtein, EmptyHypothesis) {
  const auto s = levenshtein_script(Tokens{}, T("ab"));
  EXPECT_EQ(s.n_edits, 2u);
  ASSERT_EQ(s.ops.size(), 2u);
  EXPECT_TRUE(std::holds_alternative<edit::Insert>(s.ops[0]));
  EXPECT_TRUE(std::holds_alternative<edit::Insert>(s.ops[1]));
}

TEST(Levenshtein, DistanceMatchesOracle) {
  std::mt19937_64 rng(1);
  for (int i = 0; i < 2000; ++i) {
    const auto h = testutil::random_tokens(rng, 9, 4);
    const auto r = testutil::random_tokens(rng, 9, 4);
    const auto s = levenshtein_script(h, r);
    EXPECT_EQ(s.n_edits, oracle::levenshtein(h, r));
    EXPECT_EQ(levenshtein_distance(h, r), s.n_edits);
    EXPECT_EQ(oracle::execute(h, s), std::optional<Tokens>(r));
  }
}

TEST(Ter, BlockSwapIsOneShift) {
  const auto out = ter(T("cdab"), T("abcd"));
  EXPECT_EQ(out.result.n_shifts, 1u);
  EXPECT_EQ(out.result.n_edits, 1u);
  EXPECT_DOUBLE_EQ(out.result.score, 0.25);
  EXPECT_EQ(apply_script(T("cdab"), out.script), T("abcd"));
}

TEST(Ter, IdentityAndCap) {
  EXPECT_EQ(ter(T("abc"), T("abc")).result.score, 0.0);
  const auto capped = ter(T("xyz"), T("a"));
  EXPECT_EQ(capped.result.n_edits, 3u);
  EXPECT_EQ(capped.result.score, 1.0);
  EXPECT_EQ(ter(Tokens{}, Tokens{}).result.score, 0.0);
  EXPECT_EQ(ter(T("a"), Tokens{}).result.score, 1.0);
}

TEST(Ter, ShiftLimitsAreRespected) {
  // moving "a" to the end needs a shift of distance 5
  const auto far = T("abcdef"), ref = T("bcdefa");
  EXPECT_EQ(ter(far, ref, {10, 10}).result.n_shifts, 1u);
  EXPECT_EQ(ter(far, ref, {2, 10}).result.n_shifts, 0u);
  EXPECT_EQ(ter(far, ref, {2, 10}).result.n_edits, 2u);
}

TEST(Ter, BoundedByOracleOnSmallCases) {
  std::mt19937_64 rng(5);
  for (int i = 0; i < 300; ++i) {
    const auto h = testutil::random_tokens(rng, 6, 3);
    const auto r = testutil::random_tokens(rng, 6, 3);
    const auto out = ter(h, r);
    EXPECT_LE(out.result.n_edits, oracle::levenshtein(h, r));
    EXPECT_GE(out.result.n_edits, oracle::min_shift_edit_cost(h, r));
    EXPECT_EQ(oracle::execute(h, out.script), std::optional<Tokens>(r));
    EXPECT_EQ(apply_script(h, out.script), r);
  }
}

TEST(ApplyScript, RejectsInconsistentScripts) {
  EditScript s;
  s.ops = {edit::Match{0, 0}};
  s.n_edits = 0;
  EXPECT_ERRC(apply_script(T("ab"), s), InconsistentScript);
  s.ops = {edit::Match{1, 0}, edit::Match{0, 1}};
  EXPECT_ERRC(apply_script(T("ab"), s), InconsistentScript);
  s.ops = {edit::Match{0, 0}, edit::Shift{0, 1, 1}};
  EXPECT_ERRC(apply_script(T("a"), s), InconsistentScript);
}

TEST(WordTags, SubstitutionIsBad) {
  const auto out = ter(T("axc"), T("abc"));
  const auto t = word_tags(out.script, 3);
  EXPECT_EQ(t.tgt_tags, tags("OBO"));
  EXPECT_EQ(t.gap_tags, tags("OOOO"));
}

TEST(WordTags, IdentityAllOk) {
  const auto t = word_tags(ter(T("abc"), T("abc")).script, 3);
  EXPECT_EQ(t.tgt_tags, tags("OOO"));
  EXPECT_EQ(t.gap_tags, tags("OOOO"));
}

TEST(WordTags, MissingWordMarksGap) {
  const auto t = word_tags(ter(T("ac"), T("abc")).script, 2);
  EXPECT_EQ(t.tgt_tags, tags("OO"));
  EXPECT_EQ(t.gap_tags, tags("OBO"));
}

TEST(WordTags, ShiftedThenMatchedWordsAreOk) {
  const auto t = word_tags(ter(T("cdab"), T("abcd")).script, 4);
  EXPECT_EQ(t.tgt_tags, tags("OOOO"));
  EXPECT_EQ(t.gap_tags, tags("OOOOO"));
}

TEST(WordTags, EmptyHypothesis) {
  const auto t = word_tags(ter(Tokens{}, T("ab")).script, 0);
  EXPECT_TRUE(t.tgt_tags.empty());
  EXPECT_EQ(t.gap_tags, tags("B"));
}

TEST(WordTags, ShapeOnRandomPairs) {
  std::mt19937_64 rng(9);
  for (int i = 0; i < 1000; ++i) {
    const auto h = testutil::random_tokens(rng, 10, 4);
    const auto r = testutil::random_tokens(rng, 10, 4);
    const auto out = ter(h, r);
    const auto t = word_tags(out.script, h.size());
    EXPECT_EQ(t.tgt_tags.size(), h.size());
    EXPECT_EQ(t.gap_tags.size(), h.size() + 1);
    if (out.result.n_edits == 0) {
      EXPECT_EQ(std::count(t.tgt_tags.begin(), t.tgt_tags.end(), QualityTag::BAD), 0);
    }
  }
}
