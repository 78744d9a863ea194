#include <sys/wait.h>

#include <algorithm>
#include <cstdlib>

#include "test_util.hpp"

#ifndef BITEXTDIR_CLI
#error "BITEXTDIR_CLI must point at the built executable"
#endif
#ifndef BITEXTDIR_TOY
#error "BITEXTDIR_TOY must point at data/toy"
#endif

using testutil::TempDir;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(const TempDir& dir, const std::string& args) {
  const auto out = dir / "stdout.txt", err = dir / "stderr.txt";
  const std::string cmd =
      std::string("\"") + BITEXTDIR_CLI + "\" " + args + " >\"" + out.string() + "\" 2>\"" + err.string() + "\"";
  const int status = std::system(cmd.c_str());
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, testutil::slurp(out), testutil::slurp(err)};
}

const std::string kToy = BITEXTDIR_TOY;

}  // namespace

TEST(Cli, UnknownFlagIsUsageError) {
  TempDir dir;
  const auto r = run(dir, "ter --hyp a --ref b --frobnicate");
  EXPECT_EQ(r.code, 1);
  EXPECT_EQ(r.err.rfind("error:", 0), 0u) << r.err;
  EXPECT_NE(r.err.find("Usage"), std::string::npos);
  EXPECT_EQ(run(dir, "").code, 1);
  EXPECT_EQ(run(dir, "--help").code, 0);
}

TEST(Cli, IdenticalFilesGiveZeroHter) {
  TempDir dir;
  const auto f = dir.write("h.txt", "这 是 一\nthe cat sat\n");
  const auto r = run(dir, "ter --hyp " + f.string() + " --ref " + f.string());
  EXPECT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.out, "0.000000\n0.000000\n");
  EXPECT_EQ(run(dir, "ter --hyp " + f.string() + " --ref " + f.string() + " --out " + (dir / "t").string()).code, 0);
  EXPECT_EQ(testutil::slurp(dir / "t.tags"), "OK OK OK\nOK OK OK\n");
  EXPECT_EQ(testutil::slurp(dir / "t.gap_tags"), "OK OK OK OK\nOK OK OK OK\n");
}

TEST(Cli, DataErrorsExitTwo) {
  TempDir dir;
  const auto a = dir.write("a.txt", "x\ny\n");
  const auto b = dir.write("b.txt", "x\n");
  const auto r = run(dir, "ter --hyp " + a.string() + " --ref " + b.string());
  EXPECT_EQ(r.code, 2);
  EXPECT_EQ(r.err.rfind("error: LengthMismatch", 0), 0u) << r.err;
  EXPECT_EQ(run(dir, "validate-format --prefix " + (dir / "nope").string()).code, 2);
}

TEST(Cli, ForgeThenValidate) {
  TempDir dir;
  const std::string out = (dir / "so").string();
  const std::string base = "-q --config " + kToy + "/forge.ini forge --set output.prefix=" + out;
  ASSERT_EQ(run(dir, base).code, 0);
  const auto first = testutil::slurp(out + ".hter") + testutil::slurp(out + ".tags") + testutil::slurp(out + ".mt");
  EXPECT_EQ(run(dir, "validate-format --prefix " + out).code, 0);
  ASSERT_EQ(run(dir, base).code, 0);
  EXPECT_EQ(first, testutil::slurp(out + ".hter") + testutil::slurp(out + ".tags") + testutil::slurp(out + ".mt"));
  EXPECT_EQ(run(dir, base + " --set filter.keep=sideways").code, 1);
}

TEST(Cli, SampleSeedFromEnvironment) {
  TempDir dir;
  const std::string m = kToy + "/manifest.tsv";
  ASSERT_EQ(run(dir, "-q --seed 9 sample --manifest " + m + " --per-corpus 5 --out " + (dir / "a").string()).code, 0);
  const std::string env = "BITEXTDIR_SEED=9 ";
  const std::string cmd = env + "\"" + BITEXTDIR_CLI + "\" -q sample --manifest " + m + " --per-corpus 5 --out " +
                          (dir / "b").string();
  ASSERT_EQ(std::system(cmd.c_str()), 0);
  const auto ids = testutil::slurp(dir / "a.ids");
  EXPECT_EQ(ids, testutil::slurp(dir / "b.ids"));
  EXPECT_EQ(std::count(ids.begin(), ids.end(), '\n'), 15);
}

TEST(Cli, ClassifyAndEvalDirection) {
  TempDir dir;
  const auto scores = (dir / "s.tsv").string();
  ASSERT_EQ(run(dir, "-q classify --manifest " + kToy + "/manifest.tsv --model-src " + kToy +
                         "/models/src.bdm --model-tgt " + kToy + "/models/tgt.bdm --out " + scores)
                .code,
            0);
  const auto r = run(dir, "eval --task direction --pred " + scores + " --gold " + kToy + "/gold.tsv");
  EXPECT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.out.rfind("metric,value\nmacro_f1,", 0), 0u) << r.out;
  const auto stats = run(dir, "stats --manifest " + kToy + "/manifest.tsv --scores " + scores);
  EXPECT_EQ(stats.code, 0) << stats.err;
  EXPECT_NE(stats.out.find("S-O,T-O,"), std::string::npos);
}
