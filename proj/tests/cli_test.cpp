#include <gtest/gtest.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <sys/wait.h>

#include "support/oracles.hpp"
#include "trc/alpha_equiv.hpp"
#include "trc/fragments.hpp"
#include "trc/parser.hpp"
#include "trc/translate.hpp"

namespace trc {
namespace {

struct Run {
  int status = -1;
  std::string out;
};

Run trcdiag(const std::string& args) {
  const std::string cmd = std::string(TRCDIAG_PATH) + " " + args + " 2>&1";
  Run r;
  FILE* p = popen(cmd.c_str(), "r");
  if (!p) return r;
  std::array<char, 4096> buf{};
  while (auto n = fread(buf.data(), 1, buf.size(), p)) r.out.append(buf.data(), n);
  const int raw = pclose(p);
  r.status = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
  return r;
}

std::string fx(const std::string& name) { return testing::fixture_dir() + "/" + name; }

std::string tmp(const std::string& name) { return (std::filesystem::temp_directory_path() / name).string(); }

TEST(CliTest, CheckExitCodes) {
  EXPECT_EQ(trcdiag("check " + fx("union.trc")).status, 0);
  const auto unsafe = trcdiag("check " + fx("union_demorgan.trc"));
  EXPECT_EQ(unsafe.status, 2);
  EXPECT_NE(unsafe.out.find("condition 2"), std::string::npos);
  std::FILE* f = std::fopen(tmp("bad.trc").c_str(), "w");
  std::fputs("exists r in R [", f);
  std::fclose(f);
  const auto bad = trcdiag("check " + tmp("bad.trc"));
  EXPECT_EQ(bad.status, 1);
  EXPECT_NE(bad.out.find("trcdiag:"), std::string::npos);
}

TEST(CliTest, MissingFileIsAnError) { EXPECT_EQ(trcdiag("check /nonexistent/x.trc").status, 1); }

TEST(CliTest, Normalize) {
  const auto r = trcdiag("normalize " + fx("division_forall.trc") + " --fragment enc");
  EXPECT_EQ(r.status, 0);
  EXPECT_TRUE(structurally_equal(parse_query(r.out), testing::fixture("division_enc").query)) << r.out;
}

TEST(CliTest, EquivalenceOfDivisionForms) {
  const auto r = trcdiag("equiv " + fx("division_forall.trc") + " " + fx("division_enc.trc"));
  EXPECT_EQ(r.status, 0);
  EXPECT_NE(r.out.find("seed 0"), std::string::npos);
  EXPECT_NE(r.out.find("equivalent"), std::string::npos);
  const auto differ = trcdiag("equiv " + fx("builtin_inner.trc") + " " + fx("builtin_outer.trc") + " --seed 3");
  EXPECT_EQ(differ.status, 2);
  EXPECT_NE(differ.out.find("not equivalent"), std::string::npos);
  EXPECT_NE(differ.out.find("seed 3"), std::string::npos);
}

TEST(CliTest, ForallNeedsRewritingForBuiltinDiagram) {
  const auto r = trcdiag("to-diagram --mode builtin " + fx("division_forall.trc"));
  EXPECT_EQ(r.status, 1);
}

TEST(CliTest, PipelineRoundTrip) {
  for (const auto& f : testing::fixtures()) {
    if (classify(f.query) != Fragment::ENC) continue;
    const auto r = trcdiag("to-diagram --mode builtin " + fx(f.name + ".trc") + " | " + TRCDIAG_PATH + " from-diagram -");
    ASSERT_EQ(r.status, 0) << f.name << r.out;
    EXPECT_TRUE(alpha_equiv(parse_query(r.out), to_builtin_form(f.query))) << f.name << "\n" << r.out;
  }
}

TEST(CliTest, EvalRenderMetrics) {
  const auto e = trcdiag("eval " + fx("builtin_outer.trc") + " --db " + fx("builtin_example.db"));
  EXPECT_EQ(e.status, 0);
  EXPECT_EQ(e.out, "true\n");
  const auto diagram = tmp("nested.diagram");
  ASSERT_EQ(trcdiag("to-diagram " + fx("nested_disjunction_encv.trc") + " -o " + diagram).status, 0);
  const auto m = trcdiag("metrics " + diagram);
  EXPECT_EQ(m.status, 0);
  EXPECT_NE(m.out.find("boxes\t"), std::string::npos);
  const auto svg = tmp("nested.svg");
  EXPECT_EQ(trcdiag("render " + diagram + " --shading --dotted -o " + svg).status, 0);
  EXPECT_NE(testing::read_text(svg).find("<svg"), std::string::npos);
  EXPECT_EQ(trcdiag("metrics " + fx("union.trc")).status, 1);  // not a diagram
}

TEST(CliTest, Bench) {
  const auto r = trcdiag("bench " + testing::fixture_dir() + " --instances 5");
  EXPECT_EQ(r.status, 0);
  EXPECT_NE(r.out.find("# translated " + std::to_string(testing::fixtures().size()) + "/"), std::string::npos);
}

TEST(CliTest, UsageErrors) {
  EXPECT_NE(trcdiag("").status, 0);
  EXPECT_NE(trcdiag("to-diagram --mode other " + fx("union.trc")).status, 0);
}

}  // namespace
}  // namespace trc
