#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>

#include "support/oracles.hpp"
#include "trc/evaluator.hpp"
#include "trc/fragments.hpp"
#include "trc/metrics.hpp"
#include "trc/normal_form.hpp"
#include "trc/parser.hpp"
#include "trc/translate.hpp"

namespace trc {
namespace {

TEST(SizeMetricsTest, Family) {
  EXPECT_EQ(size_metrics(trc_to_representationB(family(3))), (SizeMetrics{16, 6}));
  EXPECT_EQ(size_metrics(trc_to_representationB(family(1))), (SizeMetrics{6, 2}));
}

TEST(SizeMetricsTest, BareTable) {
  Diagram d;
  d.partitions = {{"p0", PartitionKind::Base, "", ""}};
  d.tables = {{"t1", "R", "r", "p0", {}}};
  EXPECT_EQ(size_metrics(d), (SizeMetrics{1, 0}));
}

TEST(SizeMetricsTest, ItemizedConvention) {
  // Output with one column (2), R with two attribute rows (3), a plain
  // equijoin into S (S and its row: 2), a fused selection (1) and a
  // comparison arrow (one edge).
  const auto q = parse_query(
      "{ q(A) | exists r in R, s in S [q.A = r.A and r.B = s.B and r.B > 3 and r.A < s.B] }");
  const auto m = size_metrics(trc_to_representationB(q));
  EXPECT_EQ(m.boxes, 2u + 3u + 2u + 1u);
  EXPECT_EQ(m.edges, 3u);
  // Unhinted built-ins count their anchors.
  const auto plain = size_metrics(trc_to_diagram(parse_query("exists r in R, s in S [r.A < s.B and r.A = 1]")));
  EXPECT_EQ(plain.boxes, 2u + 2u + 3u + 2u);
  EXPECT_EQ(plain.edges, 3u);
}

TEST(FamilyTest, Shape) {
  const auto f1 = family(1);
  EXPECT_EQ(pretty(f1), "exists r in R [r.A1 = 11 or r.A1 = 12]");
  const auto f2 = family(2);
  std::size_t ors = 0, ands = 0;
  for_each_node(*f2.body, [&](const Formula& n) {
    ors += n.is<Or>();
    ands += n.is<And>();
  });
  EXPECT_EQ(ors, 2u);
  EXPECT_EQ(ands, 1u);
  EXPECT_TRUE(is_normalized(*f2.body));
}

TEST(LegacyUnionFormTest, CellCounts) {
  EXPECT_EQ(legacy_union_form(family(3)).cells.size(), 8u);
  const auto u = legacy_union_form(testing::fixture("union").query);
  ASSERT_EQ(u.cells.size(), 2u);
  for (const auto& c : u.cells) {
    ASSERT_TRUE(c.output);
    EXPECT_EQ(c.output->header, std::vector<std::string>{"A"});
    EXPECT_EQ(trc_to_representationB(c).outputs.size(), 1u);
  }
  const auto& plain = testing::fixture("division_enc").query;
  const auto one = legacy_union_form(plain);
  ASSERT_EQ(one.cells.size(), 1u);
  EXPECT_TRUE(structurally_equal(one.cells[0], maximal_scope(plain)));
}

TEST(LegacyUnionFormTest, CellsAreEncAndEquivalent) {
  for (const auto& f : testing::fixtures()) {
    UnionForm u;
    try {
      u = legacy_union_form(remove_forall_implies(f.query));
    } catch (const FragmentError&) {
      continue;
    }
    for (const auto& c : u.cells) EXPECT_EQ(classify(c), Fragment::ENC) << f.name;
    for (const auto& inst : gen_instances(f.query, 20, 8)) {
      EXPECT_EQ(eval_union(u, inst.db, inst.dom), eval(f.query, inst.db, inst.dom)) << f.name;
    }
  }
}

TEST(LegacyUnionFormTest, DisjunctionUnderNegationRejected) {
  EXPECT_THROW(legacy_union_form(testing::fixture("division_encv").query), FragmentError);
}

TEST(LegacyUnionFormTest, FamilyTotals) {
  for (int k = 1; k <= 6; ++k) {
    const auto u = legacy_union_form(family(k));
    EXPECT_EQ(u.cells.size(), std::size_t{1} << k);
    for (const auto& c : u.cells) EXPECT_EQ(size_metrics(trc_to_representationB(c)).boxes, static_cast<std::size_t>(k + 1));
  }
}

TEST(BenchmarkTest, EmptyDirectory) {
  const auto dir = std::filesystem::temp_directory_path() / "trc_bench_empty";
  std::filesystem::create_directories(dir);
  const auto r = run_benchmark(dir);
  EXPECT_TRUE(r.rows.empty());
  EXPECT_EQ(r.to_tsv().find('\n'), r.to_tsv().size() - 1);  // header only
}

TEST(BenchmarkTest, BrokenFixtureIsRecorded) {
  const auto dir = std::filesystem::temp_directory_path() / "trc_bench_broken";
  std::filesystem::create_directories(dir);
  std::ofstream(dir / "a_broken.trc") << "exists r in R [";
  std::ofstream(dir / "b_fine.trc") << "exists r in R [r.A = 1]";
  std::ofstream(dir / "b_fine.expected") << "safe\n";
  const auto r = run_benchmark(dir, 5);
  ASSERT_EQ(r.rows.size(), 2u);
  EXPECT_EQ(r.rows[0].verdict, "error");
  EXPECT_FALSE(r.rows[0].note.empty());
  EXPECT_TRUE(r.rows[1].translated);
  EXPECT_EQ(r.translated(), 1u);
}

TEST(BenchmarkTest, AllFixturesTranslate) {
  const auto r = run_benchmark(testing::fixture_dir(), 10);
  EXPECT_EQ(r.rows.size(), testing::fixtures().size());
  EXPECT_EQ(r.translated(), r.rows.size());
  for (const auto& row : r.rows) {
    EXPECT_TRUE(row.verdict_matches) << row.fixture;
    EXPECT_EQ(row.atoms, "preserved") << row.fixture;
    EXPECT_EQ(row.roundtrip, "equivalent") << row.fixture;
  }
}

}  // namespace
}  // namespace trc
