#include <gtest/gtest.h>

#include <json.hpp>

#include "support/oracles.hpp"
#include "trc/diagram.hpp"
#include "trc/diagram_io.hpp"
#include "trc/errors.hpp"
#include "trc/evaluator.hpp"
#include "trc/fragments.hpp"
#include "trc/parser.hpp"
#include "trc/translate.hpp"

namespace trc {
namespace {

// exists r in R, j in "<" [r.A = j.$1 and j.$2 = r.B], all in the base.
Diagram comparison_diagram() {
  Diagram d;
  d.partitions = {{"p0", PartitionKind::Base, "", ""}};
  d.tables = {{"t1", "R", "r", "p0", {"A", "B"}}};
  d.builtins = {{"b1", CmpOp::Lt, std::nullopt, "p0"}};
  d.edges = {{{"t1", "A"}, {"b1", "$1"}}, {{"b1", "$2"}, {"t1", "B"}}};
  return d;
}

bool mentions(const ValidityReport& r, const std::string& needle) {
  for (const auto& p : r.problems) {
    if (p.find(needle) != std::string::npos) return true;
  }
  return false;
}

TEST(ValidateTest, TranslatedDivisionIsValid) {
  const auto d = trc_to_diagram(testing::fixture("division_enc").query);
  EXPECT_TRUE(validate(d).valid()) << validate(d).to_text();
  EXPECT_TRUE(validate(comparison_diagram()).valid());
}

TEST(ValidateTest, BinaryBuiltinNeedsBothAnchors) {
  auto d = comparison_diagram();
  d.edges.pop_back();
  const auto r = validate(d);
  EXPECT_FALSE(r.valid());
  EXPECT_TRUE(mentions(r, "b1")) << r.to_text();
}

TEST(ValidateTest, AtMostOneOutput) {
  auto d = comparison_diagram();
  d.outputs = {{"o1", {"A"}, "p0"}, {"o2", {"A"}, "p0"}};
  d.edges.push_back({{"o1", "A"}, {"t1", "A"}});
  d.edges.push_back({{"o2", "A"}, {"t1", "A"}});
  EXPECT_FALSE(validate(d).valid());
}

TEST(ValidateTest, StructuralProblems) {
  {
    auto d = comparison_diagram();
    d.partitions.push_back({"p1", PartitionKind::FuseBox, "p0", "g1"});
    d.tables.push_back({"t2", "S", "s", "p1", {"A"}});
    d.edges.push_back({{"t1", "A"}, {"t2", "A"}});
    EXPECT_TRUE(mentions(validate(d), "g1")) << validate(d).to_text();  // single-member fuse group
  }
  {
    auto d = comparison_diagram();
    d.partitions.push_back({"p1", PartitionKind::Negation, "p2", ""});
    d.partitions.push_back({"p2", PartitionKind::Negation, "p1", ""});
    EXPECT_FALSE(validate(d).valid());  // parent cycle
  }
  {
    auto d = comparison_diagram();
    d.edges.push_back({{"t1", "C"}, {"t1", "A"}});
    EXPECT_FALSE(validate(d).valid());  // unknown attribute
  }
  {
    auto d = comparison_diagram();
    d.partitions.push_back({"p1", PartitionKind::Negation, "p0", ""});
    d.partitions.push_back({"p2", PartitionKind::Negation, "p0", ""});
    d.tables.push_back({"t2", "S", "s", "p1", {"A"}});
    d.tables.push_back({"t3", "S", "s3", "p2", {"A"}});
    d.edges.push_back({{"t2", "A"}, {"t3", "A"}});
    EXPECT_FALSE(validate(d).valid());  // sibling scopes cannot be joined
  }
}

TEST(ExpandFuseBoxesTest, SimpleDisjunctionBecomesDoubleNegation) {
  const auto d = trc_to_representationB(testing::fixture("simple_disjunction").query);
  const auto x = expand_fuse_boxes(d);
  EXPECT_TRUE(validate(x).valid()) << validate(x).to_text();
  for (const auto& p : x.partitions) EXPECT_NE(p.kind, PartitionKind::FuseBox);
  const auto back = diagram_to_trc(x);
  EXPECT_EQ(pretty(back), "exists r in R [not(not(r.A = 1) and not(r.A = 2))]");
}

TEST(ExpandFuseBoxesTest, IdentityWithoutFuseBoxes) {
  const auto d = trc_to_diagram(testing::fixture("division_enc").query);
  EXPECT_EQ(expand_fuse_boxes(d), d);
}

TEST(ExpandFuseBoxesTest, NestedGroupsGetTwoShells) {
  const auto& q = testing::fixture("nested_disjunction_encv").query;
  const auto d = trc_to_representationB(q);
  const auto x = expand_fuse_boxes(d);
  std::size_t groups = 0;
  std::set<std::string> seen;
  for (const auto& p : d.partitions) {
    if (p.kind == PartitionKind::FuseBox && seen.insert(p.group).second) ++groups;
  }
  EXPECT_EQ(groups, 2u);
  std::size_t added = 0;
  for (const auto& p : x.partitions) added += p.kind == PartitionKind::Negation;
  for (const auto& p : d.partitions) added -= p.kind == PartitionKind::Negation;
  std::size_t members = 0;
  for (const auto& p : d.partitions) members += p.kind == PartitionKind::FuseBox;
  EXPECT_EQ(added, members + groups);

  const auto before = diagram_to_trc(d);
  const auto after = diagram_to_trc(x);
  const auto inst = gen_instances(std::vector<Query>{before, after}, 20, 4);
  EXPECT_TRUE(equiv_on(before, after, inst).equivalent);
  EXPECT_TRUE(equiv_on(q, after, inst).equivalent);
}

TEST(ExpandFuseBoxesTest, IdempotentAndParityPreserving) {
  for (const auto& f : testing::fixtures()) {
    const auto d = trc_to_representationB(remove_forall_implies(f.query));
    const auto x = expand_fuse_boxes(d);
    EXPECT_TRUE(validate(x).valid()) << f.name;
    EXPECT_EQ(expand_fuse_boxes(x), x) << f.name;
    auto parity = [](const Diagram& g, const std::string& box) { return g.negation_depth(g.partition_of(box)) % 2; };
    for (const auto& t : d.tables) EXPECT_EQ(parity(d, t.id), parity(x, t.id)) << f.name << " " << t.id;
    for (const auto& b : d.builtins) EXPECT_EQ(parity(d, b.id), parity(x, b.id)) << f.name << " " << b.id;
    for (const auto& o : d.outputs) EXPECT_EQ(parity(d, o.id), parity(x, o.id)) << f.name;
  }
}

TEST(DiagramIoTest, RoundTripEveryFixture) {
  for (const auto& f : testing::fixtures()) {
    const auto d = trc_to_representationB(remove_forall_implies(f.query));
    EXPECT_EQ(read_diagram(write_diagram(d)), d) << f.name;
  }
}

TEST(DiagramIoTest, DanglingEndpointIsAFormatError) {
  auto doc = nlohmann::json::parse(write_diagram(comparison_diagram()));
  doc["edges"][0]["a"]["box"] = "t9";
  EXPECT_THROW(read_diagram(doc.dump()), FormatError);
  EXPECT_THROW(read_diagram("{"), FormatError);
  EXPECT_THROW(read_diagram("{\"version\": 2}"), FormatError);
}

TEST(DiagramIoTest, DivisionDiagramCounts) {
  const auto doc = nlohmann::json::parse(write_diagram(trc_to_diagram(testing::fixture("division_enc").query)));
  const std::size_t boxes = doc["tables"].size() + doc["builtins"].size() + (doc["output"].is_null() ? 0 : 1);
  std::size_t negations = 0;
  for (const auto& p : doc["partitions"]) negations += p["kind"] == "negation";
  EXPECT_EQ(boxes, 7u);
  EXPECT_EQ(doc["edges"].size(), 7u);
  EXPECT_EQ(negations, 5u);
}

}  // namespace
}  // namespace trc
