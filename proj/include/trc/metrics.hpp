#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "trc/ast.hpp"
#include "trc/diagram.hpp"
#include "trc/evaluator.hpp"

namespace trc {

/// Box and edge counts of a diagram. Counting convention (see
/// docs/formats.md): a table counts 1 plus one per attribute row (attributes
/// touched by a plain edge, a condition box or an arrow); a fused selection 1
/// (its own row); a condition box 1; an unhinted unary built-in 2 (box and
/// anchor); an unhinted binary built-in 3;
/// a fuse box 1; the output box 1 plus its header; negation scopes 0.
/// Edges: every plain edge, every condition box edge and every arrow count 1.
struct SizeMetrics {
  std::size_t boxes = 0;
  std::size_t edges = 0;

  bool operator==(const SizeMetrics&) const = default;
};

SizeMetrics size_metrics(const Diagram& d);

/// exists r in R [(r.A1 = 11 or r.A1 = 12) and ... and (r.Ak = 10k+1 or r.Ak = 10k+2)]
Query family(int k);

/// Union of disjunction-free queries sharing the header of the source.
struct UnionForm {
  std::vector<Query> cells;
};

/// Distributes conjunction and existential quantification over disjunction
/// until every disjunction sits at the root. Throws FragmentError for a
/// disjunction under a negation, or for forall and ->.
UnionForm legacy_union_form(const Query& q);

ResultSet eval_union(const UnionForm& u, const Database& db, const Domain& dom);

/// Boxes of the union form: every cell drawn as its own diagram.
std::size_t legacy_boxes(const UnionForm& u);

struct BenchRow {
  std::string fixture;
  std::string expected;   // sidecar verdict, "-" if absent
  std::string verdict;    // "safe", "unsafe 1,4" or "error"
  bool verdict_matches = true;
  std::string fragment;
  bool translated = false;
  std::string atoms;      // "preserved", "differs" or "-"
  std::string roundtrip;  // "equivalent", "differs" or "-"
  std::string boxes, edges, legacy_boxes;
  std::string note;
};

struct BenchReport {
  std::vector<BenchRow> rows;

  std::size_t translated() const;
  std::string to_tsv() const;
};

/// Runs every `*.trc` file of `dir` (sorted by name) through the pipeline;
/// `<name>.expected` holds the expected safety verdict. Failures are recorded
/// per fixture.
BenchReport run_benchmark(const std::filesystem::path& dir, std::size_t instances = 20, std::uint64_t seed = 0);

}  // namespace trc
