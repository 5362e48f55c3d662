// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any
// criterion fails. Time limits are part of the criteria.

#include <boost/property_tree/ptree.hpp>
#include <boost/property_tree/xml_parser.hpp>
#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <sstream>

#include "support/generators.hpp"
#include "support/oracles.hpp"
#include "trc/alpha_equiv.hpp"
#include "trc/atoms.hpp"
#include "trc/evaluator.hpp"
#include "trc/fragments.hpp"
#include "trc/metrics.hpp"
#include "trc/normal_form.hpp"
#include "trc/parser.hpp"
#include "trc/render_svg.hpp"
#include "trc/safety.hpp"
#include "trc/translate.hpp"

using namespace trc;
using testing::fixture;
using testing::fixtures;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

// Collects the first few failure messages of a criterion.
class Check {
 public:
  void fail(const std::string& msg) {
    ++failures_;
    if (failures_ <= 3) messages_ += (messages_.empty() ? "" : "; ") + msg;
  }
  void expect(bool ok, const std::string& msg) {
    if (!ok) fail(msg);
  }
  std::size_t failures() const { return failures_; }
  Outcome done(const std::string& summary) const {
    if (failures_ == 0) return {true, summary};
    return {false, std::to_string(failures_) + " failure(s): " + messages_};
  }

 private:
  std::size_t failures_ = 0;
  std::string messages_;
};

std::string verdict(const SafetyReport& r) {
  if (r.safe()) return "safe";
  std::string out = "unsafe";
  for (int c : r.conditions()) out += " " + std::to_string(c);
  return out;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

Outcome within(Outcome o, double elapsed, double limit) {
  char buf[64];
  std::snprintf(buf, sizeof buf, " [%.2fs, limit %.0fs]", elapsed, limit);
  if (elapsed >= limit) o.pass = false;
  o.detail += buf;
  return o;
}

Outcome builtin_placement() {
  Check c;
  const auto inst = testing::comparison_instance();
  const std::pair<const char*, const char*> cases[] = {
      {"builtin_base", "false"}, {"builtin_inner", "false"}, {"builtin_outer", "true"}};
  std::string seen;
  for (const auto& [name, want] : cases) {
    const auto got = eval(fixture(name).query, inst.db, inst.dom).to_text();
    seen += std::string(seen.empty() ? "" : ", ") + name + "=" + got;
    c.expect(got == want, std::string(name) + " gave " + got);
  }
  return c.done(seen);
}

Outcome atom_preservation() {
  Check c;
  std::size_t n = 0;
  auto check = [&](const Query& q, const std::string& label) {
    const auto before = atoms(q);
    const auto encv = remove_forall_implies(q);
    c.expect(atoms(encv) == before, "forall/implies removal changed atoms of " + label);
    c.expect(atoms(remove_disjunction(encv)) == before, "disjunction removal changed atoms of " + label);
    ++n;
  };
  for (const auto& f : fixtures()) check(f.query, f.name);
  const auto fixture_count = n;
  testing::QueryGenerator gen(2024, {Fragment::Full, 4, 0.4});
  for (int i = 0; i < 500; ++i) check(gen.next(), "random #" + std::to_string(i));
  c.expect(fixture_count >= 12, "only " + std::to_string(fixture_count) + " fixtures");
  return c.done(std::to_string(fixture_count) + " fixtures + 500 random queries, atom bags identical");
}

Outcome semantic_preservation() {
  Check c;
  std::size_t comparisons = 0, max_dom = 0, max_tuples = 0;
  for (const auto& f : fixtures()) {
    const auto& q = f.query;
    std::vector<std::pair<std::string, Query>> variants;
    variants.emplace_back("normalize", normalize(q));
    variants.emplace_back("maximal_scope", maximal_scope(q));
    const auto encv = remove_forall_implies(q);
    const auto enc = remove_disjunction(encv);
    variants.emplace_back("remove_forall_implies", encv);
    variants.emplace_back("remove_disjunction", enc);
    variants.emplace_back("to_builtin_form", to_builtin_form(enc));
    variants.emplace_back("diagram round trip", diagram_to_trc(trc_to_diagram(enc)));
    const auto repb = trc_to_representationB(encv);
    variants.emplace_back("representationB round trip", diagram_to_trc(repb));
    variants.emplace_back("fuse expansion", diagram_to_trc(expand_fuse_boxes(repb)));

    std::vector<Query> all{q};
    for (const auto& [_, v] : variants) all.push_back(v);
    const auto inst = gen_instances(all, 20, 0);
    for (const auto& i : inst) {
      max_dom = std::max(max_dom, i.dom.size());
      for (const auto& [_, t] : i.db) max_tuples = std::max(max_tuples, t.tuples.size());
    }
    for (const auto& [label, v] : variants) {
      ++comparisons;
      c.expect(equiv_on(q, v, inst).equivalent, label + " on " + f.name);
    }
  }
  c.expect(max_tuples <= 3, "an instance has " + std::to_string(max_tuples) + " tuples in one relation");
  return c.done(std::to_string(comparisons) + " transform/fixture pairs x 20 instances, 0 mismatches (largest domain " +
                std::to_string(max_dom) + ", at most " + std::to_string(max_tuples) + " tuples per relation)");
}

Outcome round_trip() {
  Check c;
  std::size_t n = 0;
  auto check = [&](const Query& q, const std::string& label) {
    const auto back = diagram_to_trc(trc_to_diagram(q));
    c.expect(alpha_equiv(back, to_builtin_form(q)), label + ": " + pretty(back));
    ++n;
  };
  std::size_t enc_fixtures = 0;
  for (const auto& f : fixtures()) {
    if (classify(f.query) == Fragment::ENC) {
      check(f.query, f.name);
      ++enc_fixtures;
    }
    check(remove_disjunction(remove_forall_implies(f.query)), f.name + " (ENC form)");
  }
  testing::QueryGenerator gen(4242, {Fragment::ENC, 3, 0.4});
  for (int i = 0; i < 200; ++i) check(gen.next(), "random #" + std::to_string(i));
  return c.done(std::to_string(enc_fixtures) + " ENC fixtures, ENC forms of all fixtures and 200 random queries (" +
                std::to_string(n) + " round trips)");
}

Outcome safety_verdicts() {
  Check c;
  const std::pair<const char*, const char*> cases[] = {
      {"nested_disjunction_forall", "safe"},  {"union", "safe"},
      {"union_demorgan", "unsafe 2"},         {"unsafe_between", "unsafe 1"},
      {"unsafe_output_reused", "unsafe 4"},   {"safe_output_replaced", "safe"},
      {"output_bound_twice", "unsafe 4"},     {"output_bound_once", "safe"},
      {"output_bound_disjunct", "safe"},      {"nested_disjunction_encv", "safe"}};
  std::string seen;
  for (const auto& [name, want] : cases) {
    const auto got = verdict(check_safety(fixture(name).query));
    c.expect(got == want, std::string(name) + ": " + got + ", expected " + want);
    if (got != "safe") seen += std::string(seen.empty() ? "" : ", ") + name + " " + got;
  }
  return c.done("10 verdicts match; " + seen);
}

Outcome safety_preservation() {
  Check c;
  std::size_t safe = 0;
  for (const auto& f : fixtures()) {
    if (!check_safety(f.query).safe()) continue;
    ++safe;
    const auto encv = remove_forall_implies(f.query);
    c.expect(check_safety(encv).safe(), f.name + " unsafe after forall/implies removal");
    c.expect(check_safety(diagram_to_trc(trc_to_representationB(encv))).safe(), f.name + " unsafe after diagram read-back");
  }
  const auto flipped = check_safety(remove_disjunction(fixture("union").query));
  c.expect(!flipped.safe(), "union stays safe after disjunction removal");
  return c.done(std::to_string(safe) + " safe fixtures stay safe; union after disjunction removal: " + verdict(flipped));
}

Outcome succinctness() {
  Check c;
  double last_ratio = 0;
  std::string k8;
  for (int k = 1; k <= 8; ++k) {
    const auto m = size_metrics(trc_to_representationB(family(k)));
    const auto legacy = legacy_boxes(legacy_union_form(family(k)));
    const std::size_t want_boxes = 5 * k + 1, want_edges = 2 * k, want_legacy = (k + 1) * (std::size_t{1} << k);
    c.expect(m.boxes == want_boxes && m.edges == want_edges,
             "k=" + std::to_string(k) + ": " + std::to_string(m.boxes) + " boxes, " + std::to_string(m.edges) + " edges");
    c.expect(legacy == want_legacy, "k=" + std::to_string(k) + ": legacy " + std::to_string(legacy));
    const double ratio = static_cast<double>(legacy) / static_cast<double>(m.boxes);
    c.expect(ratio > last_ratio, "ratio not increasing at k=" + std::to_string(k));
    last_ratio = ratio;
    if (k == 8) k8 = std::to_string(m.boxes) + " vs " + std::to_string(legacy);
  }
  return c.done("k=1..8 match 5k+1 / 2k and (k+1)*2^k; k=8: " + k8);
}

Outcome textbook() {
  Check c;
  for (const auto* name : {"textbook_sailors", "textbook_smith", "textbook_parts"}) {
    const auto& q = fixture(name).query;
    const auto d = trc_to_representationB(q);
    c.expect(validate(d).valid(), std::string(name) + ": " + validate(d).to_text());
    const auto back = diagram_to_trc(d);
    std::map<std::string, std::string> fixed;
    if (q.output) fixed[q.output->var] = back.output->var;
    c.expect(match_up_to_renaming(atoms(q), atoms(back), fixed), std::string(name) + ": atoms differ");
  }
  return c.done("3 queries translate to valid diagrams with atoms preserved");
}

std::map<std::string, std::string> box_zones(const std::string& svg) {
  namespace pt = boost::property_tree;
  std::istringstream in(svg);
  pt::ptree tree;
  pt::read_xml(in, tree);
  std::map<std::string, std::string> out;
  for (const auto& [tag, g] : tree.get_child("svg").get_child("g")) {
    if (tag != "g" || g.get<std::string>("<xmlattr>.id", "") != "boxes") continue;
    for (const auto& [btag, box] : g) {
      if (btag == "g") out[box.get<std::string>("<xmlattr>.id")] = box.get<std::string>("<xmlattr>.data-zone");
    }
  }
  return out;
}

Outcome renderer() {
  Check c;
  std::size_t boxes = 0;
  for (const auto& f : fixtures()) {
    const auto d = trc_to_representationB(remove_forall_implies(f.query));
    for (int gap : {0, 16}) {
      const auto svg = to_svg(layout(d, {gap}), {true, gap > 0});
      c.expect(svg == to_svg(layout(d, {gap}), {true, gap > 0}), f.name + ": output not byte-stable");
      std::map<std::string, std::string> before, after;
      try {
        before = box_zones(svg);
        after = box_zones(to_svg(layout(expand_fuse_boxes(d), {gap}), {true, gap > 0}));
      } catch (const std::exception& e) {
        c.fail(f.name + ": " + e.what());
        continue;
      }
      c.expect(before == after, f.name + ": shading changes under fuse expansion");
      for (const auto& t : d.tables) {
        const auto want = d.negation_depth(t.partition) % 2 ? "gray" : "white";
        c.expect(before[t.id] == want, f.name + ": " + t.id + " drawn " + before[t.id]);
      }
      if (gap == 0) boxes += before.size();
    }
  }
  return c.done(std::to_string(fixtures().size()) + " fixtures well-formed, stable, " + std::to_string(boxes) +
                " boxes keep their shade");
}

}  // namespace

int main() {
  struct Criterion {
    const char* name;
    double limit;  // seconds, 0 for none
    std::function<Outcome()> run;
  };
  const Criterion criteria[] = {
      {"AC1 built-in placement: base, inner, outer", 1, builtin_placement},
      {"AC2 atom preservation of fragment rewrites", 10, atom_preservation},
      {"AC3 semantic preservation of every transform", 60, semantic_preservation},
      {"AC4 diagram round trip up to renaming", 0, round_trip},
      {"AC5 safety verdicts and violated conditions", 0, safety_verdicts},
      {"AC6 safety preservation, with required negative case", 0, safety_preservation},
      {"AC7 succinctness of fuse boxes against union cells", 5, succinctness},
      {"AC8 textbook disjunction queries", 0, textbook},
      {"AC9 renderer: well-formed, stable, parity shading", 0, renderer},
  };
  // Fixtures are parsed once up front so that no criterion pays for it.
  (void)fixtures();

  int failed = 0;
  for (const auto& c : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    if (c.limit > 0) o = within(o, seconds_since(t0), c.limit);
    failed += !o.pass;
    std::cout << (o.pass ? "PASS " : "FAIL ") << c.name << " -- " << o.detail << std::endl;
  }
  std::cout << (failed ? std::to_string(failed) + " criterion/criteria failed" : "all 9 criteria passed") << std::endl;
  return failed ? 1 : 0;
}
