#include "trc/metrics.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "trc/atoms.hpp"
#include "trc/fragments.hpp"
#include "trc/normal_form.hpp"
#include "trc/parser.hpp"
#include "trc/safety.hpp"
#include "trc/translate.hpp"

namespace trc {

SizeMetrics size_metrics(const Diagram& d) {
  SizeMetrics m;
  auto hinted = [&](const std::string& box) { return d.hint_for(box) != nullptr; };
  std::map<std::string, std::set<std::string>> rows;  // table -> attributes with a plain edge
  for (const auto& e : d.edges) {
    if (hinted(e.a.box) || hinted(e.b.box)) {
      // Condition boxes still hang off an attribute row of their table.
      const auto* h = d.hint_for(hinted(e.a.box) ? e.a.box : e.b.box);
      const auto& other = hinted(e.a.box) ? e.b : e.a;
      if (h->kind != HintKind::Fused && d.table(other.box)) rows[other.box].insert(other.attr);
      continue;
    }
    ++m.edges;
    for (const auto* end : {&e.a, &e.b}) {
      if (d.table(end->box)) rows[end->box].insert(end->attr);
    }
  }
  for (const auto& t : d.tables) m.boxes += 1 + rows[t.id].size();
  for (const auto& b : d.builtins) {
    const auto* h = d.hint_for(b.id);
    if (!h) {
      m.boxes += b.unary() ? 2 : 3;
    } else if (h->kind == HintKind::Fused) {
      m.boxes += 1;
    } else if (h->kind == HintKind::Condition) {
      m.boxes += 1;
      m.edges += 1;
    } else {
      m.edges += 1;
    }
  }
  for (const auto& p : d.partitions) {
    if (p.kind == PartitionKind::FuseBox) ++m.boxes;
  }
  for (const auto& o : d.outputs) m.boxes += 1 + o.header.size();
  return m;
}

Query family(int k) {
  std::vector<FormulaPtr> conj;
  for (int i = 1; i <= k; ++i) {
    const AttrRef ref{"r", "A" + std::to_string(i)};
    conj.push_back(make_or({make_sel(ref, CmpOp::Eq, Constant{std::int64_t{10 * i + 1}}),
                            make_sel(ref, CmpOp::Eq, Constant{std::int64_t{10 * i + 2}})}));
  }
  auto body = conj.size() == 1 ? conj.front() : make_and(std::move(conj));
  return normalize(Query{std::nullopt, make_exists({Binding{"r", std::string("R")}}, body)});
}

namespace {

bool has_or(const Formula& f) {
  bool found = false;
  for_each_node(f, [&](const Formula& n) { found = found || n.is<Or>(); });
  return found;
}

std::vector<FormulaPtr> distribute(const FormulaPtr& f) {
  return std::visit(
      overloaded{
          [&](const JoinPred&) { return std::vector<FormulaPtr>{f}; },
          [&](const SelPred&) { return std::vector<FormulaPtr>{f}; },
          [&](const Not& n) {
            if (has_or(*n.body)) throw FragmentError("disjunction under a negation cannot be moved to the root", f->span());
            return std::vector<FormulaPtr>{f};
          },
          [&](const And& n) {
            std::vector<std::vector<FormulaPtr>> combos{{}};
            for (const auto& c : n.children) {
              std::vector<std::vector<FormulaPtr>> next;
              for (const auto& alt : distribute(c)) {
                for (const auto& partial : combos) {
                  auto extended = partial;
                  extended.push_back(alt);
                  next.push_back(std::move(extended));
                }
              }
              combos = std::move(next);
            }
            std::vector<FormulaPtr> out;
            for (auto& c : combos) out.push_back(make_and(std::move(c), f->span()));
            return out;
          },
          [&](const Or& n) {
            std::vector<FormulaPtr> out;
            for (const auto& c : n.children) {
              auto alts = distribute(c);
              out.insert(out.end(), alts.begin(), alts.end());
            }
            return out;
          },
          [&](const Implies&) -> std::vector<FormulaPtr> {
            throw FragmentError("union form needs a query without ->", f->span());
          },
          [&](const Forall&) -> std::vector<FormulaPtr> {
            throw FragmentError("union form needs a query without forall", f->span());
          },
          [&](const Exists& n) {
            std::vector<FormulaPtr> out;
            for (const auto& alt : distribute(n.body)) out.push_back(make_exists(n.bindings, alt, f->span()));
            return out;
          },
      },
      f->node());
}

}  // namespace

UnionForm legacy_union_form(const Query& q) {
  UnionForm u;
  // Cells are drawn separately, so each keeps the source variable names.
  for (const auto& alt : distribute(q.body)) u.cells.push_back(Query{q.output, maximal_scope(normalize(alt))});
  return u;
}

ResultSet eval_union(const UnionForm& u, const Database& db, const Domain& dom) {
  ResultSet out;
  bool any = false;
  std::set<Tuple> tuples;
  bool boolean = true;
  for (const auto& c : u.cells) {
    auto r = eval(c, db, dom);
    if (const auto* b = std::get_if<bool>(&r.value)) {
      any = any || *b;
    } else {
      boolean = false;
      const auto& s = std::get<std::set<Tuple>>(r.value);
      tuples.insert(s.begin(), s.end());
    }
  }
  if (boolean) out.value = any;
  else out.value = std::move(tuples);
  return out;
}

std::size_t legacy_boxes(const UnionForm& u) {
  std::size_t n = 0;
  for (const auto& c : u.cells) n += size_metrics(trc_to_representationB(c)).boxes;
  return n;
}

std::size_t BenchReport::translated() const {
  return static_cast<std::size_t>(std::count_if(rows.begin(), rows.end(), [](const BenchRow& r) { return r.translated; }));
}

std::string BenchReport::to_tsv() const {
  std::string out =
      "fixture\texpected\tverdict\tverdict_ok\tfragment\trepb\tatoms\troundtrip\tboxes\tedges\tlegacy_boxes\tnote\n";
  for (const auto& r : rows) {
    out += r.fixture + "\t" + r.expected + "\t" + r.verdict + "\t" + (r.verdict_matches ? "yes" : "NO") + "\t" +
           r.fragment + "\t" + (r.translated ? "ok" : "failed") + "\t" + r.atoms + "\t" + r.roundtrip + "\t" +
           r.boxes + "\t" + r.edges + "\t" + r.legacy_boxes + "\t" + r.note + "\n";
  }
  if (!rows.empty()) {
    out += "# translated " + std::to_string(translated()) + "/" + std::to_string(rows.size()) + "\n";
  }
  return out;
}

namespace {

std::string read_file(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string trim(std::string s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.pop_back();
  std::size_t i = 0;
  while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
  return s.substr(i);
}

std::string verdict_text(const SafetyReport& r) {
  if (r.safe()) return "safe";
  std::string out = "unsafe ";
  const auto conds = r.conditions();
  for (std::size_t i = 0; i < conds.size(); ++i) out += (i ? "," : "") + std::to_string(conds[i]);
  return out;
}

BenchRow run_fixture(const std::filesystem::path& file, std::size_t instances, std::uint64_t seed) {
  BenchRow row;
  row.fixture = file.stem().string();
  auto sidecar = file;
  sidecar.replace_extension(".expected");
  row.expected = std::filesystem::exists(sidecar) ? trim(read_file(sidecar)) : "-";
  row.fragment = row.atoms = row.roundtrip = row.boxes = row.edges = row.legacy_boxes = "-";
  try {
    const auto q = parse_query(read_file(file));
    row.verdict = verdict_text(check_safety(q));
    row.fragment = std::string(fragment_name(classify(q)));
    const auto src = classify(q) == Fragment::Full ? remove_forall_implies(q) : q;

    const auto d = trc_to_representationB(src);
    const auto m = size_metrics(d);
    row.boxes = std::to_string(m.boxes);
    row.edges = std::to_string(m.edges);
    const auto back = diagram_to_trc(d);
    row.translated = validate(d).valid();

    std::map<std::string, std::string> fixed;
    if (q.output) fixed[src.output->var] = back.output->var;
    row.atoms = match_up_to_renaming(atoms(src), atoms(back), fixed) ? "preserved" : "differs";
    const auto inst = gen_instances(std::vector<Query>{q, back}, instances, seed);
    row.roundtrip = equiv_on(q, back, inst).equivalent ? "equivalent" : "differs";
    try {
      row.legacy_boxes = std::to_string(legacy_boxes(legacy_union_form(src)));
    } catch (const FragmentError&) {
      row.legacy_boxes = "n/a";
    }
  } catch (const std::exception& e) {
    if (row.verdict.empty()) row.verdict = "error";
    row.note = e.what();
  }
  row.verdict_matches = row.expected == "-" || row.expected == row.verdict;
  return row;
}

}  // namespace

BenchReport run_benchmark(const std::filesystem::path& dir, std::size_t instances, std::uint64_t seed) {
  BenchReport report;
  std::vector<std::filesystem::path> files;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".trc") files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());
  for (const auto& f : files) report.rows.push_back(run_fixture(f, instances, seed));
  return report;
}

}  // namespace trc
