// trcdiag: command-line front end for the TRC / diagram toolkit.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

#include "trc/diagram_io.hpp"
#include "trc/db_format.hpp"
#include "trc/evaluator.hpp"
#include "trc/fragments.hpp"
#include "trc/metrics.hpp"
#include "trc/parser.hpp"
#include "trc/render_svg.hpp"
#include "trc/safety.hpp"
#include "trc/translate.hpp"

namespace {

std::string slurp(const std::string& path) {
  if (path == "-") {
    std::ostringstream ss;
    ss << std::cin.rdbuf();
    return ss.str();
  }
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void emit(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << text;
}

trc::Query load_query(const std::string& path) { return trc::parse_query(slurp(path)); }

trc::Diagram load_diagram(const std::string& path) {
  auto d = trc::read_diagram(slurp(path));
  const auto report = trc::validate(d);
  if (!report.valid()) throw trc::InvalidDiagram("invalid diagram:\n" + report.to_text());
  return d;
}

std::string describe(const std::exception& e) {
  std::string msg = e.what();
  if (const auto* te = dynamic_cast<const trc::Error*>(&e); te && te->span()) {
    msg += " (at " + te->span()->to_string() + ")";
  }
  return msg;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Tuple relational calculus queries and their diagrams"};
  app.require_subcommand(1);
  int status = 0;

  std::string input, input2, output, db_path, mode = "repb", fragment;
  bool shading = false, dotted = false, expand = false;
  std::size_t instances = 20;
  std::uint64_t seed = 0;

  auto* check = app.add_subcommand("check", "Safety report; exit 0 if safe, 2 if unsafe");
  check->add_option("file", input, "TRC query file")->required();
  check->callback([&] {
    const auto report = trc::check_safety(load_query(input));
    std::cout << report.to_text();
    status = report.safe() ? 0 : 2;
  });

  auto* norm = app.add_subcommand("normalize", "Print the normalized query, optionally rewritten into a fragment");
  norm->add_option("file", input, "TRC query file")->required();
  norm->add_option("--fragment", fragment, "Target fragment")->check(CLI::IsMember({"encv", "enc"}));
  norm->callback([&] {
    auto q = load_query(input);
    if (!fragment.empty()) q = trc::remove_forall_implies(q);
    if (fragment == "enc") q = trc::remove_disjunction(q);
    std::cout << trc::pretty(q) << "\n";
  });

  auto* to_diag = app.add_subcommand("to-diagram", "Translate a query into a diagram (JSON)");
  to_diag->add_option("file", input, "TRC query file")->required();
  to_diag->add_option("--mode", mode, "builtin: built-in relations only; repb: with shortcuts and fuse boxes")
      ->check(CLI::IsMember({"builtin", "repb"}));
  to_diag->add_option("-o,--output", output, "Output file (default stdout)");
  to_diag->callback([&] {
    const auto q = load_query(input);
    const auto d = mode == "builtin" ? trc::trc_to_diagram(q) : trc::trc_to_representationB(q);
    emit(output, trc::write_diagram(d));
  });

  auto* from_diag = app.add_subcommand("from-diagram", "Read a diagram back into TRC");
  from_diag->add_option("file", input, "Diagram file, - for stdin")->required();
  from_diag->add_flag("--expand", expand, "Expand fuse boxes into double negations first");
  from_diag->callback([&] {
    trc::ReadBackOptions opts;
    opts.fuse_as_disjunction = !expand;
    std::cout << trc::pretty(trc::diagram_to_trc(load_diagram(input), opts)) << "\n";
  });

  auto* render = app.add_subcommand("render", "Render a diagram as SVG");
  render->add_option("file", input, "Diagram file, - for stdin")->required();
  render->add_flag("--shading", shading, "Shade zones at odd negation depth");
  render->add_flag("--dotted", dotted, "Separate fuse box members and join them with dotted lines");
  render->add_option("-o,--output", output, "Output file (default stdout)");
  render->callback([&] {
    const auto d = load_diagram(input);
    trc::LayoutOptions lo;
    if (dotted) lo.fuse_gap = 16;
    emit(output, trc::to_svg(trc::layout(d, lo), {shading, dotted}));
  });

  auto* eval = app.add_subcommand("eval", "Evaluate a query on a database");
  eval->add_option("file", input, "TRC query file")->required();
  eval->add_option("--db", db_path, "Database file")->required();
  eval->callback([&] {
    const auto q = load_query(input);
    auto inst = trc::read_database(slurp(db_path));
    for (const auto& c : trc::query_constants(*q.body)) inst.dom.insert(c);
    std::cout << trc::eval(q, inst.db, inst.dom).to_text() << "\n";
  });

  auto* equiv = app.add_subcommand("equiv", "Compare two queries on random instances; exit 0 if equivalent, 2 if not");
  equiv->add_option("a", input, "First query file")->required();
  equiv->add_option("b", input2, "Second query file")->required();
  equiv->add_option("--instances", instances, "Number of random instances");
  equiv->add_option("--seed", seed, "Random seed");
  equiv->callback([&] {
    const auto a = load_query(input);
    const auto b = load_query(input2);
    const auto inst = trc::gen_instances(std::vector<trc::Query>{a, b}, instances, seed);
    const auto r = trc::equiv_on(a, b, inst);
    std::cout << "seed " << seed << "\ninstances " << inst.size() << "\n";
    if (r.equivalent) {
      std::cout << "equivalent\n";
      return;
    }
    std::cout << "not equivalent\n# witness\n" << trc::write_database(inst[*r.witness]);
    std::cout << "# " << input << "\n" << r.left->to_text() << "\n# " << input2 << "\n" << r.right->to_text() << "\n";
    status = 2;
  });

  auto* metrics = app.add_subcommand("metrics", "Box and edge counts of a diagram");
  metrics->add_option("file", input, "Diagram file, - for stdin")->required();
  metrics->callback([&] {
    const auto m = trc::size_metrics(load_diagram(input));
    std::cout << "boxes\t" << m.boxes << "\nedges\t" << m.edges << "\n";
  });

  auto* bench = app.add_subcommand("bench", "Run every fixture of a directory through the pipeline");
  bench->add_option("dir", input, "Fixture directory")->required()->check(CLI::ExistingDirectory);
  bench->add_option("--instances", instances, "Random instances per fixture");
  bench->add_option("--seed", seed, "Random seed");
  bench->callback([&] {
    std::cout << "# seed " << seed << "\n" << trc::run_benchmark(input, instances, seed).to_tsv();
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  } catch (const std::exception& e) {
    std::cerr << "trcdiag: " << describe(e) << "\n";
    return 1;
  }
  return status;
}
