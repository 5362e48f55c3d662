#include "oracles.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

#include "trc/db_format.hpp"
#include "trc/parser.hpp"

namespace trc::testing {

namespace {

std::string op_str(CmpOp op) {
  switch (op) {
    case CmpOp::Eq: return "=";
    case CmpOp::Ne: return "<>";
    case CmpOp::Lt: return "<";
    case CmpOp::Le: return "<=";
    case CmpOp::Gt: return ">";
    case CmpOp::Ge: return ">=";
  }
  return "?";
}

CmpOp flipped(CmpOp op) {
  switch (op) {
    case CmpOp::Lt: return CmpOp::Gt;
    case CmpOp::Gt: return CmpOp::Lt;
    case CmpOp::Le: return CmpOp::Ge;
    case CmpOp::Ge: return CmpOp::Le;
    default: return op;
  }
}

std::string ref(const AttrRef& r) { return r.var + "." + r.attr; }

std::string value(const Constant& c) {
  if (const auto* i = std::get_if<std::int64_t>(&c)) return std::to_string(*i);
  return "'" + std::get<std::string>(c) + "'";
}

std::string relation(const Relation& r) {
  if (const auto* s = std::get_if<std::string>(&r)) return *s;
  const auto& b = std::get<BuiltinRelation>(r);
  return "\"" + op_str(b.op) + (b.constant ? value(*b.constant) : "") + "\"";
}

std::string bindings(const std::vector<Binding>& bs) {
  std::vector<std::string> parts;
  for (const auto& b : bs) parts.push_back(b.var + ":" + relation(b.relation));
  std::sort(parts.begin(), parts.end());
  std::string out;
  for (const auto& p : parts) out += p + ";";
  return out;
}

std::string joined(const char* tag, std::vector<std::string> parts) {
  std::sort(parts.begin(), parts.end());
  std::string out = std::string(tag) + "(";
  for (const auto& p : parts) out += p + ",";
  return out + ")";
}

void collect_bound(const Formula& f, std::vector<Binding>& out) {
  if (const auto* e = f.get_if<Exists>()) out.insert(out.end(), e->bindings.begin(), e->bindings.end());
  if (const auto* e = f.get_if<Forall>()) out.insert(out.end(), e->bindings.begin(), e->bindings.end());
  for (const auto& c : children(f)) collect_bound(*c, out);
}

}  // namespace

std::string sorted_form(const Formula& f) {
  if (const auto* j = f.get_if<JoinPred>()) {
    auto l = ref(j->left), r = ref(j->right);
    auto op = j->op;
    if (r < l) {
      std::swap(l, r);
      op = flipped(op);
    }
    return l + op_str(op) + r;
  }
  if (const auto* s = f.get_if<SelPred>()) return ref(s->left) + op_str(s->op) + value(s->value);
  if (const auto* n = f.get_if<Not>()) return "not(" + sorted_form(*n->body) + ")";
  if (const auto* a = f.get_if<And>()) {
    std::vector<std::string> parts;
    for (const auto& c : a->children) parts.push_back(sorted_form(*c));
    return joined("and", parts);
  }
  if (const auto* o = f.get_if<Or>()) {
    std::vector<std::string> parts;
    for (const auto& c : o->children) parts.push_back(sorted_form(*c));
    return joined("or", parts);
  }
  if (const auto* i = f.get_if<Implies>()) return "imp(" + sorted_form(*i->premise) + "," + sorted_form(*i->conclusion) + ")";
  if (const auto* e = f.get_if<Exists>()) return "ex{" + bindings(e->bindings) + "}[" + sorted_form(*e->body) + "]";
  const auto& u = f.as<Forall>();
  return "all{" + bindings(u.bindings) + "}[" + sorted_form(*u.body) + "]";
}

bool alpha_equiv_oracle(const Query& a, const Query& b) {
  if (a.output.has_value() != b.output.has_value()) return false;
  if (a.output && a.output->header != b.output->header) return false;
  std::vector<Binding> ba, bb;
  collect_bound(*a.body, ba);
  collect_bound(*b.body, bb);
  if (ba.size() != bb.size()) return false;

  std::map<std::string, std::string> base;
  if (a.output) base[b.output->var] = a.output->var;
  const std::string target = sorted_form(*a.body);

  std::vector<std::size_t> perm(bb.size());
  for (std::size_t i = 0; i < perm.size(); ++i) perm[i] = i;
  do {
    bool fits = true;
    auto names = base;
    for (std::size_t i = 0; i < perm.size() && fits; ++i) {
      fits = bb[perm[i]].relation == ba[i].relation;
      names[bb[perm[i]].var] = ba[i].var;
    }
    if (fits && sorted_form(*rename_vars(b.body, names)) == target) return true;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return false;
}

std::string fixture_dir() { return TRC_FIXTURE_DIR; }

std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

const std::vector<Fixture>& fixtures() {
  static const std::vector<Fixture> all = [] {
    std::vector<std::filesystem::path> files;
    for (const auto& e : std::filesystem::directory_iterator(fixture_dir())) {
      if (e.path().extension() == ".trc") files.push_back(e.path());
    }
    std::sort(files.begin(), files.end());
    std::vector<Fixture> out;
    for (const auto& f : files) {
      Fixture fx;
      fx.name = f.stem().string();
      fx.text = read_text(f.string());
      fx.query = parse_query(fx.text);
      auto side = f;
      side.replace_extension(".expected");
      fx.expected = read_text(side.string());
      while (!fx.expected.empty() && std::isspace(static_cast<unsigned char>(fx.expected.back()))) fx.expected.pop_back();
      out.push_back(std::move(fx));
    }
    return out;
  }();
  return all;
}

const Fixture& fixture(const std::string& name) {
  for (const auto& f : fixtures()) {
    if (f.name == name) return f;
  }
  throw std::runtime_error("no fixture " + name);
}

Instance comparison_instance() { return read_database("R(A): (1)\nS(B): (2)\ndomain: 1 2 3\n"); }

}  // namespace trc::testing
