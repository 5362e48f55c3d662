#include "trc/diagram_io.hpp"

#include <json.hpp>

namespace trc {
namespace {

using nlohmann::json;

std::string_view kind_name(PartitionKind k) {
  switch (k) {
    case PartitionKind::Base: return "base";
    case PartitionKind::Negation: return "negation";
    case PartitionKind::FuseBox: return "fuse";
  }
  return "?";
}

std::string_view hint_name(HintKind k) {
  switch (k) {
    case HintKind::Fused: return "fused";
    case HintKind::Condition: return "condition";
    case HintKind::Arrow: return "arrow";
  }
  return "?";
}

json constant_json(const Constant& c) {
  if (const auto* i = std::get_if<std::int64_t>(&c)) return *i;
  return std::get<std::string>(c);
}

json endpoint_json(const Endpoint& e) { return {{"box", e.box}, {"attr", e.attr}}; }

json output_json(const OutputBox& o) {
  return {{"id", o.id}, {"header", o.header}, {"partition", o.partition}};
}

// Field access with the JSON path in every error message.
class Field {
 public:
  Field(const json& j, std::string path) : j_(j), path_(std::move(path)) {}

  Field at(const std::string& key) const {
    if (!j_.is_object()) throw FormatError(path_ + " is not an object");
    auto it = j_.find(key);
    if (it == j_.end()) throw FormatError(path_ + " has no field '" + key + "'");
    return Field(*it, path_ + "." + key);
  }
  bool has(const std::string& key) const { return j_.is_object() && j_.contains(key) && !j_.at(key).is_null(); }

  Field at(std::size_t i) const { return Field(j_.at(i), path_ + "[" + std::to_string(i) + "]"); }
  std::size_t size() const {
    if (!j_.is_array()) throw FormatError(path_ + " is not an array");
    return j_.size();
  }

  std::string str() const {
    if (!j_.is_string()) throw FormatError(path_ + " must be a string");
    return j_.get<std::string>();
  }
  std::vector<std::string> strings() const {
    std::vector<std::string> out;
    for (std::size_t i = 0; i < size(); ++i) out.push_back(at(i).str());
    return out;
  }
  Constant constant() const {
    if (j_.is_number_integer()) return Constant{j_.get<std::int64_t>()};
    if (j_.is_string()) return Constant{j_.get<std::string>()};
    throw FormatError(path_ + " must be an integer or a string");
  }
  const json& raw() const { return j_; }
  const std::string& path() const { return path_; }

 private:
  const json& j_;
  std::string path_;
};

Endpoint read_endpoint(const Field& f) { return {f.at("box").str(), f.at("attr").str()}; }

OutputBox read_output(const Field& f) {
  OutputBox o;
  if (f.has("id")) o.id = f.at("id").str();
  o.header = f.at("header").strings();
  o.partition = f.at("partition").str();
  return o;
}

void check_references(const Diagram& d) {
  for (std::size_t i = 0; i < d.partitions.size(); ++i) {
    const auto& p = d.partitions[i];
    if (!p.parent.empty() && !d.partition(p.parent)) {
      throw FormatError("partitions[" + std::to_string(i) + "]: unknown parent '" + p.parent + "'");
    }
  }
  auto check_partition = [&](const std::string& where, const std::string& id) {
    if (!d.partition(id)) throw FormatError(where + ": unknown partition '" + id + "'");
  };
  for (std::size_t i = 0; i < d.tables.size(); ++i) check_partition("tables[" + std::to_string(i) + "]", d.tables[i].partition);
  for (std::size_t i = 0; i < d.builtins.size(); ++i) {
    check_partition("builtins[" + std::to_string(i) + "]", d.builtins[i].partition);
  }
  for (const auto& o : d.outputs) check_partition("output", o.partition);
  for (std::size_t i = 0; i < d.edges.size(); ++i) {
    for (const auto* e : {&d.edges[i].a, &d.edges[i].b}) {
      if (d.partition_of(e->box).empty()) {
        throw FormatError("edges[" + std::to_string(i) + "]: unknown box '" + e->box + "'");
      }
    }
  }
  for (std::size_t i = 0; i < d.hints.size(); ++i) {
    if (d.partition_of(d.hints[i].box).empty()) {
      throw FormatError("hints[" + std::to_string(i) + "]: unknown box '" + d.hints[i].box + "'");
    }
  }
}

}  // namespace

std::string write_diagram(const Diagram& d) {
  json doc;
  doc["version"] = 1;
  json parts = json::array();
  for (const auto& p : d.partitions) {
    json j{{"id", p.id}, {"kind", kind_name(p.kind)}};
    if (!p.parent.empty()) j["parent"] = p.parent;
    if (p.kind == PartitionKind::FuseBox || !p.group.empty()) j["group"] = p.group;
    parts.push_back(std::move(j));
  }
  doc["partitions"] = std::move(parts);
  json tables = json::array();
  for (const auto& t : d.tables) {
    tables.push_back({{"id", t.id}, {"relation", t.relation}, {"var", t.var}, {"partition", t.partition},
                      {"attributes", t.attributes}});
  }
  doc["tables"] = std::move(tables);
  json builtins = json::array();
  for (const auto& b : d.builtins) {
    json j{{"id", b.id}, {"op", op_text(b.op)}, {"partition", b.partition}};
    if (b.constant) j["constant"] = constant_json(*b.constant);
    builtins.push_back(std::move(j));
  }
  doc["builtins"] = std::move(builtins);
  json edges = json::array();
  for (const auto& e : d.edges) edges.push_back({{"a", endpoint_json(e.a)}, {"b", endpoint_json(e.b)}});
  doc["edges"] = std::move(edges);
  if (d.outputs.empty()) {
    doc["output"] = nullptr;
  } else if (d.outputs.size() == 1) {
    doc["output"] = output_json(d.outputs.front());
  } else {
    json outs = json::array();
    for (const auto& o : d.outputs) outs.push_back(output_json(o));
    doc["output"] = std::move(outs);
  }
  json hints = json::array();
  for (const auto& h : d.hints) hints.push_back({{"kind", hint_name(h.kind)}, {"box", h.box}});
  doc["hints"] = std::move(hints);
  return doc.dump(2) + "\n";
}

Diagram read_diagram(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    std::size_t line = 1;
    for (std::size_t i = 0; i < e.byte && i < text.size(); ++i) {
      if (text[i] == '\n') ++line;
    }
    throw FormatError(std::string("malformed JSON: ") + e.what(), line);
  }
  const Field root(doc, "$");
  if (!root.at("version").raw().is_number_integer() || root.at("version").raw().get<int>() != 1) {
    throw FormatError("unsupported diagram version");
  }
  Diagram d;
  const auto parts = root.at("partitions");
  for (std::size_t i = 0; i < parts.size(); ++i) {
    const auto f = parts.at(i);
    Partition p;
    p.id = f.at("id").str();
    const auto kind = f.at("kind").str();
    if (kind == "base") p.kind = PartitionKind::Base;
    else if (kind == "negation") p.kind = PartitionKind::Negation;
    else if (kind == "fuse") p.kind = PartitionKind::FuseBox;
    else throw FormatError(f.path() + ".kind: unknown partition kind '" + kind + "'");
    if (f.has("parent")) p.parent = f.at("parent").str();
    if (f.has("group")) p.group = f.at("group").str();
    d.partitions.push_back(std::move(p));
  }
  const auto tables = root.at("tables");
  for (std::size_t i = 0; i < tables.size(); ++i) {
    const auto f = tables.at(i);
    d.tables.push_back({f.at("id").str(), f.at("relation").str(), f.at("var").str(), f.at("partition").str(),
                        f.at("attributes").strings()});
  }
  const auto builtins = root.at("builtins");
  for (std::size_t i = 0; i < builtins.size(); ++i) {
    const auto f = builtins.at(i);
    BuiltinBox b;
    b.id = f.at("id").str();
    auto rel = parse_builtin_name(f.at("op").str());
    if (!rel || rel->constant) throw FormatError(f.path() + ".op: not a comparison operator");
    b.op = rel->op;
    if (f.has("constant")) b.constant = f.at("constant").constant();
    b.partition = f.at("partition").str();
    d.builtins.push_back(std::move(b));
  }
  const auto edges = root.at("edges");
  for (std::size_t i = 0; i < edges.size(); ++i) {
    const auto f = edges.at(i);
    d.edges.push_back({read_endpoint(f.at("a")), read_endpoint(f.at("b"))});
  }
  if (root.has("output")) {
    const auto out = root.at("output");
    if (out.raw().is_array()) {
      for (std::size_t i = 0; i < out.size(); ++i) d.outputs.push_back(read_output(out.at(i)));
    } else {
      d.outputs.push_back(read_output(out));
    }
  }
  if (root.has("hints")) {
    const auto hints = root.at("hints");
    for (std::size_t i = 0; i < hints.size(); ++i) {
      const auto f = hints.at(i);
      const auto kind = f.at("kind").str();
      Hint h;
      if (kind == "fused") h.kind = HintKind::Fused;
      else if (kind == "condition") h.kind = HintKind::Condition;
      else if (kind == "arrow") h.kind = HintKind::Arrow;
      else throw FormatError(f.path() + ".kind: unknown hint kind '" + kind + "'");
      h.box = f.at("box").str();
      d.hints.push_back(std::move(h));
    }
  }
  check_references(d);
  return d;
}

}  // namespace trc
