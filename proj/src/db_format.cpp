#include "trc/db_format.hpp"

#include <cctype>
#include <charconv>

namespace trc {
namespace {

struct Lex {
  enum Kind { Ident, Int, Str, Punct, End } kind;
  std::string text;
  Constant value;
  std::size_t line;
};

std::vector<Lex> tokenize(std::string_view s) {
  std::vector<Lex> out;
  std::size_t line = 1, i = 0;
  while (i < s.size()) {
    const char c = s[i];
    if (c == '\n') {
      ++line;
      ++i;
    } else if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
    } else if (c == '#') {
      while (i < s.size() && s[i] != '\n') ++i;
    } else if (c == '(' || c == ')' || c == ',' || c == ':') {
      out.push_back({Lex::Punct, std::string(1, c), {}, line});
      ++i;
    } else if (c == '"') {
      std::string v;
      ++i;
      while (i < s.size() && s[i] != '"') {
        if (s[i] == '\n') throw FormatError("unterminated string", line);
        if (s[i] == '\\' && i + 1 < s.size()) ++i;
        v += s[i++];
      }
      if (i >= s.size()) throw FormatError("unterminated string", line);
      ++i;
      out.push_back({Lex::Str, v, Constant{v}, line});
    } else if (std::isdigit(static_cast<unsigned char>(c)) || c == '-') {
      const std::size_t start = i++;
      while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) ++i;
      std::int64_t v = 0;
      auto [p, ec] = std::from_chars(s.data() + start, s.data() + i, v);
      if (ec != std::errc{} || p != s.data() + i) {
        throw FormatError("bad integer '" + std::string(s.substr(start, i - start)) + "'", line);
      }
      out.push_back({Lex::Int, std::string(s.substr(start, i - start)), Constant{v}, line});
    } else if (std::isalpha(static_cast<unsigned char>(c)) || c == '_' || c == '$') {
      const std::size_t start = i++;
      while (i < s.size() && (std::isalnum(static_cast<unsigned char>(s[i])) || s[i] == '_')) ++i;
      out.push_back({Lex::Ident, std::string(s.substr(start, i - start)), {}, line});
    } else {
      throw FormatError(std::string("unexpected character '") + c + "'", line);
    }
  }
  out.push_back({Lex::End, "", {}, line});
  return out;
}

class Reader {
 public:
  explicit Reader(std::vector<Lex> toks) : toks_(std::move(toks)) {}

  Instance run() {
    Instance inst;
    bool have_domain = false;
    while (peek().kind != Lex::End) {
      const Lex name = expect_ident();
      if (name.text == "domain" && is_punct(":")) {
        if (have_domain) throw FormatError("second domain entry", name.line);
        have_domain = true;
        advance();
        while (peek().kind == Lex::Int || peek().kind == Lex::Str) inst.dom.insert(advance().value);
        continue;
      }
      Table table;
      expect_punct("(");
      if (!is_punct(")")) {
        table.schema.push_back(expect_ident().text);
        while (is_punct(",")) {
          advance();
          table.schema.push_back(expect_ident().text);
        }
      }
      expect_punct(")");
      expect_punct(":");
      for (std::size_t i = 0; i < table.schema.size(); ++i) {
        for (std::size_t j = i + 1; j < table.schema.size(); ++j) {
          if (table.schema[i] == table.schema[j]) {
            throw FormatError("duplicate attribute '" + table.schema[i] + "' in " + name.text, name.line);
          }
        }
      }
      while (is_punct("(")) {
        const std::size_t line = advance().line;
        Tuple t;
        if (!is_punct(")")) {
          t.push_back(expect_constant());
          while (is_punct(",")) {
            advance();
            t.push_back(expect_constant());
          }
        }
        expect_punct(")");
        if (t.size() != table.schema.size()) {
          throw FormatError("tuple has " + std::to_string(t.size()) + " values but " + name.text + " has " +
                                std::to_string(table.schema.size()) + " attributes",
                            line);
        }
        table.tuples.insert(std::move(t));
      }
      if (!inst.db.emplace(name.text, std::move(table)).second) {
        throw FormatError("relation " + name.text + " defined twice", name.line);
      }
    }
    if (!have_domain) {
      for (const auto& [_, t] : inst.db) {
        for (const auto& row : t.tuples) inst.dom.insert(row.begin(), row.end());
      }
    }
    return inst;
  }

 private:
  const Lex& peek() const { return toks_[pos_]; }
  const Lex& advance() { return toks_[pos_++]; }
  bool is_punct(const char* p) const { return peek().kind == Lex::Punct && peek().text == p; }

  std::string found() const { return peek().kind == Lex::End ? "end of input" : "'" + peek().text + "'"; }

  const Lex& expect_ident() {
    if (peek().kind != Lex::Ident) throw FormatError("expected a name, found " + found(), peek().line);
    return advance();
  }
  void expect_punct(const char* p) {
    if (!is_punct(p)) throw FormatError(std::string("expected '") + p + "', found " + found(), peek().line);
    advance();
  }
  Constant expect_constant() {
    if (peek().kind != Lex::Int && peek().kind != Lex::Str) {
      throw FormatError("expected a constant, found " + found(), peek().line);
    }
    return advance().value;
  }

  std::vector<Lex> toks_;
  std::size_t pos_ = 0;
};

}  // namespace

Instance read_database(std::string_view text) { return Reader(tokenize(text)).run(); }

std::string write_database(const Instance& inst) {
  std::string out;
  for (const auto& [name, table] : inst.db) {
    out += name + "(";
    for (std::size_t i = 0; i < table.schema.size(); ++i) out += (i ? "," : "") + table.schema[i];
    out += "):";
    for (const auto& t : table.tuples) {
      out += " (";
      for (std::size_t i = 0; i < t.size(); ++i) out += (i ? "," : "") + constant_text(t[i]);
      out += ")";
    }
    out += "\n";
  }
  out += "domain:";
  for (const auto& d : inst.dom) out += " " + constant_text(d);
  return out + "\n";
}

}  // namespace trc
