#include "trc/parser.hpp"

#include <algorithm>
#include <charconv>

#include "trc/normal_form.hpp"

namespace trc {
namespace {

enum class Tok {
  Ident,
  Attr,  // $1, $2
  Int,
  String,
  Exists,
  Forall,
  In,
  And,
  Or,
  Not,
  Arrow,
  Op,
  LBrace,
  RBrace,
  LParen,
  RParen,
  LBracket,
  RBracket,
  Bar,
  Comma,
  Dot,
  End,
};

struct Token {
  Tok kind;
  std::string text;  // identifier name, decoded string, or operator text
  SourceSpan span;
  CmpOp op = CmpOp::Eq;
  std::int64_t value = 0;
};

bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }

class Lexer {
 public:
  explicit Lexer(std::string_view src) : src_(src) {}

  std::vector<Token> run() {
    std::vector<Token> out;
    for (;;) {
      skip_space();
      if (pos_ >= src_.size()) {
        out.push_back({Tok::End, "", {pos_, pos_}});
        return out;
      }
      out.push_back(next());
    }
  }

 private:
  void skip_space() {
    while (pos_ < src_.size()) {
      const char c = src_[pos_];
      if (c == '#') {
        while (pos_ < src_.size() && src_[pos_] != '\n') ++pos_;
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        ++pos_;
      } else {
        return;
      }
    }
  }

  bool take(std::string_view s) {
    if (src_.substr(pos_).starts_with(s)) {
      pos_ += s.size();
      return true;
    }
    return false;
  }

  Token simple(Tok kind, std::size_t start) { return {kind, std::string(src_.substr(start, pos_ - start)), {start, pos_}}; }

  Token op(CmpOp o, std::size_t start) {
    Token t = simple(Tok::Op, start);
    t.op = o;
    return t;
  }

  Token next() {
    const std::size_t start = pos_;
    // Multi-byte spellings first.
    if (take("->") || take("→")) return simple(Tok::Arrow, start);
    if (take("<=") || take("≤")) return op(CmpOp::Le, start);
    if (take(">=") || take("≥")) return op(CmpOp::Ge, start);
    if (take("!=") || take("≠")) return op(CmpOp::Ne, start);
    if (take("<")) return op(CmpOp::Lt, start);
    if (take(">")) return op(CmpOp::Gt, start);
    if (take("=")) return op(CmpOp::Eq, start);
    if (take("∃")) return simple(Tok::Exists, start);
    if (take("∀")) return simple(Tok::Forall, start);
    if (take("∈")) return simple(Tok::In, start);
    if (take("∧")) return simple(Tok::And, start);
    if (take("∨")) return simple(Tok::Or, start);
    if (take("¬")) return simple(Tok::Not, start);

    const char c = src_[pos_];
    switch (c) {
      case '{': ++pos_; return simple(Tok::LBrace, start);
      case '}': ++pos_; return simple(Tok::RBrace, start);
      case '(': ++pos_; return simple(Tok::LParen, start);
      case ')': ++pos_; return simple(Tok::RParen, start);
      case '[': ++pos_; return simple(Tok::LBracket, start);
      case ']': ++pos_; return simple(Tok::RBracket, start);
      case '|': ++pos_; return simple(Tok::Bar, start);
      case ',': ++pos_; return simple(Tok::Comma, start);
      case '.': ++pos_; return simple(Tok::Dot, start);
      case '"': return string(start);
      default: break;
    }
    if (c == '$') {
      ++pos_;
      while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) ++pos_;
      if (pos_ == start + 1) throw SyntaxError("expected digits after '$'", SourceSpan{start, pos_});
      return simple(Tok::Attr, start);
    }
    if (std::isdigit(static_cast<unsigned char>(c)) ||
        (c == '-' && pos_ + 1 < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_ + 1])))) {
      return integer(start);
    }
    if (ident_start(c)) {
      while (pos_ < src_.size() && ident_char(src_[pos_])) ++pos_;
      Token t = simple(Tok::Ident, start);
      if (t.text == "exists") t.kind = Tok::Exists;
      else if (t.text == "forall") t.kind = Tok::Forall;
      else if (t.text == "in") t.kind = Tok::In;
      else if (t.text == "and") t.kind = Tok::And;
      else if (t.text == "or") t.kind = Tok::Or;
      else if (t.text == "not") t.kind = Tok::Not;
      return t;
    }
    // Step over a whole UTF-8 sequence so the span covers one character.
    std::size_t len = 1;
    const auto uc = static_cast<unsigned char>(c);
    if (uc >= 0xF0) len = 4;
    else if (uc >= 0xE0) len = 3;
    else if (uc >= 0xC0) len = 2;
    const std::size_t end = std::min(src_.size(), start + len);
    throw SyntaxError("unexpected character '" + std::string(src_.substr(start, end - start)) + "'",
                      SourceSpan{start, end});
  }

  Token integer(std::size_t start) {
    if (src_[pos_] == '-') ++pos_;
    while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) ++pos_;
    Token t = simple(Tok::Int, start);
    auto [ptr, ec] = std::from_chars(t.text.data(), t.text.data() + t.text.size(), t.value);
    if (ec != std::errc{}) throw SyntaxError("integer out of range", t.span);
    return t;
  }

  Token string(std::size_t start) {
    ++pos_;
    std::string value;
    while (pos_ < src_.size() && src_[pos_] != '"') {
      char ch = src_[pos_++];
      if (ch == '\\') {
        if (pos_ >= src_.size()) break;
        ch = src_[pos_++];
        if (ch != '"' && ch != '\\') {
          throw SyntaxError("unknown escape sequence", SourceSpan{pos_ - 2, pos_});
        }
      } else if (ch == '\n') {
        throw SyntaxError("unterminated string", SourceSpan{start, pos_ - 1});
      }
      value += ch;
    }
    if (pos_ >= src_.size()) throw SyntaxError("unterminated string", SourceSpan{start, pos_});
    ++pos_;
    Token t = simple(Tok::String, start);
    t.text = std::move(value);
    return t;
  }

  std::string_view src_;
  std::size_t pos_ = 0;
};

std::string describe(const Token& t) {
  if (t.kind == Tok::End) return "end of input";
  if (t.kind == Tok::String) return "string \"" + t.text + "\"";
  return "'" + t.text + "'";
}

class Parser {
 public:
  explicit Parser(std::vector<Token> toks) : toks_(std::move(toks)) {}

  Query query() {
    Query q;
    if (peek().kind == Tok::LBrace) {
      advance();
      OutputSpec spec;
      spec.var = expect(Tok::Ident, "output variable").text;
      expect(Tok::LParen, "'('");
      if (peek().kind == Tok::RParen) {
        throw SyntaxError("output header of '" + spec.var + "' is empty; use a Boolean query", peek().span);
      }
      header_attr(spec);
      while (peek().kind == Tok::Comma) {
        advance();
        header_attr(spec);
      }
      expect(Tok::RParen, "')'");
      expect(Tok::Bar, "'|'");
      q.output = std::move(spec);
      q.body = formula();
      expect(Tok::RBrace, "'}'");
    } else {
      q.body = formula();
    }
    expect(Tok::End, "end of input");
    return q;
  }

 private:
  const Token& peek() const { return toks_[pos_]; }
  const Token& advance() { return toks_[pos_++]; }
  std::size_t last_end() const { return pos_ == 0 ? 0 : toks_[pos_ - 1].span.end; }

  const Token& expect(Tok kind, const std::string& what) {
    if (peek().kind != kind) {
      throw SyntaxError("expected " + what + ", found " + describe(peek()), peek().span);
    }
    return advance();
  }

  void header_attr(OutputSpec& spec) {
    const auto span = peek().span;
    auto name = attr_name();
    if (std::find(spec.header.begin(), spec.header.end(), name) != spec.header.end()) {
      throw SyntaxError("duplicate header attribute '" + name + "'", span);
    }
    spec.header.push_back(std::move(name));
  }

  std::string attr_name() {
    if (peek().kind == Tok::Ident || peek().kind == Tok::Attr) return advance().text;
    throw SyntaxError("expected attribute name, found " + describe(peek()), peek().span);
  }

  FormulaPtr formula() {
    const std::size_t start = peek().span.start;
    auto lhs = disjunction();
    if (peek().kind != Tok::Arrow) return lhs;
    advance();
    auto rhs = formula();
    return make_implies(lhs, rhs, {start, last_end()});
  }

  FormulaPtr disjunction() {
    const std::size_t start = peek().span.start;
    auto lhs = conjunction();
    while (peek().kind == Tok::Or) {
      advance();
      auto rhs = conjunction();
      lhs = make_or({lhs, rhs}, {start, last_end()});
    }
    return lhs;
  }

  FormulaPtr conjunction() {
    const std::size_t start = peek().span.start;
    auto lhs = unary();
    while (peek().kind == Tok::And) {
      advance();
      auto rhs = unary();
      lhs = make_and({lhs, rhs}, {start, last_end()});
    }
    return lhs;
  }

  FormulaPtr unary() {
    const std::size_t start = peek().span.start;
    switch (peek().kind) {
      case Tok::Not: {
        advance();
        expect(Tok::LParen, "'(' after 'not'");
        auto body = formula();
        expect(Tok::RParen, "')'");
        return make_not(body, {start, last_end()});
      }
      case Tok::LParen: {
        advance();
        auto inner = formula();
        expect(Tok::RParen, "')'");
        return inner;
      }
      case Tok::Exists:
      case Tok::Forall: return quantifier();
      default: return predicate();
    }
  }

  FormulaPtr quantifier() {
    const std::size_t start = peek().span.start;
    const bool exists = advance().kind == Tok::Exists;
    std::vector<Binding> bindings{binding()};
    while (peek().kind == Tok::Comma) {
      advance();
      bindings.push_back(binding());
    }
    expect(Tok::LBracket, "'['");
    FormulaPtr body;
    if (peek().kind == Tok::RBracket) {
      if (!exists) throw SyntaxError("universal quantifier needs a body", peek().span);
      body = make_and({}, peek().span);
    } else {
      body = formula();
    }
    expect(Tok::RBracket, "']'");
    const SourceSpan span{start, last_end()};
    return exists ? make_exists(std::move(bindings), body, span) : make_forall(std::move(bindings), body, span);
  }

  Binding binding() {
    Binding b;
    b.var = expect(Tok::Ident, "tuple variable").text;
    expect(Tok::In, "'in'");
    if (peek().kind == Tok::Ident) {
      b.relation = advance().text;
    } else if (peek().kind == Tok::String) {
      const Token& t = advance();
      auto builtin = parse_builtin_name(t.text);
      if (!builtin) throw SyntaxError("not a built-in relation name: \"" + t.text + "\"", t.span);
      b.relation = *builtin;
    } else {
      throw SyntaxError("expected relation name, found " + describe(peek()), peek().span);
    }
    return b;
  }

  struct Operand {
    std::optional<AttrRef> ref;
    std::optional<Constant> value;
    SourceSpan span;
  };

  Operand operand() {
    const Token& t = peek();
    if (t.kind == Tok::Int) {
      advance();
      return {std::nullopt, Constant{t.value}, t.span};
    }
    if (t.kind == Tok::String) {
      advance();
      return {std::nullopt, Constant{t.text}, t.span};
    }
    if (t.kind == Tok::Ident) {
      advance();
      expect(Tok::Dot, "'.' after tuple variable '" + t.text + "'");
      AttrRef ref{t.text, attr_name()};
      return {std::move(ref), std::nullopt, {t.span.start, last_end()}};
    }
    throw SyntaxError("expected a formula, found " + describe(t), t.span);
  }

  FormulaPtr predicate() {
    const std::size_t start = peek().span.start;
    Operand lhs = operand();
    const CmpOp op = expect(Tok::Op, "comparison operator").op;
    Operand rhs = operand();
    const SourceSpan span{start, last_end()};
    if (lhs.ref && rhs.ref) return make_join(*lhs.ref, op, *rhs.ref, span);
    if (lhs.ref) return make_sel(*lhs.ref, op, *rhs.value, span);
    if (rhs.ref) return make_sel(*rhs.ref, mirror(op), *lhs.value, span);
    throw SyntaxError("comparison between two constants", span);
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
};

int precedence(const Formula& f) {
  if (f.is<Implies>()) return 1;
  if (f.is<Or>()) return 2;
  if (f.is<And>()) return 3;
  return 4;
}

std::string ref_text(const AttrRef& r) { return r.var + "." + r.attr; }

void print(const Formula& f, std::string& out);

void print_child(const Formula& child, bool paren, std::string& out) {
  if (paren) out += '(';
  print(child, out);
  if (paren) out += ')';
}

void print_quantifier(const char* kw, const std::vector<Binding>& bs, const Formula& body, std::string& out) {
  out += kw;
  for (std::size_t i = 0; i < bs.size(); ++i) {
    out += i ? ", " : " ";
    out += bs[i].var + " in ";
    if (const auto* b = std::get_if<BuiltinRelation>(&bs[i].relation)) {
      out += constant_text(Constant{b->name()});
    } else {
      out += std::get<std::string>(bs[i].relation);
    }
  }
  out += " [";
  if (const auto* a = body.get_if<And>(); !a || !a->children.empty()) print(body, out);
  out += ']';
}

void print(const Formula& f, std::string& out) {
  std::visit(overloaded{
                 [&](const JoinPred& p) {
                   out += ref_text(p.left) + " " + std::string(op_text(p.op)) + " " + ref_text(p.right);
                 },
                 [&](const SelPred& p) {
                   out += ref_text(p.left) + " " + std::string(op_text(p.op)) + " " + constant_text(p.value);
                 },
                 [&](const Not& n) {
                   out += "not(";
                   print(*n.body, out);
                   out += ')';
                 },
                 [&](const And& n) {
                   for (std::size_t i = 0; i < n.children.size(); ++i) {
                     if (i) out += " and ";
                     print_child(*n.children[i], precedence(*n.children[i]) < 3, out);
                   }
                 },
                 [&](const Or& n) {
                   for (std::size_t i = 0; i < n.children.size(); ++i) {
                     if (i) out += " or ";
                     print_child(*n.children[i], precedence(*n.children[i]) < 2, out);
                   }
                 },
                 [&](const Implies& n) {
                   print_child(*n.premise, precedence(*n.premise) <= 1, out);
                   out += " -> ";
                   print_child(*n.conclusion, false, out);
                 },
                 [&](const Exists& n) { print_quantifier("exists", n.bindings, *n.body, out); },
                 [&](const Forall& n) { print_quantifier("forall", n.bindings, *n.body, out); },
             },
             f.node());
}

}  // namespace

Query parse_query(std::string_view text) {
  Parser parser(Lexer(text).run());
  return normalize(parser.query());
}

std::string pretty(const Formula& f) {
  std::string out;
  print(f, out);
  return out;
}

std::string pretty(const Query& q) {
  if (!q.output) return pretty(*q.body);
  std::string out = "{ " + q.output->var + "(";
  for (std::size_t i = 0; i < q.output->header.size(); ++i) {
    if (i) out += ", ";
    out += q.output->header[i];
  }
  out += ") | " + pretty(*q.body) + " }";
  return out;
}

}  // namespace trc
