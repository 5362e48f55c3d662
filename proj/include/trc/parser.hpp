#pragma once

#include <string>
#include <string_view>

#include "trc/ast.hpp"

namespace trc {

/// Parses the textual TRC syntax and returns the normalized query.
///
///   query    := '{' IDENT '(' IDENT (',' IDENT)* ')' '|' formula '}' | formula
///   formula  := disj ('->' formula)?
///   disj     := conj ('or' conj)*
///   conj     := unary ('and' unary)*
///   unary    := 'not' '(' formula ')' | '(' formula ')' | quant | predicate
///   quant    := ('exists' | 'forall') binding (',' binding)* '[' formula? ']'
///   binding  := IDENT 'in' (IDENT | STRING)
///   predicate:= operand op operand      op in = != < <= > >= (also ≠ ≤ ≥)
///   operand  := IDENT '.' (IDENT | '$' DIGITS) | INT | STRING
///
/// A quoted relation name such as "<4" or "=" denotes a built-in relation.
/// `#` starts a comment that runs to the end of the line.
///
/// Throws SyntaxError, and RebindError / FreeBoundError / WellFormednessError
/// from normalization; all carry byte spans into `text`.
Query parse_query(std::string_view text);

/// Single-line rendering with minimal parentheses; parse_query(pretty(q))
/// reproduces normalize(q).
std::string pretty(const Query& q);
std::string pretty(const Formula& f);

}  // namespace trc
