#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>

namespace trc {

/// Byte offsets [start, end) into a source text.
struct SourceSpan {
  std::size_t start = 0;
  std::size_t end = 0;

  bool operator==(const SourceSpan&) const = default;
  std::string to_string() const;
};

/// Base of every error raised by the toolkit.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what, std::optional<SourceSpan> span = std::nullopt)
      : std::runtime_error(what), span_(span) {}

  const std::optional<SourceSpan>& span() const noexcept { return span_; }

 private:
  std::optional<SourceSpan> span_;
};

class SyntaxError : public Error {
 public:
  using Error::Error;
};

// A tuple variable is bound by more than one quantifier.
class RebindError : public Error {
 public:
  using Error::Error;
};

// A tuple variable occurs both free and bound.
class FreeBoundError : public Error {
 public:
  using Error::Error;
};

// Query-level formation rules: stray free variables, unused or empty headers.
class WellFormednessError : public Error {
 public:
  using Error::Error;
};

// An operation was applied to a query outside its required fragment.
class FragmentError : public Error {
 public:
  using Error::Error;
};

class EvalError : public Error {
 public:
  enum class Kind { UnknownRelation, UnknownAttribute, ArityMismatch, TypeError };

  EvalError(Kind kind, const std::string& what) : Error(what), kind_(kind) {}
  Kind kind() const noexcept { return kind_; }

 private:
  Kind kind_;
};

class InvalidDiagram : public Error {
 public:
  using Error::Error;
};

// Malformed diagram or database file. `line` is 1-based when known.
class FormatError : public Error {
 public:
  explicit FormatError(const std::string& what, std::size_t line = 0)
      : Error(line ? "line " + std::to_string(line) + ": " + what : what), line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

}  // namespace trc
