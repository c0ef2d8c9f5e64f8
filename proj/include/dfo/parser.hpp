#pragma once

#include <stdexcept>
#include <string>

#include "dfo/logic.hpp"
#include "dfo/structures.hpp"

namespace dfo {

/// 1-based position of a token inside the input text.
struct SourceSpan {
  int line = 1;
  int column = 1;
  int length = 1;
};

class ParseError : public std::runtime_error {
public:
  ParseError(SourceSpan span, std::string expected, std::string found)
      : std::runtime_error(std::to_string(span.line) + ":" +
                           std::to_string(span.column) + ": expected " +
                           expected + ", found " + found),
        span_(span),
        expected_(std::move(expected)),
        found_(std::move(found)) {}

  const SourceSpan& span() const { return span_; }
  const std::string& expected() const { return expected_; }
  const std::string& found() const { return found_; }

private:
  SourceSpan span_;
  std::string expected_;
  std::string found_;
};

/// Grammar (precedence ! > & > | ; quantifier scope extends maximally right):
///   formula := "exists" VAR "." formula | "forall" VAR "." formula | disj
///   disj    := conj ("|" conj)*
///   conj    := neg ("&" neg)*
///   neg     := "!" neg | atom
///   atom    := IDENT "(" VAR ")" | VAR "=" VAR | VAR "!=" VAR
///            | "rel" "(" INT "," INT "," VAR "," VAR ")"
///            | "loc" "[" INT "]" "(" VAR ")" "{" formula "}"
///            | "(" formula ")"
/// `x != y` desugars to `!(x = y)`.
FormulaPtr parse_formula(const std::string& text);

/// Structure text format, one structure per file:
///   dstruct D=<int>
///   predicates <name> <name> ...
///   elem <id> : <v1> ... <vD> [<pred>,<pred>]
/// `#` starts a comment line; the bracket part is optional.
DataStructure parse_structure(const std::string& text);

/// Canonical rendering; parse(serialize(f)) is structurally equal to f and
/// a second serialize is byte-identical.
std::string serialize_formula(const FormulaPtr& f);
std::string serialize_structure(const DataStructure& s);

/// Structure format preceded by a `# centers: a,b` comment line.
std::string serialize_with_centers(const DataStructure& s,
                                   const std::vector<std::string>& centers);
/// Reads the `# centers:` header (required) and the structure body.
std::pair<DataStructure, std::vector<std::string>> parse_with_centers(
    const std::string& text);

} // namespace dfo
