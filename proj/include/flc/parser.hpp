#pragma once

// Reader and printer for the `.fth` theory language.
//
//   # comment
//   theory V
//   sig C/1 D/1
//   axiom S1: E(dom(x)) -> E(x)
//
// Connectives by increasing binding strength: `<->`, then `->` / `<-`, `|`,
// `&`, prefix `~`.  All binary connectives associate to the right.
// Quantifiers `all x.` / `ex x.` (over existing elements) and `rall x.` /
// `rex x.` (over the raw domain) extend as far right as possible.  Atoms are
// `E(t)`, `I(t)`, `t = s` (raw identity), `t == s` (Kleene equality) and
// `t === s` (existing identity).  Composition is `t * s` (right associative)
// or `comp(t, s)`.

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>

#include "flc/ast.hpp"

namespace flc {

struct SourceSpan {
    std::size_t line = 1;    // 1-based
    std::size_t column = 1;  // 1-based, in bytes
    std::size_t begin = 0;   // byte offsets into the input, begin <= end
    std::size_t end = 0;
};

class ParseError : public std::runtime_error {
public:
    ParseError(SourceSpan span, std::string message, std::string expected = {});

    const SourceSpan& span() const { return span_; }
    const std::string& message() const { return message_; }
    /// Token hint, possibly empty.
    const std::string& expected() const { return expected_; }

private:
    SourceSpan span_;
    std::string message_;
    std::string expected_;
};

Theory parse_theory(std::string_view text);

/// Parses a single formula against a signature (inline goals, side
/// constraints, CLI arguments).
Formula parse_formula(std::string_view text, const Signature& sig);
Term parse_term(std::string_view text, const Signature& sig);

std::string pretty_print(const Theory& t);
std::string format_formula(const Formula& f);
std::string format_term(const Term& t);

}  // namespace flc
