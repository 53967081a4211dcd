#pragma once

// Finite interpretations of free logic.
//
// A model has a raw domain {0, ..., n-1}, an existence subset, and a total
// table for every function symbol.  Partiality lives entirely in the
// existence flags: an "undefined" composition is simply a value outside the
// existence subset.

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "flc/ast.hpp"

namespace flc {

using Element = int;
using Valuation = std::map<std::string, Element>;

enum class Truth : std::uint8_t { False, True, Unknown };

const char* to_string(Truth t);

/// Row-major index of an argument tuple in a table over a domain of size n.
std::size_t table_index(std::span<const Element> args, int n);
std::size_t table_cells(int arity, int n);

class Interpretation {
public:
    /// All existence flags false, all table entries 0.
    Interpretation(Signature sig, int size);

    int size() const { return size_; }
    const Signature& signature() const { return sig_; }

    bool exists(Element e) const { return exists_.at(static_cast<std::size_t>(e)) != 0; }
    void set_exists(Element e, bool v) { exists_.at(static_cast<std::size_t>(e)) = v ? 1 : 0; }
    std::vector<Element> existing() const;

    Element apply(std::size_t symbol, std::span<const Element> args) const;
    Element apply(std::string_view name, std::initializer_list<Element> args) const;
    void set(std::size_t symbol, std::span<const Element> args, Element value);
    void set(std::string_view name, std::initializer_list<Element> args, Element value);

    const std::vector<Element>& table(std::size_t symbol) const { return tables_.at(symbol); }
    std::vector<Element>& table(std::size_t symbol) { return tables_.at(symbol); }

    friend bool operator==(const Interpretation&, const Interpretation&) = default;

private:
    Signature sig_;
    int size_;
    std::vector<std::uint8_t> exists_;
    std::vector<std::vector<Element>> tables_;
};

/// Search state: an interpretation whose flags and cells may be unassigned.
class PartialInterpretation {
public:
    static constexpr Element kUnassigned = -1;

    PartialInterpretation(Signature sig, int size);
    explicit PartialInterpretation(const Interpretation& full);

    int size() const { return size_; }
    const Signature& signature() const { return sig_; }

    std::optional<bool> exists(Element e) const;
    void set_exists(Element e, std::optional<bool> v);

    std::optional<Element> apply(std::size_t symbol, std::span<const Element> args) const;
    void set(std::size_t symbol, std::span<const Element> args, std::optional<Element> value);

    const std::vector<Element>& table(std::size_t symbol) const { return tables_.at(symbol); }
    std::vector<Element>& table(std::size_t symbol) { return tables_.at(symbol); }
    const std::vector<std::int8_t>& flags() const { return flags_; }

    bool complete() const;
    /// Requires complete().
    Interpretation to_interpretation() const;

private:
    Signature sig_;
    int size_;
    std::vector<std::int8_t> flags_;  // -1 unassigned, 0 false, 1 true
    std::vector<std::vector<Element>> tables_;
};

/// Throws std::logic_error on an unbound variable.
Element eval_term(const Interpretation& m, const Valuation& v, const Term& t);

/// Two-valued evaluation of a core formula.  Guarded quantifiers range over
/// the existing elements only; a guarded quantifier over an empty existence
/// set is vacuously true.
bool eval_formula(const Interpretation& m, const Valuation& v, const Formula& f);

/// Strong-Kleene evaluation over a partial interpretation.  A definite answer
/// holds in every completion; Unknown makes no claim.
Truth eval_partial(const PartialInterpretation& p, const Valuation& v, const Formula& f);

/// Truth of an arbitrary formula under its raw universal closure.
bool holds(const Interpretation& m, const Formula& f);

/// Every axiom, expanded and universally closed, is true in m.
bool satisfies(const Interpretation& m, const Theory& t);

/// Text form used in reports:
///   size=2 E={1}
///   dom: 0->0 1->1
///   comp: (0,0)->0 (0,1)->0 ...
std::string format_model(const Interpretation& m);
/// Inverse of format_model; throws std::invalid_argument on malformed text.
Interpretation parse_model(std::string_view text, const Signature& sig);

}  // namespace flc
