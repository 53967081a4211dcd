#pragma once

// Abstract syntax of free-logic terms, formulas, signatures and theories.
//
// Terms and formulas are plain value types.  A formula may use the full
// surface language (derived connectives, Kleene and existing identity, the
// identity-morphism predicate, existential quantifiers); expand() lowers it
// to the minimal core {E, =, ~, ->, guarded forall, raw forall}.

#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace flc {

/// Raised when a term or formula does not fit a signature.
class WellFormednessError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct Term {
    enum class Kind : unsigned char { Var, App };

    Kind kind = Kind::Var;
    std::string name;
    std::vector<Term> args;

    static Term var(std::string name);
    static Term app(std::string fn, std::vector<Term> args = {});

    bool is_var() const { return kind == Kind::Var; }
    bool is_app() const { return kind == Kind::App; }

    friend bool operator==(const Term&, const Term&) = default;
};

inline const std::string kDom = "dom";
inline const std::string kCod = "cod";
inline const std::string kComp = "comp";

Term dom(Term t);
Term cod(Term t);
Term comp(Term lhs, Term rhs);

enum class FormulaKind : unsigned char {
    // core
    Exists,     // E(t)
    RawEq,      // t = s
    Not,
    Implies,
    ForallE,    // guarded: ranges over existing elements
    ForallAll,  // raw: ranges over the whole domain
    // sugar
    Or,
    And,
    Iff,
    Implied,    // a <- b
    KleeneEq,   // t == s
    ExEq,       // t === s
    Identity,   // I(t)
    ExistsE,
    ExistsAll,
};

bool is_core_kind(FormulaKind k);
bool is_quantifier(FormulaKind k);
bool is_binary(FormulaKind k);

struct Formula {
    FormulaKind kind = FormulaKind::Exists;
    std::vector<Term> terms;     // operands of atoms
    std::vector<Formula> subs;   // operands of connectives, body of binders
    std::string var;             // bound variable of a quantifier

    friend bool operator==(const Formula&, const Formula&) = default;
};

// Builders.
Formula exists_atom(Term t);
Formula raw_eq(Term lhs, Term rhs);
Formula kleene_eq(Term lhs, Term rhs);
Formula ex_eq(Term lhs, Term rhs);
Formula identity(Term t);
Formula neg(Formula f);
Formula implies(Formula a, Formula b);
Formula implied(Formula a, Formula b);
Formula disj(Formula a, Formula b);
Formula conj(Formula a, Formula b);
Formula iff(Formula a, Formula b);
Formula forall_e(std::string v, Formula body);
Formula exists_e(std::string v, Formula body);
Formula forall_all(std::string v, Formula body);
Formula exists_all(std::string v, Formula body);
Formula binary(FormulaKind k, Formula a, Formula b);
Formula quantifier(FormulaKind k, std::string v, Formula body);

struct FunctionSymbol {
    std::string name;
    int arity = 0;

    friend bool operator==(const FunctionSymbol&, const FunctionSymbol&) = default;
};

/// Function symbols of a theory.  dom/1, cod/1 and comp/2 always come first,
/// in that order; user symbols follow in declaration order.
class Signature {
public:
    Signature();

    /// Adds a symbol.  Redeclaring an existing name with the same arity is a
    /// no-op; with a different arity it throws WellFormednessError.
    void declare(const std::string& name, int arity);

    std::optional<int> arity(std::string_view name) const;
    bool contains(std::string_view name) const { return arity(name).has_value(); }
    bool is_constant(std::string_view name) const;

    const std::vector<FunctionSymbol>& symbols() const { return symbols_; }
    /// Symbols beyond the three built-ins.
    std::vector<FunctionSymbol> user_symbols() const;
    std::optional<std::size_t> index_of(std::string_view name) const;

    friend bool operator==(const Signature&, const Signature&) = default;

private:
    std::vector<FunctionSymbol> symbols_;
};

struct Axiom {
    std::string label;
    Formula formula;

    friend bool operator==(const Axiom&, const Axiom&) = default;
};

/// A named axiom list.  Free variables of an axiom are read as raw-universally
/// closed (see universal_closure).
struct Theory {
    std::string name;
    Signature signature;
    std::vector<Axiom> axioms;

    const Axiom* find(std::string_view label) const;
    /// Appends an axiom after checking label uniqueness and well-formedness.
    void add_axiom(std::string label, Formula f);
    /// Copy without the given labels; throws if a label is missing.
    Theory without(const std::vector<std::string>& labels) const;

    friend bool operator==(const Theory&, const Theory&) = default;
};

void check_well_formed(const Signature& sig, const Term& t);
void check_well_formed(const Signature& sig, const Formula& f);
void check_well_formed(const Theory& t);

/// Full definitional expansion to the core connectives.
Formula expand(const Formula& f);
bool is_core(const Formula& f);

std::set<std::string> free_vars(const Formula& f);
std::set<std::string> term_vars(const Term& t);
/// Every variable name occurring anywhere, bound or free.
std::set<std::string> all_vars(const Formula& f);

/// Wraps raw universal quantifiers over the free variables, lexicographic
/// order outermost-first.  Closed formulas come back unchanged.
Formula universal_closure(const Formula& f);

/// Capture-avoiding substitution for free variables.
Term substitute(const Term& t, const std::map<std::string, Term>& s);
Formula substitute(const Formula& f, const std::map<std::string, Term>& s);

/// Applies a bijective renaming to every variable occurrence and binder.
Formula rename_all_vars(const Formula& f, const std::map<std::string, std::string>& r);

/// Renames variables to v0, v1, ... in order of first occurrence; used to
/// compare formulas modulo variable names.
Formula canonical_var_names(const Formula& f);

/// Number of nodes, for tests and generators.
std::size_t formula_size(const Formula& f);

}  // namespace flc
