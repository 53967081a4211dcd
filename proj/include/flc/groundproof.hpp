#pragma once

// Ground refutation by brute force over congruence valuations.
//
// A valuation partitions the finite set of ground subterms into classes and
// gives each class an existence flag.  Any model of the instances induces
// one by restriction, so if no valuation satisfies them, no interpretation
// of any size does.

#include <cstddef>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "flc/ast.hpp"

namespace flc {

struct GroundProblem {
    Signature signature;
    std::vector<Formula> instances;  // variable-free, quantifier-free after expansion
};

struct CongruenceValuation {
    std::vector<int> class_of;         // per universe term
    std::vector<bool> class_exists;    // per class
    int classes() const { return static_cast<int>(class_exists.size()); }
};

/// Subterms of all instances, deduplicated, in first-occurrence order with
/// arguments before the term that contains them.
std::vector<Term> subterm_universe(const std::vector<Formula>& instances);

/// Visits every congruence-respecting partition crossed with every flag
/// assignment, partitions in restricted-growth order and flags counting up
/// with class 0 as the most significant bit.  Returning true stops.
void for_each_congruence_valuation(const std::vector<Term>& universe,
                                   const std::function<bool(const CongruenceValuation&)>& visit);
std::vector<CongruenceValuation> enumerate_congruence_valuations(const std::vector<Term>& universe);

bool respects_congruence(const std::vector<Term>& universe, const CongruenceValuation& v);

/// Truth of a ground formula whose terms all lie in the universe.
bool eval_ground(const std::vector<Term>& universe, const CongruenceValuation& v, const Formula& f);

struct GroundResult {
    bool unsat = false;
    std::vector<Term> universe;
    std::optional<CongruenceValuation> witness;  // first satisfying valuation
    std::size_t valuations = 0;                  // valuations examined
};

/// Throws std::invalid_argument when an instance has a variable or, after
/// expansion, a quantifier.
GroundResult ground_refute(const GroundProblem& p);

/// Substitutes ground terms for the free variables of an axiom.  Throws
/// std::invalid_argument if the result is not ground.
Formula instantiate(const Formula& axiom, const std::map<std::string, Term>& subst);

/// "{a} E | {dom(a), comp(a, dom(a))} ~E" style listing of a valuation.
std::string format_valuation(const std::vector<Term>& universe, const CongruenceValuation& v);

}  // namespace flc
