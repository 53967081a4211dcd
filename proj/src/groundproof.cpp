#include "flc/groundproof.hpp"

#include <algorithm>
#include <cstdint>
#include <sstream>
#include <stdexcept>

#include "flc/parser.hpp"

namespace flc {

namespace {

void collect(const Term& t, std::vector<Term>& out) {
    for (const auto& a : t.args) collect(a, out);
    if (std::find(out.begin(), out.end(), t) == out.end()) out.push_back(t);
}

void collect(const Formula& f, std::vector<Term>& out) {
    for (const auto& t : f.terms) collect(t, out);
    for (const auto& s : f.subs) collect(s, out);
}

bool has_quantifier(const Formula& f) {
    if (is_quantifier(f.kind)) return true;
    return std::any_of(f.subs.begin(), f.subs.end(), [](const Formula& s) { return has_quantifier(s); });
}

std::size_t index_in(const std::vector<Term>& universe, const Term& t) {
    auto it = std::find(universe.begin(), universe.end(), t);
    if (it == universe.end()) throw std::invalid_argument("term " + format_term(t) + " is outside the universe");
    return static_cast<std::size_t>(it - universe.begin());
}

// Argument positions of every universe term (empty for constants).
struct UniverseShape {
    std::vector<std::vector<std::size_t>> args;
    std::vector<const std::string*> head;
};

UniverseShape shape_of(const std::vector<Term>& universe) {
    UniverseShape s;
    for (const auto& t : universe) {
        std::vector<std::size_t> a;
        for (const auto& arg : t.args) a.push_back(index_in(universe, arg));
        s.args.push_back(std::move(a));
        s.head.push_back(&t.name);
    }
    return s;
}

bool congruent(const UniverseShape& shape, const std::vector<int>& cls) {
    const std::size_t n = cls.size();
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            if (cls[i] == cls[j]) continue;
            if (*shape.head[i] != *shape.head[j] || shape.args[i].size() != shape.args[j].size()) continue;
            if (shape.args[i].empty()) continue;  // distinct constants may differ
            bool same = true;
            for (std::size_t k = 0; k < shape.args[i].size() && same; ++k)
                same = cls[shape.args[i][k]] == cls[shape.args[j][k]];
            if (same) return false;
        }
    }
    return true;
}

}  // namespace

std::vector<Term> subterm_universe(const std::vector<Formula>& instances) {
    std::vector<Term> out;
    for (const auto& f : instances) collect(f, out);
    return out;
}

bool respects_congruence(const std::vector<Term>& universe, const CongruenceValuation& v) {
    if (v.class_of.size() != universe.size()) return false;
    return congruent(shape_of(universe), v.class_of);
}

void for_each_congruence_valuation(const std::vector<Term>& universe,
                                   const std::function<bool(const CongruenceValuation&)>& visit) {
    const auto shape = shape_of(universe);
    const std::size_t n = universe.size();
    if (n == 0) {
        CongruenceValuation v;
        visit(v);
        return;
    }
    std::vector<int> rgs(n, 0);
    bool stop = false;
    // Restricted growth strings: rgs[0] = 0, rgs[i] <= 1 + max(rgs[0..i-1]).
    std::function<void(std::size_t, int)> rec = [&](std::size_t i, int max_used) {
        if (stop) return;
        if (i == n) {
            if (!congruent(shape, rgs)) return;
            const int k = max_used + 1;
            CongruenceValuation v;
            v.class_of = rgs;
            v.class_exists.assign(static_cast<std::size_t>(k), false);
            for (std::uint64_t bits = 0; bits < (std::uint64_t{1} << k) && !stop; ++bits) {
                for (int c = 0; c < k; ++c) v.class_exists[static_cast<std::size_t>(c)] = (bits >> (k - 1 - c)) & 1;
                stop = visit(v);
            }
            return;
        }
        for (int c = 0; c <= max_used + 1 && !stop; ++c) {
            rgs[i] = c;
            rec(i + 1, std::max(max_used, c));
        }
    };
    rgs[0] = 0;
    rec(1, 0);
}

std::vector<CongruenceValuation> enumerate_congruence_valuations(const std::vector<Term>& universe) {
    std::vector<CongruenceValuation> out;
    for_each_congruence_valuation(universe, [&](const CongruenceValuation& v) {
        out.push_back(v);
        return false;
    });
    return out;
}

bool eval_ground(const std::vector<Term>& universe, const CongruenceValuation& v, const Formula& f) {
    switch (f.kind) {
        case FormulaKind::Exists:
            return v.class_exists[static_cast<std::size_t>(v.class_of[index_in(universe, f.terms.at(0))])];
        case FormulaKind::RawEq:
            return v.class_of[index_in(universe, f.terms.at(0))] == v.class_of[index_in(universe, f.terms.at(1))];
        case FormulaKind::Not:
            return !eval_ground(universe, v, f.subs.at(0));
        case FormulaKind::Implies:
            return !eval_ground(universe, v, f.subs.at(0)) || eval_ground(universe, v, f.subs.at(1));
        default:
            if (!is_core_kind(f.kind)) return eval_ground(universe, v, expand(f));
            throw std::invalid_argument("ground evaluation does not handle quantifiers");
    }
}

GroundResult ground_refute(const GroundProblem& p) {
    std::vector<Formula> core;
    for (const auto& f : p.instances) {
        check_well_formed(p.signature, f);
        if (!free_vars(f).empty()) throw std::invalid_argument("instance is not ground: " + format_formula(f));
        Formula e = expand(f);
        if (has_quantifier(e)) throw std::invalid_argument("instance is not quantifier-free: " + format_formula(f));
        core.push_back(std::move(e));
    }
    GroundResult r;
    r.universe = subterm_universe(core);
    for_each_congruence_valuation(r.universe, [&](const CongruenceValuation& v) {
        ++r.valuations;
        for (const auto& f : core)
            if (!eval_ground(r.universe, v, f)) return false;
        r.witness = v;
        return true;
    });
    r.unsat = !r.witness.has_value();
    return r;
}

Formula instantiate(const Formula& axiom, const std::map<std::string, Term>& subst) {
    for (const auto& [name, t] : subst)
        if (!term_vars(t).empty()) throw std::invalid_argument("substituted term for " + name + " is not ground");
    Formula out = substitute(axiom, subst);
    auto left = free_vars(out);
    if (!left.empty()) throw std::invalid_argument("instance leaves variable '" + *left.begin() + "' free");
    return out;
}

std::string format_valuation(const std::vector<Term>& universe, const CongruenceValuation& v) {
    std::ostringstream os;
    for (int c = 0; c < v.classes(); ++c) {
        if (c) os << " | ";
        os << '{';
        bool first = true;
        for (std::size_t i = 0; i < universe.size(); ++i) {
            if (v.class_of[i] != c) continue;
            if (!first) os << ", ";
            first = false;
            os << format_term(universe[i]);
        }
        os << '}' << (v.class_exists[static_cast<std::size_t>(c)] ? " E" : " ~E");
    }
    return os.str();
}

}  // namespace flc
