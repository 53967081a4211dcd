#include "flc/ast.hpp"

#include <algorithm>
#include <utility>

namespace flc {

Term Term::var(std::string name) {
    Term t;
    t.kind = Kind::Var;
    t.name = std::move(name);
    return t;
}

Term Term::app(std::string fn, std::vector<Term> args) {
    Term t;
    t.kind = Kind::App;
    t.name = std::move(fn);
    t.args = std::move(args);
    return t;
}

Term dom(Term t) { return Term::app(kDom, {std::move(t)}); }
Term cod(Term t) { return Term::app(kCod, {std::move(t)}); }
Term comp(Term lhs, Term rhs) { return Term::app(kComp, {std::move(lhs), std::move(rhs)}); }

bool is_core_kind(FormulaKind k) {
    switch (k) {
    case FormulaKind::Exists:
    case FormulaKind::RawEq:
    case FormulaKind::Not:
    case FormulaKind::Implies:
    case FormulaKind::ForallE:
    case FormulaKind::ForallAll:
        return true;
    default:
        return false;
    }
}

bool is_quantifier(FormulaKind k) {
    return k == FormulaKind::ForallE || k == FormulaKind::ForallAll || k == FormulaKind::ExistsE ||
           k == FormulaKind::ExistsAll;
}

bool is_binary(FormulaKind k) {
    return k == FormulaKind::Implies || k == FormulaKind::Or || k == FormulaKind::And ||
           k == FormulaKind::Iff || k == FormulaKind::Implied;
}

namespace {

Formula atom(FormulaKind k, std::vector<Term> terms) {
    Formula f;
    f.kind = k;
    f.terms = std::move(terms);
    return f;
}

}  // namespace

Formula exists_atom(Term t) { return atom(FormulaKind::Exists, {std::move(t)}); }
Formula raw_eq(Term l, Term r) { return atom(FormulaKind::RawEq, {std::move(l), std::move(r)}); }
Formula kleene_eq(Term l, Term r) { return atom(FormulaKind::KleeneEq, {std::move(l), std::move(r)}); }
Formula ex_eq(Term l, Term r) { return atom(FormulaKind::ExEq, {std::move(l), std::move(r)}); }
Formula identity(Term t) { return atom(FormulaKind::Identity, {std::move(t)}); }

Formula neg(Formula f) {
    Formula r;
    r.kind = FormulaKind::Not;
    r.subs.push_back(std::move(f));
    return r;
}

Formula binary(FormulaKind k, Formula a, Formula b) {
    Formula r;
    r.kind = k;
    r.subs.reserve(2);
    r.subs.push_back(std::move(a));
    r.subs.push_back(std::move(b));
    return r;
}

Formula quantifier(FormulaKind k, std::string v, Formula body) {
    Formula r;
    r.kind = k;
    r.var = std::move(v);
    r.subs.push_back(std::move(body));
    return r;
}

Formula implies(Formula a, Formula b) { return binary(FormulaKind::Implies, std::move(a), std::move(b)); }
Formula implied(Formula a, Formula b) { return binary(FormulaKind::Implied, std::move(a), std::move(b)); }
Formula disj(Formula a, Formula b) { return binary(FormulaKind::Or, std::move(a), std::move(b)); }
Formula conj(Formula a, Formula b) { return binary(FormulaKind::And, std::move(a), std::move(b)); }
Formula iff(Formula a, Formula b) { return binary(FormulaKind::Iff, std::move(a), std::move(b)); }
Formula forall_e(std::string v, Formula b) { return quantifier(FormulaKind::ForallE, std::move(v), std::move(b)); }
Formula exists_e(std::string v, Formula b) { return quantifier(FormulaKind::ExistsE, std::move(v), std::move(b)); }
Formula forall_all(std::string v, Formula b) { return quantifier(FormulaKind::ForallAll, std::move(v), std::move(b)); }
Formula exists_all(std::string v, Formula b) { return quantifier(FormulaKind::ExistsAll, std::move(v), std::move(b)); }

// ---------------------------------------------------------------------------
// Signature / Theory

Signature::Signature() : symbols_{{kDom, 1}, {kCod, 1}, {kComp, 2}} {}

void Signature::declare(const std::string& name, int arity) {
    if (arity < 0) throw WellFormednessError("negative arity for '" + name + "'");
    if (auto existing = this->arity(name)) {
        if (*existing != arity)
            throw WellFormednessError("symbol '" + name + "' redeclared with arity " + std::to_string(arity) +
                                      " (was " + std::to_string(*existing) + ")");
        return;
    }
    symbols_.push_back({name, arity});
}

std::optional<int> Signature::arity(std::string_view name) const {
    for (const auto& s : symbols_)
        if (s.name == name) return s.arity;
    return std::nullopt;
}

bool Signature::is_constant(std::string_view name) const {
    auto a = arity(name);
    return a && *a == 0;
}

std::vector<FunctionSymbol> Signature::user_symbols() const {
    return {symbols_.begin() + 3, symbols_.end()};
}

std::optional<std::size_t> Signature::index_of(std::string_view name) const {
    for (std::size_t i = 0; i < symbols_.size(); ++i)
        if (symbols_[i].name == name) return i;
    return std::nullopt;
}

const Axiom* Theory::find(std::string_view label) const {
    for (const auto& a : axioms)
        if (a.label == label) return &a;
    return nullptr;
}

void Theory::add_axiom(std::string label, Formula f) {
    if (find(label)) throw WellFormednessError("duplicate axiom label '" + label + "'");
    check_well_formed(signature, f);
    axioms.push_back({std::move(label), std::move(f)});
}

Theory Theory::without(const std::vector<std::string>& labels) const {
    for (const auto& l : labels)
        if (!find(l)) throw WellFormednessError("theory '" + name + "' has no axiom '" + l + "'");
    Theory t{name, signature, {}};
    for (const auto& a : axioms)
        if (std::find(labels.begin(), labels.end(), a.label) == labels.end()) t.axioms.push_back(a);
    return t;
}

void check_well_formed(const Signature& sig, const Term& t) {
    if (t.is_var()) {
        if (t.name.empty()) throw WellFormednessError("empty variable name");
        if (!t.args.empty()) throw WellFormednessError("variable '" + t.name + "' with arguments");
        return;
    }
    auto a = sig.arity(t.name);
    if (!a) throw WellFormednessError("unknown function symbol '" + t.name + "'");
    if (static_cast<std::size_t>(*a) != t.args.size())
        throw WellFormednessError("'" + t.name + "' expects " + std::to_string(*a) + " argument(s), got " +
                                  std::to_string(t.args.size()));
    for (const auto& s : t.args) check_well_formed(sig, s);
}

void check_well_formed(const Signature& sig, const Formula& f) {
    std::size_t want_terms = 0;
    std::size_t want_subs = 0;
    switch (f.kind) {
    case FormulaKind::Exists:
    case FormulaKind::Identity:
        want_terms = 1;
        break;
    case FormulaKind::RawEq:
    case FormulaKind::KleeneEq:
    case FormulaKind::ExEq:
        want_terms = 2;
        break;
    case FormulaKind::Not:
        want_subs = 1;
        break;
    case FormulaKind::Implies:
    case FormulaKind::Or:
    case FormulaKind::And:
    case FormulaKind::Iff:
    case FormulaKind::Implied:
        want_subs = 2;
        break;
    case FormulaKind::ForallE:
    case FormulaKind::ForallAll:
    case FormulaKind::ExistsE:
    case FormulaKind::ExistsAll:
        want_subs = 1;
        if (f.var.empty()) throw WellFormednessError("quantifier without a variable");
        break;
    }
    if (f.terms.size() != want_terms || f.subs.size() != want_subs)
        throw WellFormednessError("malformed formula node");
    for (const auto& t : f.terms) check_well_formed(sig, t);
    for (const auto& s : f.subs) check_well_formed(sig, s);
}

void check_well_formed(const Theory& t) {
    std::set<std::string> labels;
    for (const auto& a : t.axioms) {
        if (!labels.insert(a.label).second) throw WellFormednessError("duplicate axiom label '" + a.label + "'");
        check_well_formed(t.signature, a.formula);
    }
}

// ---------------------------------------------------------------------------
// Variables

namespace {

void collect_term_vars(const Term& t, std::set<std::string>& out) {
    if (t.is_var()) {
        out.insert(t.name);
        return;
    }
    for (const auto& a : t.args) collect_term_vars(a, out);
}

void collect_free(const Formula& f, std::set<std::string>& bound, std::set<std::string>& out) {
    for (const auto& t : f.terms) {
        std::set<std::string> vs;
        collect_term_vars(t, vs);
        for (const auto& v : vs)
            if (!bound.count(v)) out.insert(v);
    }
    if (is_quantifier(f.kind)) {
        bool fresh = bound.insert(f.var).second;
        collect_free(f.subs[0], bound, out);
        if (fresh) bound.erase(f.var);
        return;
    }
    for (const auto& s : f.subs) collect_free(s, bound, out);
}

void collect_all(const Formula& f, std::set<std::string>& out) {
    for (const auto& t : f.terms) collect_term_vars(t, out);
    if (is_quantifier(f.kind)) out.insert(f.var);
    for (const auto& s : f.subs) collect_all(s, out);
}

std::string fresh_name(const std::set<std::string>& avoid, const std::string& base) {
    if (!avoid.count(base)) return base;
    for (int i = 1;; ++i) {
        std::string c = base + std::to_string(i);
        if (!avoid.count(c)) return c;
    }
}

}  // namespace

std::set<std::string> term_vars(const Term& t) {
    std::set<std::string> out;
    collect_term_vars(t, out);
    return out;
}

std::set<std::string> free_vars(const Formula& f) {
    std::set<std::string> bound, out;
    collect_free(f, bound, out);
    return out;
}

std::set<std::string> all_vars(const Formula& f) {
    std::set<std::string> out;
    collect_all(f, out);
    return out;
}

Formula universal_closure(const Formula& f) {
    auto fv = free_vars(f);
    Formula r = f;
    for (auto it = fv.rbegin(); it != fv.rend(); ++it) r = forall_all(*it, std::move(r));
    return r;
}

// ---------------------------------------------------------------------------
// Expansion

Formula expand(const Formula& f) {
    switch (f.kind) {
    case FormulaKind::Exists:
    case FormulaKind::RawEq:
        return f;
    case FormulaKind::Not:
        return neg(expand(f.subs[0]));
    case FormulaKind::Implies:
        return implies(expand(f.subs[0]), expand(f.subs[1]));
    case FormulaKind::ForallE:
    case FormulaKind::ForallAll:
        return quantifier(f.kind, f.var, expand(f.subs[0]));
    case FormulaKind::Or:
        // a | b  :=  ~a -> b
        return implies(neg(expand(f.subs[0])), expand(f.subs[1]));
    case FormulaKind::And:
        // a & b  :=  ~(~a | ~b)
        return expand(neg(disj(neg(f.subs[0]), neg(f.subs[1]))));
    case FormulaKind::Implied:
        return implies(expand(f.subs[1]), expand(f.subs[0]));
    case FormulaKind::Iff:
        return expand(conj(implies(f.subs[0], f.subs[1]), implies(f.subs[1], f.subs[0])));
    case FormulaKind::ExistsE:
        return neg(forall_e(f.var, neg(expand(f.subs[0]))));
    case FormulaKind::ExistsAll:
        return neg(forall_all(f.var, neg(expand(f.subs[0]))));
    case FormulaKind::KleeneEq: {
        const Term& s = f.terms[0];
        const Term& t = f.terms[1];
        return expand(implies(disj(exists_atom(s), exists_atom(t)), raw_eq(s, t)));
    }
    case FormulaKind::ExEq: {
        const Term& s = f.terms[0];
        const Term& t = f.terms[1];
        return expand(conj(exists_atom(s), conj(exists_atom(t), raw_eq(s, t))));
    }
    case FormulaKind::Identity: {
        const Term& i = f.terms[0];
        std::string x = fresh_name(term_vars(i), "x");
        Term vx = Term::var(x);
        Formula left = forall_e(x, implies(exists_atom(comp(i, vx)), kleene_eq(comp(i, vx), vx)));
        Formula right = forall_e(x, implies(exists_atom(comp(vx, i)), kleene_eq(comp(vx, i), vx)));
        return expand(conj(std::move(left), std::move(right)));
    }
    }
    return f;
}

bool is_core(const Formula& f) {
    if (!is_core_kind(f.kind)) return false;
    return std::all_of(f.subs.begin(), f.subs.end(), [](const Formula& s) { return is_core(s); });
}

// ---------------------------------------------------------------------------
// Substitution and renaming

Term substitute(const Term& t, const std::map<std::string, Term>& s) {
    if (t.is_var()) {
        auto it = s.find(t.name);
        return it == s.end() ? t : it->second;
    }
    Term r = t;
    for (auto& a : r.args) a = substitute(a, s);
    return r;
}

Formula substitute(const Formula& f, const std::map<std::string, Term>& s) {
    if (s.empty()) return f;
    Formula r = f;
    for (auto& t : r.terms) t = substitute(t, s);
    if (!is_quantifier(f.kind)) {
        for (auto& sub : r.subs) sub = substitute(sub, s);
        return r;
    }
    std::map<std::string, Term> inner = s;
    inner.erase(f.var);
    if (inner.empty()) return r;
    auto body_free = free_vars(f.subs[0]);
    bool captures = false;
    std::set<std::string> avoid = all_vars(f.subs[0]);
    for (const auto& [v, term] : inner) {
        auto tv = term_vars(term);
        avoid.insert(tv.begin(), tv.end());
        if (body_free.count(v) && tv.count(f.var)) captures = true;
    }
    Formula body = f.subs[0];
    if (captures) {
        std::string fresh = fresh_name(avoid, f.var);
        body = substitute(body, {{f.var, Term::var(fresh)}});
        r.var = fresh;
    }
    r.subs[0] = substitute(body, inner);
    return r;
}

namespace {

Term rename_term(const Term& t, const std::map<std::string, std::string>& r) {
    if (t.is_var()) {
        auto it = r.find(t.name);
        return it == r.end() ? t : Term::var(it->second);
    }
    Term o = t;
    for (auto& a : o.args) a = rename_term(a, r);
    return o;
}

void first_occurrence(const Term& t, std::vector<std::string>& order) {
    if (t.is_var()) {
        if (std::find(order.begin(), order.end(), t.name) == order.end()) order.push_back(t.name);
        return;
    }
    for (const auto& a : t.args) first_occurrence(a, order);
}

void first_occurrence(const Formula& f, std::vector<std::string>& order) {
    if (is_quantifier(f.kind) && std::find(order.begin(), order.end(), f.var) == order.end())
        order.push_back(f.var);
    for (const auto& t : f.terms) first_occurrence(t, order);
    for (const auto& s : f.subs) first_occurrence(s, order);
}

}  // namespace

Formula rename_all_vars(const Formula& f, const std::map<std::string, std::string>& r) {
    Formula o = f;
    for (auto& t : o.terms) t = rename_term(t, r);
    if (is_quantifier(f.kind)) {
        auto it = r.find(f.var);
        if (it != r.end()) o.var = it->second;
    }
    for (auto& s : o.subs) s = rename_all_vars(s, r);
    return o;
}

Formula canonical_var_names(const Formula& f) {
    std::vector<std::string> order;
    first_occurrence(f, order);
    std::map<std::string, std::string> r;
    for (std::size_t i = 0; i < order.size(); ++i) r[order[i]] = "v" + std::to_string(i);
    return rename_all_vars(f, r);
}

std::size_t formula_size(const Formula& f) {
    std::size_t n = 1;
    for (const auto& s : f.subs) n += formula_size(s);
    return n;
}

}  // namespace flc
