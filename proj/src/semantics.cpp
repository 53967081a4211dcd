#include "flc/semantics.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>
#include <stdexcept>

namespace flc {

const char* to_string(Truth t) {
    switch (t) {
    case Truth::False: return "false";
    case Truth::True: return "true";
    case Truth::Unknown: return "unknown";
    }
    return "?";
}

std::size_t table_index(std::span<const Element> args, int n) {
    std::size_t idx = 0;
    for (Element a : args) idx = idx * static_cast<std::size_t>(n) + static_cast<std::size_t>(a);
    return idx;
}

std::size_t table_cells(int arity, int n) {
    std::size_t c = 1;
    for (int i = 0; i < arity; ++i) c *= static_cast<std::size_t>(n);
    return c;
}

namespace {

void check_size(int n) {
    if (n < 1) throw std::invalid_argument("domain size must be at least 1");
}

void check_args(std::span<const Element> args, int arity, int n) {
    if (args.size() != static_cast<std::size_t>(arity)) throw std::invalid_argument("wrong number of arguments");
    for (Element a : args)
        if (a < 0 || a >= n) throw std::out_of_range("argument outside the domain");
}

std::size_t symbol_index(const Signature& sig, std::string_view name) {
    auto i = sig.index_of(name);
    if (!i) throw std::invalid_argument("unknown function symbol '" + std::string(name) + "'");
    return *i;
}

}  // namespace

// ---------------------------------------------------------------------------

Interpretation::Interpretation(Signature sig, int size) : sig_(std::move(sig)), size_(size) {
    check_size(size);
    exists_.assign(static_cast<std::size_t>(size), 0);
    for (const auto& s : sig_.symbols()) tables_.emplace_back(table_cells(s.arity, size), 0);
}

std::vector<Element> Interpretation::existing() const {
    std::vector<Element> out;
    for (Element e = 0; e < size_; ++e)
        if (exists(e)) out.push_back(e);
    return out;
}

Element Interpretation::apply(std::size_t symbol, std::span<const Element> args) const {
    check_args(args, sig_.symbols().at(symbol).arity, size_);
    return tables_[symbol][table_index(args, size_)];
}

Element Interpretation::apply(std::string_view name, std::initializer_list<Element> args) const {
    return apply(symbol_index(sig_, name), std::span<const Element>(args.begin(), args.size()));
}

void Interpretation::set(std::size_t symbol, std::span<const Element> args, Element value) {
    check_args(args, sig_.symbols().at(symbol).arity, size_);
    if (value < 0 || value >= size_) throw std::out_of_range("table value outside the domain");
    tables_[symbol][table_index(args, size_)] = value;
}

void Interpretation::set(std::string_view name, std::initializer_list<Element> args, Element value) {
    set(symbol_index(sig_, name), std::span<const Element>(args.begin(), args.size()), value);
}

// ---------------------------------------------------------------------------

PartialInterpretation::PartialInterpretation(Signature sig, int size) : sig_(std::move(sig)), size_(size) {
    check_size(size);
    flags_.assign(static_cast<std::size_t>(size), -1);
    for (const auto& s : sig_.symbols()) tables_.emplace_back(table_cells(s.arity, size), kUnassigned);
}

PartialInterpretation::PartialInterpretation(const Interpretation& full)
    : sig_(full.signature()), size_(full.size()) {
    for (Element e = 0; e < size_; ++e) flags_.push_back(full.exists(e) ? 1 : 0);
    for (std::size_t s = 0; s < sig_.symbols().size(); ++s) tables_.push_back(full.table(s));
}

std::optional<bool> PartialInterpretation::exists(Element e) const {
    auto f = flags_.at(static_cast<std::size_t>(e));
    if (f < 0) return std::nullopt;
    return f != 0;
}

void PartialInterpretation::set_exists(Element e, std::optional<bool> v) {
    flags_.at(static_cast<std::size_t>(e)) = v ? (*v ? 1 : 0) : -1;
}

std::optional<Element> PartialInterpretation::apply(std::size_t symbol, std::span<const Element> args) const {
    check_args(args, sig_.symbols().at(symbol).arity, size_);
    Element v = tables_[symbol][table_index(args, size_)];
    if (v == kUnassigned) return std::nullopt;
    return v;
}

void PartialInterpretation::set(std::size_t symbol, std::span<const Element> args, std::optional<Element> value) {
    check_args(args, sig_.symbols().at(symbol).arity, size_);
    if (value && (*value < 0 || *value >= size_)) throw std::out_of_range("table value outside the domain");
    tables_[symbol][table_index(args, size_)] = value.value_or(kUnassigned);
}

bool PartialInterpretation::complete() const {
    if (std::any_of(flags_.begin(), flags_.end(), [](std::int8_t f) { return f < 0; })) return false;
    for (const auto& t : tables_)
        if (std::any_of(t.begin(), t.end(), [](Element v) { return v == kUnassigned; })) return false;
    return true;
}

Interpretation PartialInterpretation::to_interpretation() const {
    if (!complete()) throw std::logic_error("to_interpretation on an incomplete partial interpretation");
    Interpretation m(sig_, size_);
    for (Element e = 0; e < size_; ++e) m.set_exists(e, flags_[static_cast<std::size_t>(e)] == 1);
    for (std::size_t s = 0; s < tables_.size(); ++s) m.table(s) = tables_[s];
    return m;
}

// ---------------------------------------------------------------------------
// Two-valued evaluation

Element eval_term(const Interpretation& m, const Valuation& v, const Term& t) {
    if (t.is_var()) {
        auto it = v.find(t.name);
        if (it == v.end()) throw std::logic_error("unbound variable '" + t.name + "'");
        return it->second;
    }
    std::vector<Element> args;
    args.reserve(t.args.size());
    for (const auto& a : t.args) args.push_back(eval_term(m, v, a));
    return m.apply(symbol_index(m.signature(), t.name), args);
}

bool eval_formula(const Interpretation& m, const Valuation& v, const Formula& f) {
    switch (f.kind) {
    case FormulaKind::Exists:
        return m.exists(eval_term(m, v, f.terms[0]));
    case FormulaKind::RawEq:
        return eval_term(m, v, f.terms[0]) == eval_term(m, v, f.terms[1]);
    case FormulaKind::Not:
        return !eval_formula(m, v, f.subs[0]);
    case FormulaKind::Implies:
        return !eval_formula(m, v, f.subs[0]) || eval_formula(m, v, f.subs[1]);
    case FormulaKind::ForallE:
    case FormulaKind::ForallAll: {
        Valuation inner = v;
        for (Element e = 0; e < m.size(); ++e) {
            if (f.kind == FormulaKind::ForallE && !m.exists(e)) continue;
            inner[f.var] = e;
            if (!eval_formula(m, inner, f.subs[0])) return false;
        }
        return true;
    }
    default:
        throw std::invalid_argument("eval_formula expects a core formula");
    }
}

// ---------------------------------------------------------------------------
// Three-valued evaluation

namespace {

std::optional<Element> eval_partial_term(const PartialInterpretation& p, const Valuation& v, const Term& t) {
    if (t.is_var()) {
        auto it = v.find(t.name);
        if (it == v.end()) throw std::logic_error("unbound variable '" + t.name + "'");
        return it->second;
    }
    std::vector<Element> args;
    for (const auto& a : t.args) {
        auto x = eval_partial_term(p, v, a);
        if (!x) return std::nullopt;
        args.push_back(*x);
    }
    return p.apply(symbol_index(p.signature(), t.name), args);
}

Truth negate(Truth t) {
    if (t == Truth::True) return Truth::False;
    if (t == Truth::False) return Truth::True;
    return Truth::Unknown;
}

}  // namespace

Truth eval_partial(const PartialInterpretation& p, const Valuation& v, const Formula& f) {
    switch (f.kind) {
    case FormulaKind::Exists: {
        auto x = eval_partial_term(p, v, f.terms[0]);
        if (!x) return Truth::Unknown;
        auto e = p.exists(*x);
        if (!e) return Truth::Unknown;
        return *e ? Truth::True : Truth::False;
    }
    case FormulaKind::RawEq: {
        auto a = eval_partial_term(p, v, f.terms[0]);
        auto b = eval_partial_term(p, v, f.terms[1]);
        if (!a || !b) return Truth::Unknown;
        return *a == *b ? Truth::True : Truth::False;
    }
    case FormulaKind::Not:
        return negate(eval_partial(p, v, f.subs[0]));
    case FormulaKind::Implies: {
        Truth a = eval_partial(p, v, f.subs[0]);
        if (a == Truth::False) return Truth::True;
        Truth b = eval_partial(p, v, f.subs[1]);
        if (b == Truth::True) return Truth::True;
        if (a == Truth::True && b == Truth::False) return Truth::False;
        return Truth::Unknown;
    }
    case FormulaKind::ForallE:
    case FormulaKind::ForallAll: {
        Valuation inner = v;
        bool unknown = false;
        for (Element e = 0; e < p.size(); ++e) {
            Truth guard = Truth::True;
            if (f.kind == FormulaKind::ForallE) {
                auto ex = p.exists(e);
                guard = !ex ? Truth::Unknown : (*ex ? Truth::True : Truth::False);
            }
            if (guard == Truth::False) continue;
            inner[f.var] = e;
            Truth body = eval_partial(p, inner, f.subs[0]);
            if (body == Truth::True) continue;
            if (body == Truth::False && guard == Truth::True) return Truth::False;
            unknown = true;
        }
        return unknown ? Truth::Unknown : Truth::True;
    }
    default:
        throw std::invalid_argument("eval_partial expects a core formula");
    }
}

bool holds(const Interpretation& m, const Formula& f) {
    return eval_formula(m, {}, universal_closure(expand(f)));
}

bool satisfies(const Interpretation& m, const Theory& t) {
    return std::all_of(t.axioms.begin(), t.axioms.end(), [&](const Axiom& a) { return holds(m, a.formula); });
}

// ---------------------------------------------------------------------------
// Model text

namespace {

void format_tuple(std::ostringstream& os, std::size_t idx, int arity, int n) {
    std::vector<Element> args(static_cast<std::size_t>(arity));
    for (int i = arity - 1; i >= 0; --i) {
        args[static_cast<std::size_t>(i)] = static_cast<Element>(idx % static_cast<std::size_t>(n));
        idx /= static_cast<std::size_t>(n);
    }
    if (arity == 1) {
        os << args[0];
        return;
    }
    os << '(';
    for (std::size_t i = 0; i < args.size(); ++i) os << (i ? "," : "") << args[i];
    os << ')';
}

}  // namespace

std::string format_model(const Interpretation& m) {
    std::ostringstream os;
    os << "size=" << m.size() << " E={";
    bool first = true;
    for (Element e : m.existing()) {
        os << (first ? "" : ",") << e;
        first = false;
    }
    os << "}\n";
    const auto& syms = m.signature().symbols();
    for (std::size_t s = 0; s < syms.size(); ++s) {
        os << syms[s].name << ":";
        const auto& tab = m.table(s);
        for (std::size_t i = 0; i < tab.size(); ++i) {
            os << ' ';
            format_tuple(os, i, syms[s].arity, m.size());
            os << "->" << tab[i];
        }
        os << '\n';
    }
    return os.str();
}

namespace {

class ModelReader {
public:
    explicit ModelReader(std::string_view s) : s_(s) {}

    void skip_ws() {
        while (i_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[i_]))) ++i_;
    }
    void skip_blank() {
        while (i_ < s_.size() && (s_[i_] == ' ' || s_[i_] == '\t' || s_[i_] == '\r')) ++i_;
    }
    bool eat(std::string_view lit) {
        skip_blank();
        if (s_.substr(i_).starts_with(lit)) {
            i_ += lit.size();
            return true;
        }
        return false;
    }
    void need(std::string_view lit) {
        if (!eat(lit)) fail("expected '" + std::string(lit) + "'");
    }
    int number() {
        skip_blank();
        std::size_t b = i_;
        while (i_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[i_]))) ++i_;
        if (b == i_) fail("expected a number");
        return std::stoi(std::string(s_.substr(b, i_ - b)));
    }
    std::string word() {
        skip_blank();
        std::size_t b = i_;
        while (i_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[i_])) || s_[i_] == '_' || s_[i_] == '\''))
            ++i_;
        if (b == i_) fail("expected a symbol name");
        return std::string(s_.substr(b, i_ - b));
    }
    bool at_line_end() {
        skip_blank();
        return i_ >= s_.size() || s_[i_] == '\n';
    }
    bool done() {
        skip_ws();
        return i_ >= s_.size();
    }
    [[noreturn]] void fail(const std::string& msg) const {
        throw std::invalid_argument("model text at offset " + std::to_string(i_) + ": " + msg);
    }

private:
    std::string_view s_;
    std::size_t i_ = 0;
};

}  // namespace

Interpretation parse_model(std::string_view text, const Signature& sig) {
    ModelReader r(text);
    r.skip_ws();
    r.need("size=");
    int n = r.number();
    if (n < 1) r.fail("size must be positive");
    Interpretation m(sig, n);
    r.need("E={");
    if (!r.eat("}")) {
        do {
            int e = r.number();
            if (e >= n) r.fail("existing element outside the domain");
            m.set_exists(e, true);
        } while (r.eat(","));
        r.need("}");
    }
    std::vector<bool> seen(sig.symbols().size(), false);
    while (!r.done()) {
        std::string name = r.word();
        auto idx = sig.index_of(name);
        if (!idx) r.fail("unknown symbol '" + name + "'");
        if (seen[*idx]) r.fail("symbol '" + name + "' listed twice");
        seen[*idx] = true;
        r.need(":");
        int arity = sig.symbols()[*idx].arity;
        std::vector<bool> filled(table_cells(arity, n), false);
        while (!r.at_line_end()) {
            std::vector<Element> args;
            if (arity == 1) {
                args.push_back(r.number());
            } else {
                r.need("(");
                if (arity > 0) {
                    args.push_back(r.number());
                    while (r.eat(",")) args.push_back(r.number());
                }
                r.need(")");
            }
            r.need("->");
            int v = r.number();
            if (args.size() != static_cast<std::size_t>(arity)) r.fail("wrong tuple length for '" + name + "'");
            for (Element a : args)
                if (a >= n) r.fail("argument outside the domain");
            if (v >= n) r.fail("value outside the domain");
            m.set(*idx, args, v);
            filled[table_index(args, n)] = true;
        }
        if (std::find(filled.begin(), filled.end(), false) != filled.end())
            r.fail("table for '" + name + "' is incomplete");
    }
    for (std::size_t s = 0; s < seen.size(); ++s)
        if (!seen[s]) throw std::invalid_argument("model text lacks a table for '" + sig.symbols()[s].name + "'");
    return m;
}

}  // namespace flc
