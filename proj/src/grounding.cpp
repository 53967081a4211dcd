#include "flc/detail/grounding.hpp"

#include <algorithm>
#include <stdexcept>

namespace flc::detail {

CellLayout::CellLayout(const Signature& sig, int n) : n_(n) {
    if (n < 1 || n > 64) throw std::invalid_argument("scope must be between 1 and 64");
    std::size_t next = static_cast<std::size_t>(n);
    for (const auto& s : sig.symbols()) {
        base_.push_back(next);
        arity_.push_back(s.arity);
        next += table_cells(s.arity, n);
    }
    total_ = next;
}

std::size_t CellLayout::symbol_of(std::size_t cell) const {
    for (std::size_t s = base_.size(); s-- > 0;)
        if (cell >= base_[s]) return s;
    throw std::logic_error("symbol_of on an existence flag");
}

std::vector<std::size_t> cell_order(const CellLayout& layout, CellOrder order) {
    std::vector<std::size_t> out;
    out.reserve(layout.total());
    const int n = layout.size();
    for (int e = 0; e < n; ++e) out.push_back(layout.flag(e));
    if (order == CellOrder::Canonical) {
        for (std::size_t c = static_cast<std::size_t>(n); c < layout.total(); ++c) out.push_back(c);
        return out;
    }
    // ElementMajor: cells grouped by their largest argument, tables in
    // signature order within a group.
    for (int e = 0; e < n; ++e) {
        for (std::size_t s = 0; s < layout.symbol_count(); ++s) {
            int arity = layout.arity(s);
            std::size_t cells = table_cells(arity, n);
            for (std::size_t idx = 0; idx < cells; ++idx) {
                int mx = 0;
                std::size_t rest = idx;
                for (int k = 0; k < arity; ++k) {
                    mx = std::max(mx, static_cast<int>(rest % static_cast<std::size_t>(n)));
                    rest /= static_cast<std::size_t>(n);
                }
                if (mx == e) out.push_back(layout.base(s) + idx);
            }
        }
    }
    return out;
}

std::vector<std::int8_t> cell_values(const PartialInterpretation& p) {
    CellLayout layout(p.signature(), p.size());
    std::vector<std::int8_t> v(layout.total(), -1);
    for (Element e = 0; e < p.size(); ++e) v[layout.flag(e)] = p.flags()[static_cast<std::size_t>(e)];
    for (std::size_t s = 0; s < layout.symbol_count(); ++s) {
        const auto& tab = p.table(s);
        for (std::size_t i = 0; i < tab.size(); ++i) v[layout.base(s) + i] = static_cast<std::int8_t>(tab[i]);
    }
    return v;
}

// ---------------------------------------------------------------------------

Grounding::Grounding(const Signature& sig, int n, const std::vector<Formula>& formulas,
                     std::vector<std::size_t> order)
    : sig_(sig), layout_(sig, n), order_(std::move(order)) {
    if (order_.size() != layout_.total()) throw std::invalid_argument("cell order does not cover the layout");
    position_.assign(layout_.total(), kNoCell);
    for (std::size_t i = 0; i < order_.size(); ++i) position_[order_.at(i)] = i;
    full_mask_ = n == 64 ? ~std::uint64_t{0} : ((std::uint64_t{1} << n) - 1);

    std::vector<int> roots;
    for (const auto& f : formulas) {
        if (!is_core(f)) throw std::invalid_argument("grounding expects core formulas");
        std::vector<std::pair<std::string, int>> scope;
        roots.push_back(compile(f, scope));
    }
    for (int r : roots) {
        std::vector<std::pair<int, Element>> bindings;
        std::vector<Element> guards;
        peel(r, bindings, guards);
    }
    env_.assign(static_cast<std::size_t>(std::max(slots_, 1)), 0);
}

int Grounding::compile_term(const Term& t, std::vector<std::pair<std::string, int>>& scope) {
    if (t.is_var()) {
        for (auto it = scope.rbegin(); it != scope.rend(); ++it)
            if (it->first == t.name) {
                terms_.push_back({-1, it->second, 0, 0});
                return static_cast<int>(terms_.size() - 1);
            }
        throw std::invalid_argument("grounding expects closed formulas; '" + t.name + "' is free");
    }
    auto sym = sig_.index_of(t.name);
    if (!sym) throw std::invalid_argument("unknown function symbol '" + t.name + "'");
    std::vector<int> args;
    for (const auto& a : t.args) args.push_back(compile_term(a, scope));
    int first = static_cast<int>(term_args_.size());
    term_args_.insert(term_args_.end(), args.begin(), args.end());
    terms_.push_back({static_cast<int>(*sym), -1, first, static_cast<int>(args.size())});
    return static_cast<int>(terms_.size() - 1);
}

int Grounding::compile(const Formula& f, std::vector<std::pair<std::string, int>>& scope) {
    Node node{f.kind};
    switch (f.kind) {
        case FormulaKind::Exists:
            node.a = compile_term(f.terms.at(0), scope);
            break;
        case FormulaKind::RawEq:
            node.a = compile_term(f.terms.at(0), scope);
            node.b = compile_term(f.terms.at(1), scope);
            break;
        case FormulaKind::Not:
            node.a = compile(f.subs.at(0), scope);
            break;
        case FormulaKind::Implies:
            node.a = compile(f.subs.at(0), scope);
            node.b = compile(f.subs.at(1), scope);
            break;
        case FormulaKind::ForallE:
        case FormulaKind::ForallAll:
            node.slot = slots_++;
            scope.emplace_back(f.var, node.slot);
            node.a = compile(f.subs.at(0), scope);
            scope.pop_back();
            break;
        default:
            throw std::invalid_argument("grounding expects core formulas");
    }
    nodes_.push_back(node);
    return static_cast<int>(nodes_.size() - 1);
}

void Grounding::peel(int id, std::vector<std::pair<int, Element>>& bindings, std::vector<Element>& guards) {
    const Node node = nodes_[static_cast<std::size_t>(id)];
    const int n = layout_.size();
    switch (node.kind) {
        case FormulaKind::ForallAll:
        case FormulaKind::ForallE:
            for (Element e = 0; e < n; ++e) {
                bindings.emplace_back(node.slot, e);
                if (node.kind == FormulaKind::ForallE) guards.push_back(e);
                peel(node.a, bindings, guards);
                if (node.kind == FormulaKind::ForallE) guards.pop_back();
                bindings.pop_back();
            }
            return;
        case FormulaKind::Not: {
            const Node inner = nodes_[static_cast<std::size_t>(node.a)];
            if (inner.kind == FormulaKind::Not) {
                peel(inner.a, bindings, guards);
                return;
            }
            if (inner.kind == FormulaKind::Implies) {
                // ~(p -> q) is p and ~q
                peel(inner.a, bindings, guards);
                Node nq{FormulaKind::Not};
                nq.a = inner.b;
                nodes_.push_back(nq);
                peel(static_cast<int>(nodes_.size() - 1), bindings, guards);
                return;
            }
            break;
        }
        default:
            break;
    }
    instances_.push_back({id, bindings, guards});
}

void Grounding::block(std::size_t cell) {
    std::size_t pos = position_[cell];
    if (pos < best_pos_) {
        best_pos_ = pos;
        best_cell_ = cell;
    }
}

Grounding::Value Grounding::eval_term(int id) {
    const TermNode& t = terms_[static_cast<std::size_t>(id)];
    if (t.symbol < 0) {
        Element v = env_[static_cast<std::size_t>(t.slot)];
        return {std::uint64_t{1} << v, v};
    }
    const std::size_t n = static_cast<std::size_t>(layout_.size());
    std::size_t idx = 0;
    bool known = true;
    for (int i = 0; i < t.count; ++i) {
        Value a = eval_term(term_args_[static_cast<std::size_t>(t.first + i)]);
        if (a.value < 0)
            known = false;
        else
            idx = idx * n + static_cast<std::size_t>(a.value);
    }
    if (!known) return {full_mask_, -1};
    std::size_t cell = layout_.base(static_cast<std::size_t>(t.symbol)) + idx;
    int v = values_[cell];
    if (v < 0) {
        block(cell);
        return {full_mask_, -1};
    }
    return {std::uint64_t{1} << v, v};
}

Truth Grounding::eval_node(int id) {
    const Node& node = nodes_[static_cast<std::size_t>(id)];
    switch (node.kind) {
        case FormulaKind::Exists: {
            Value t = eval_term(node.a);
            bool any_true = false, any_false = false, any_open = false;
            for (std::uint64_t m = t.mask; m != 0; m &= m - 1) {
                auto e = static_cast<std::size_t>(__builtin_ctzll(m));
                int f = values_[layout_.flag(static_cast<Element>(e))];
                if (f < 0) {
                    any_open = true;
                    block(e);
                } else if (f) {
                    any_true = true;
                } else {
                    any_false = true;
                }
            }
            if (!any_open && !(any_true && any_false)) return any_true ? Truth::True : Truth::False;
            return Truth::Unknown;
        }
        case FormulaKind::RawEq: {
            Value l = eval_term(node.a);
            Value r = eval_term(node.b);
            if (l.value >= 0 && r.value >= 0) return l.value == r.value ? Truth::True : Truth::False;
            if ((l.mask & r.mask) == 0) return Truth::False;
            return Truth::Unknown;
        }
        case FormulaKind::Not: {
            Truth a = eval_node(node.a);
            if (a == Truth::Unknown) return a;
            return a == Truth::True ? Truth::False : Truth::True;
        }
        case FormulaKind::Implies: {
            Truth a = eval_node(node.a);
            if (a == Truth::False) return Truth::True;
            Truth b = eval_node(node.b);
            if (b == Truth::True) return Truth::True;
            if (a == Truth::True && b == Truth::False) return Truth::False;
            return Truth::Unknown;
        }
        case FormulaKind::ForallE:
        case FormulaKind::ForallAll: {
            const bool guarded = node.kind == FormulaKind::ForallE;
            const int n = layout_.size();
            Truth result = Truth::True;
            Element saved = env_[static_cast<std::size_t>(node.slot)];
            for (Element e = 0; e < n; ++e) {
                int g = guarded ? values_[layout_.flag(e)] : 1;
                if (g == 0) continue;
                env_[static_cast<std::size_t>(node.slot)] = e;
                Truth b = eval_node(node.a);
                if (g < 0) {
                    block(layout_.flag(e));
                    if (b != Truth::True) result = Truth::Unknown;
                } else if (b == Truth::False) {
                    result = Truth::False;
                    break;
                } else if (b == Truth::Unknown) {
                    result = Truth::Unknown;
                }
            }
            env_[static_cast<std::size_t>(node.slot)] = saved;
            return result;
        }
        default:
            throw std::logic_error("non-core node in grounding");
    }
}

Truth Grounding::evaluate(std::size_t instance, std::span<const std::int8_t> values, std::size_t& watch) {
    const Instance& inst = instances_[instance];
    values_ = values;
    best_cell_ = kNoCell;
    best_pos_ = kNoCell;
    for (const auto& [slot, e] : inst.bindings) env_[static_cast<std::size_t>(slot)] = e;
    bool guards_true = true;
    for (Element g : inst.guards) {
        int f = values[layout_.flag(g)];
        if (f == 0) {
            watch = kNoCell;
            return Truth::True;
        }
        if (f < 0) {
            guards_true = false;
            block(layout_.flag(g));
        }
    }
    Truth b = eval_node(inst.root);
    Truth r = Truth::Unknown;
    if (b == Truth::True)
        r = Truth::True;
    else if (b == Truth::False && guards_true)
        r = Truth::False;
    watch = r == Truth::Unknown ? best_cell_ : kNoCell;
    if (r == Truth::Unknown && watch == kNoCell) throw std::logic_error("unknown instance without an open cell");
    return r;
}

Truth Grounding::evaluate_all(std::span<const std::int8_t> values) {
    Truth acc = Truth::True;
    for (std::size_t i = 0; i < instances_.size(); ++i) {
        std::size_t w = kNoCell;
        Truth t = evaluate(i, values, w);
        if (t == Truth::False) return Truth::False;
        if (t == Truth::Unknown) acc = Truth::Unknown;
    }
    return acc;
}

}  // namespace flc::detail
