#pragma once

// Ground instances and the pruning evaluator used by the model search.
// Exposed for tests; not part of the stable interface.

#include <cstddef>
#include <cstdint>
#include <limits>
#include <span>
#include <utility>
#include <vector>

#include "flc/ast.hpp"
#include "flc/search.hpp"
#include "flc/semantics.hpp"

namespace flc::detail {

inline constexpr std::size_t kNoCell = std::numeric_limits<std::size_t>::max();

/// Cell numbering: existence flags 0..n-1, then each table in signature
/// order, row-major.
class CellLayout {
public:
    CellLayout(const Signature& sig, int n);

    int size() const { return n_; }
    std::size_t total() const { return total_; }
    std::size_t flag(Element e) const { return static_cast<std::size_t>(e); }
    std::size_t base(std::size_t symbol) const { return base_[symbol]; }
    int arity(std::size_t symbol) const { return arity_[symbol]; }
    std::size_t symbol_count() const { return base_.size(); }
    bool is_flag(std::size_t cell) const { return cell < static_cast<std::size_t>(n_); }
    int domain(std::size_t cell) const { return is_flag(cell) ? 2 : n_; }
    /// Symbol owning a table cell (not valid for flags).
    std::size_t symbol_of(std::size_t cell) const;

private:
    int n_;
    std::vector<std::size_t> base_;
    std::vector<int> arity_;
    std::size_t total_;
};

std::vector<std::size_t> cell_order(const CellLayout& layout, CellOrder order);

/// Cell values of a partial interpretation in CellLayout numbering (-1 for
/// unassigned).
std::vector<std::int8_t> cell_values(const PartialInterpretation& p);

class Grounding {
public:
    /// `formulas` must be closed core formulas over `sig`.
    Grounding(const Signature& sig, int n, const std::vector<Formula>& formulas, std::vector<std::size_t> order);

    const CellLayout& layout() const { return layout_; }
    const std::vector<std::size_t>& order() const { return order_; }
    std::size_t instance_count() const { return instances_.size(); }

    /// Three-valued truth of one ground instance.  On Unknown, `watch` is the
    /// earliest cell in assignment order among the unassigned cells that the
    /// evaluation read; the result cannot change before that cell is set.
    Truth evaluate(std::size_t instance, std::span<const std::int8_t> values, std::size_t& watch);

    /// Conjunction of all instances; for tests.
    Truth evaluate_all(std::span<const std::int8_t> values);

private:
    struct TermNode {
        int symbol;  // -1 for a variable
        int slot;
        int first;
        int count;
    };
    struct Node {
        FormulaKind kind;
        int a = -1;
        int b = -1;
        int slot = -1;
    };
    struct Instance {
        int root;
        std::vector<std::pair<int, Element>> bindings;
        std::vector<Element> guards;
    };
    struct Value {
        std::uint64_t mask;
        int value;  // -1 unless the term is fully determined
    };

    int compile_term(const Term& t, std::vector<std::pair<std::string, int>>& scope);
    int compile(const Formula& f, std::vector<std::pair<std::string, int>>& scope);
    void peel(int node, std::vector<std::pair<int, Element>>& bindings, std::vector<Element>& guards);

    Value eval_term(int t);
    Truth eval_node(int node);
    void block(std::size_t cell);

    Signature sig_;
    CellLayout layout_;
    std::vector<std::size_t> order_;
    std::vector<std::size_t> position_;
    std::vector<TermNode> terms_;
    std::vector<int> term_args_;
    std::vector<Node> nodes_;
    std::vector<Instance> instances_;
    int slots_ = 0;
    std::uint64_t full_mask_;

    // evaluation scratch
    std::vector<Element> env_;
    std::span<const std::int8_t> values_;
    std::size_t best_cell_ = kNoCell;
    std::size_t best_pos_ = kNoCell;
};

}  // namespace flc::detail
