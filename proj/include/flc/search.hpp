#pragma once

// Backtracking finite model search.
//
// Cells are existence flags and table entries.  They are assigned in a fixed
// order; after every assignment the affected ground instances of the axioms
// and side constraints are re-evaluated three-valued, and the branch is cut
// as soon as one of them is definitely false.

#include <atomic>
#include <chrono>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "flc/ast.hpp"
#include "flc/semantics.hpp"

namespace flc {

enum class CellOrder {
    /// Existence flags, then dom, cod, comp (row-major), then user symbols.
    Canonical,
    /// Existence flags, then for e = 0, 1, ...: every table cell whose
    /// largest argument is e.
    ElementMajor,
};

struct SearchConfig {
    std::vector<int> scopes{1, 2, 3, 4};
    CellOrder order = CellOrder::Canonical;
    /// Require the existence set to be a prefix {0..k-1} of the domain.
    bool symmetry_breaking = true;
    std::uint64_t node_limit = 0;            // 0: unlimited
    std::chrono::milliseconds time_limit{0};  // 0: unlimited
    /// Parallel mode splits on existence-flag assignments; only the verdict
    /// is deterministic there, not the witness.
    bool parallel = false;
    int jobs = 1;

    static SearchConfig up_to(int max_scope);
};

/// Parses "N" (meaning 1..N) or "A..B".  Throws std::invalid_argument.
std::vector<int> parse_scope_range(const std::string& text);

struct SearchOutcome {
    enum class Status { Sat, UnsatAtScopes, ResourceLimit };

    Status status = Status::UnsatAtScopes;
    std::optional<Interpretation> model;  // Sat only
    int scope = 0;                        // Sat: model size; ResourceLimit: scope being searched
    std::vector<int> refuted_scopes;      // scopes exhausted without a model
    std::uint64_t nodes = 0;
    std::string limit_reason;             // ResourceLimit only

    bool sat() const { return status == Status::Sat; }
    bool unsat() const { return status == Status::UnsatAtScopes; }
};

/// Finds the first model (in canonical enumeration order) of the theory plus
/// the side constraints.  Constraints are read under their raw universal
/// closure.  Any returned witness has been re-checked with satisfies().
SearchOutcome find_model(const Theory& t, const std::vector<Formula>& constraints, const SearchConfig& cfg);

/// All models of exactly the given size, canonical order, no symmetry
/// breaking, at most `limit` of them.
std::vector<Interpretation> enumerate_models(const Theory& t, int scope, std::size_t limit);
std::vector<Interpretation> enumerate_models(const Theory& t, const std::vector<Formula>& constraints, int scope,
                                             std::size_t limit, bool symmetry_breaking);

/// Number of models at one scope (no limit), for oracles and tests.
std::uint64_t count_models(const Theory& t, const std::vector<Formula>& constraints, int scope,
                           bool symmetry_breaking, CellOrder order = CellOrder::Canonical);

}  // namespace flc
