#pragma once

// Proof obligations over the corpus: bounded consistency, implication and
// independence checks, ground refutations, and the suite runner.

#include <chrono>
#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "flc/ast.hpp"
#include "flc/groundproof.hpp"
#include "flc/search.hpp"
#include "flc/semantics.hpp"

namespace flc {

enum class VerdictKind {
    Holds,                // consistency: model found; implication: no countermodel in scope; ground: satisfiable
    CounterexampleFound,  // implication fails (independence confirmed)
    Refuted,              // consistency or ground problem has no model in scope
    Inconclusive,         // resource limit
    Open,                 // not checkable by this tool
};

const char* to_string(VerdictKind k);
/// Accepts the strings produced by to_string; throws std::invalid_argument.
VerdictKind parse_verdict_kind(std::string_view text);

struct Verdict {
    VerdictKind kind = VerdictKind::Open;
    std::vector<int> scopes;              // scopes exhausted (Holds for implication, Refuted)
    int scope = 0;                        // size of the witness, or scope in progress when inconclusive
    std::optional<Interpretation> model;  // model or countermodel
    std::string ground_witness;           // satisfying valuation of a ground problem
    std::string detail;                   // resource-limit reason and similar
    std::uint64_t nodes = 0;
};

/// Holds iff the theory plus side constraints has a model within the scopes.
Verdict check_consistency(const Theory& t, const std::vector<Formula>& side, const SearchConfig& cfg);

/// Searches for a model of t and `assumptions` that falsifies the closure of
/// the goal.  A countermodel is re-checked before it is reported.
Verdict check_implies_bounded(const Theory& t, const Formula& goal, const SearchConfig& cfg,
                              const std::vector<Formula>& assumptions = {});

/// check_implies_bounded(t without target, target).
Verdict check_independence(const Theory& t, const std::string& target, const SearchConfig& cfg);

/// Holds when some valuation satisfies the instances, Refuted otherwise.
Verdict check_ground(const GroundProblem& p);

/// Applicative to diagrammatic composition: arguments of every composition
/// are swapped, variables are renamed back into alphabetical order of first
/// occurrence, and equations between dom and cod of variables change sides.
Formula to_diagrammatic(const Formula& f);
Theory to_diagrammatic(const Theory& t);

enum class ObligationKind { Consistency, Implies, Independent, Ground, Open };

const char* to_string(ObligationKind k);

struct Obligation {
    std::string name;
    ObligationKind kind = ObligationKind::Consistency;
    Theory theory;                      // after sig extension and drop
    std::string theory_ref;             // as written in the manifest
    std::vector<Formula> side;          // side constraints / extra assumptions
    std::optional<Formula> goal;        // Implies
    std::string goal_ref;               // as written in the manifest
    std::string target;                 // Independent: axiom label
    std::vector<Formula> instances;     // Ground
    std::optional<std::vector<int>> scopes;
    VerdictKind expected = VerdictKind::Holds;
    std::string cite;
};

class SuiteError : public std::runtime_error {
public:
    SuiteError(std::size_t line, const std::string& message);
    std::size_t line() const { return line_; }

private:
    std::size_t line_;
};

/// Resolves a theory reference: a corpus name, "empty", or a file path.
using TheoryResolver = std::function<Theory(const std::string&)>;

/// Corpus names and "empty"; anything else is read as a `.fth` path relative
/// to `base_dir`.
TheoryResolver default_resolver(std::string base_dir = {});

/// Parses a `.suite` manifest.  Throws SuiteError (with the line number) on
/// malformed lines, unknown theories, labels or keys, and duplicate names.
std::vector<Obligation> parse_suite(std::string_view text, const TheoryResolver& resolve);

/// Runs one obligation; `base` supplies limits and the default scopes.
Verdict run_obligation(const Obligation& o, const SearchConfig& base);

enum class ResultStatus { Pass, Fail, Inconclusive, Open };
const char* to_string(ResultStatus s);

struct ObligationResult {
    std::string name;
    ObligationKind kind = ObligationKind::Consistency;
    std::string theory;
    std::string goal;
    VerdictKind expected = VerdictKind::Holds;
    Verdict verdict;
    ResultStatus status = ResultStatus::Fail;
    std::string cite;
    std::string error;  // set when the obligation threw
    std::chrono::milliseconds elapsed{0};
};

struct SuiteReport {
    std::vector<ObligationResult> results;  // sorted by name

    std::size_t count(ResultStatus s) const;
    /// No failures and nothing inconclusive.
    bool ok() const;
};

struct SuiteOptions {
    SearchConfig search;  // default scopes, limits; order and parallel flags apply to every obligation
    int jobs = 1;         // obligations run concurrently when > 1
};

/// Never throws for an individual obligation; errors are recorded as failures.
SuiteReport run_suite(const std::vector<Obligation>& obligations, const SuiteOptions& opts);

/// Canonical JSON text of a report.  Elapsed times are included only when
/// `timing` is set; otherwise "millis" is null so the text is reproducible.
std::string report_to_json(const SuiteReport& r, bool timing);

/// One line per obligation plus a summary line.
std::string report_to_text(const SuiteReport& r);

}  // namespace flc
