#pragma once

// Classical first-order lowering and TPTP output.
//
// Guarded quantifiers become raw quantifiers relativized to the existence
// predicate; Kleene and existing identity, and I(t), are spelled out in
// terms of e/1 and '='.  Functions stay total on the raw domain.

#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>

#include "flc/ast.hpp"

namespace flc {

class ExportError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Core formula to core formula without ForallE: `all x. p` becomes
/// `rall x. E(x) -> p`.
Formula relativize(const Formula& core);

enum class ExportFormat { TptpFof };

/// Parses "tptp"; throws std::invalid_argument.
ExportFormat parse_export_format(const std::string& name);

struct ExportJob {
    Theory theory;
    std::optional<Formula> conjecture;
    ExportFormat format = ExportFormat::TptpFof;
};

/// TPTP name of a function symbol: e, dm, cd, cmp for the built-ins, user
/// symbols lowercased.
std::string tptp_symbol(const std::string& name);

/// One lowered formula (no closure, no relativization of free variables).
std::string tptp_formula(const Formula& f);

/// Throws ExportError on a name collision after mapping.
void export_tptp(const ExportJob& job, std::ostream& out);
std::string export_tptp(const ExportJob& job);

}  // namespace flc
