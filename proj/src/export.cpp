#include "flc/export.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <set>
#include <sstream>

namespace flc {

Formula relativize(const Formula& f) {
    if (!is_core_kind(f.kind)) throw std::invalid_argument("relativize expects a core formula");
    Formula r = f;
    for (auto& s : r.subs) s = relativize(s);
    if (f.kind == FormulaKind::ForallE)
        return forall_all(f.var, implies(exists_atom(Term::var(f.var)), std::move(r.subs[0])));
    return r;
}

ExportFormat parse_export_format(const std::string& name) {
    if (name == "tptp" || name == "tptp-fof") return ExportFormat::TptpFof;
    throw std::invalid_argument("unknown export format '" + name + "'");
}

namespace {

std::string lower(std::string s) {
    for (auto& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return s;
}

std::string word_chars(std::string s) {
    for (auto& c : s)
        if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_') c = '_';
    return s;
}

std::string tptp_var(const std::string& v) {
    std::string s = word_chars(v);
    if (s.empty()) return "V";
    if (std::isalpha(static_cast<unsigned char>(s[0])))
        s[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(s[0])));
    else
        s = "V" + s;
    return s;
}

std::string tptp_label(const std::string& label) {
    std::string s = lower(word_chars(label));
    if (s.empty() || !std::islower(static_cast<unsigned char>(s[0]))) s = "ax_" + s;
    return s;
}

std::string fresh_var(const std::set<std::string>& used) {
    if (!used.count("x")) return "x";
    for (int i = 1;; ++i) {
        std::string c = "x" + std::to_string(i);
        if (!used.count(c)) return c;
    }
}

// I(t) written out with the derived connectives kept.
Formula identity_body(const Term& t) {
    std::string x = fresh_var(term_vars(t));
    Term vx = Term::var(x);
    Formula left = forall_e(x, implies(exists_atom(comp(t, vx)), kleene_eq(comp(t, vx), vx)));
    Formula right = forall_e(x, implies(exists_atom(comp(vx, t)), kleene_eq(comp(vx, t), vx)));
    return conj(std::move(left), std::move(right));
}

class Printer {
public:
    std::string term(const Term& t) {
        if (t.is_var()) return var(t.name);
        std::string s = tptp_symbol(t.name);
        if (t.args.empty()) return s;
        s += '(';
        for (std::size_t i = 0; i < t.args.size(); ++i) {
            if (i) s += ',';
            s += term(t.args[i]);
        }
        return s + ')';
    }

    std::string formula(const Formula& f) {
        switch (f.kind) {
            case FormulaKind::Exists:
                return "e(" + term(f.terms.at(0)) + ")";
            case FormulaKind::RawEq:
                return term(f.terms.at(0)) + " = " + term(f.terms.at(1));
            case FormulaKind::KleeneEq: {
                std::string s = term(f.terms.at(0));
                std::string t = term(f.terms.at(1));
                return "((e(" + s + ") | e(" + t + ")) => " + s + " = " + t + ")";
            }
            case FormulaKind::ExEq: {
                std::string s = term(f.terms.at(0));
                std::string t = term(f.terms.at(1));
                return "(e(" + s + ") & (e(" + t + ") & " + s + " = " + t + "))";
            }
            case FormulaKind::Identity:
                return formula(identity_body(f.terms.at(0)));
            case FormulaKind::Not:
                return "~" + formula(f.subs.at(0));
            case FormulaKind::Implies:
                return binary(f, "=>");
            case FormulaKind::Implied:
                return binary(f, "<=");
            case FormulaKind::Or:
                return binary(f, "|");
            case FormulaKind::And:
                return binary(f, "&");
            case FormulaKind::Iff:
                return binary(f, "<=>");
            case FormulaKind::ForallAll: {
                // consecutive raw universals share one binder list
                std::vector<std::string> vars{var(f.var)};
                const Formula* body = &f.subs.at(0);
                while (body->kind == FormulaKind::ForallAll) {
                    vars.push_back(var(body->var));
                    body = &body->subs.at(0);
                }
                std::string s = "![";
                for (std::size_t i = 0; i < vars.size(); ++i) s += (i ? "," : "") + vars[i];
                return s + "]: " + formula(*body);
            }
            case FormulaKind::ExistsAll:
                return "?[" + var(f.var) + "]: " + formula(f.subs.at(0));
            case FormulaKind::ForallE:
                return "![" + var(f.var) + "]: (e(" + var(f.var) + ") => " + formula(f.subs.at(0)) + ")";
            case FormulaKind::ExistsE:
                return "?[" + var(f.var) + "]: (e(" + var(f.var) + ") & " + formula(f.subs.at(0)) + ")";
        }
        throw std::logic_error("unhandled formula kind in export");
    }

private:
    std::string binary(const Formula& f, const char* op) {
        return "(" + formula(f.subs.at(0)) + " " + op + " " + formula(f.subs.at(1)) + ")";
    }

    std::string var(const std::string& v) {
        std::string mapped = tptp_var(v);
        auto [it, inserted] = mapped_.emplace(mapped, v);
        if (!inserted && it->second != v)
            throw ExportError("variables '" + it->second + "' and '" + v + "' both map to " + mapped);
        return mapped;
    }

    std::map<std::string, std::string> mapped_;
};

void check_symbols(const Signature& sig) {
    std::map<std::string, std::string> seen = {{"e", "E"}};
    for (const auto& s : sig.symbols()) {
        std::string m = tptp_symbol(s.name);
        auto [it, inserted] = seen.emplace(m, s.name);
        if (!inserted) throw ExportError("symbols '" + it->second + "' and '" + s.name + "' both map to " + m);
    }
}

}  // namespace

std::string tptp_symbol(const std::string& name) {
    if (name == kDom) return "dm";
    if (name == kCod) return "cd";
    if (name == kComp) return "cmp";
    std::string s = lower(word_chars(name));
    if (s.empty() || !std::islower(static_cast<unsigned char>(s[0]))) s = "f_" + s;
    return s;
}

std::string tptp_formula(const Formula& f) {
    Printer p;
    return p.formula(f);
}

void export_tptp(const ExportJob& job, std::ostream& out) {
    const Theory& t = job.theory;
    check_symbols(t.signature);
    std::map<std::string, std::string> labels;
    std::ostringstream body;
    auto emit = [&](const std::string& label, const std::string& source_label, const char* role, const Formula& f) {
        auto [it, inserted] = labels.emplace(label, source_label);
        if (!inserted)
            throw ExportError("labels '" + it->second + "' and '" + source_label + "' both map to " + label);
        check_well_formed(t.signature, f);
        body << "fof(" << label << ", " << role << ", " << tptp_formula(universal_closure(f)) << ").\n";
    };
    for (const auto& a : t.axioms) emit(tptp_label(a.label), a.label, "axiom", a.formula);
    if (job.conjecture) emit("goal", "goal", "conjecture", *job.conjecture);
    out << "% theory " << t.name << "\n" << body.str();
}

std::string export_tptp(const ExportJob& job) {
    std::ostringstream os;
    export_tptp(job, os);
    return os.str();
}

}  // namespace flc
