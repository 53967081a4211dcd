#include "flc/cli.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "flc/corpus.hpp"
#include "flc/export.hpp"
#include "flc/groundproof.hpp"
#include "flc/obligations.hpp"
#include "flc/parser.hpp"
#include "flc/search.hpp"
#include "json.hpp"

namespace flc {

namespace {

namespace fs = std::filesystem;

// Raised for bad input that is not a parse error.
struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// ParseError located in a named file, rendered as FILE:LINE:COL.
struct FileParseError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw UsageError("cannot read '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::string& path, const std::string& text, std::ostream& out) {
    if (path == "-") {
        out << text;
        return;
    }
    std::ofstream f(path, std::ios::binary);
    if (!f) throw UsageError("cannot write '" + path + "'");
    f << text;
}

struct Source {
    std::string name;  // for diagnostics
    Theory theory;
};

// A path to a .fth file, or the name of a built-in theory.
Source load_theory(const std::string& ref) {
    if (fs::exists(ref)) {
        try {
            return {ref, parse_theory(read_file(ref))};
        } catch (const ParseError& e) {
            throw FileParseError(ref + ":" + std::to_string(e.span().line) + ":" + std::to_string(e.span().column) +
                                 ": " + e.message() + (e.expected().empty() ? "" : " (expected " + e.expected() + ")"));
        }
    }
    const auto& corpus = builtin_corpus();
    if (auto it = corpus.find(ref); it != corpus.end()) return {ref, it->second};
    throw UsageError("no such file or built-in theory: '" + ref + "'");
}

std::vector<int> default_scopes() {
    if (const char* env = std::getenv("FLC_SCOPE_DEFAULT"); env && *env) {
        try {
            return parse_scope_range(env);
        } catch (const std::invalid_argument& e) {
            throw UsageError(std::string("FLC_SCOPE_DEFAULT: ") + e.what());
        }
    }
    return {1, 2, 3, 4};
}

struct SearchFlags {
    std::string scope;
    std::string scopes;
    std::uint64_t node_limit = 0;
    std::int64_t time_limit_ms = 0;
    int jobs = 1;
    std::string order = "canonical";
    bool no_symmetry = false;

    void add_to(CLI::App* app, bool with_scopes = true) {
        if (with_scopes) {
            auto* s = app->add_option("--scope", scope, "Search sizes 1..N");
            app->add_option("--scopes", scopes, "Search sizes A..B")->excludes(s);
        }
        app->add_option("--node-limit", node_limit, "Give up after this many search nodes (0: none)");
        app->add_option("--time-limit", time_limit_ms, "Give up after this many milliseconds (0: none)");
        app->add_option("--jobs", jobs, "Worker threads; more than one enables parallel mode")->check(CLI::Range(1, 256));
        app->add_option("--order", order, "Cell order: canonical or element-major")
            ->check(CLI::IsMember({"canonical", "element-major"}));
        app->add_flag("--no-symmetry", no_symmetry, "Disable existence-prefix symmetry breaking");
    }

    SearchConfig config() const {
        SearchConfig c;
        try {
            c.scopes = !scope.empty() ? parse_scope_range(scope) : !scopes.empty() ? parse_scope_range(scopes)
                                                                                    : default_scopes();
        } catch (const std::invalid_argument& e) {
            throw UsageError(e.what());
        }
        c.node_limit = node_limit;
        c.time_limit = std::chrono::milliseconds(time_limit_ms);
        c.jobs = jobs;
        c.parallel = jobs > 1;
        c.order = order == "element-major" ? CellOrder::ElementMajor : CellOrder::Canonical;
        c.symmetry_breaking = !no_symmetry;
        return c;
    }
};

std::string join_scopes(const std::vector<int>& s) {
    std::string r;
    for (std::size_t i = 0; i < s.size(); ++i) r += (i ? "," : "") + std::to_string(s[i]);
    return r;
}

// A label of the theory, NAME:LABEL of a built-in theory, or an inline formula.
Formula resolve_goal(const std::string& text, const Theory& t) {
    if (const Axiom* a = t.find(text)) return a->formula;
    if (auto colon = text.find(':'); colon != std::string::npos && text.find(' ') == std::string::npos) {
        const auto& corpus = builtin_corpus();
        if (auto it = corpus.find(text.substr(0, colon)); it != corpus.end()) {
            if (const Axiom* a = it->second.find(text.substr(colon + 1))) return a->formula;
            throw UsageError("theory " + it->first + " has no axiom '" + text.substr(colon + 1) + "'");
        }
    }
    return parse_formula(text, t.signature);
}

nlohmann::ordered_json single_report(const std::string& obligation, const char* verdict, int scope,
                                     const std::vector<int>& scopes, const std::optional<Interpretation>& witness) {
    nlohmann::ordered_json j;
    j["obligation"] = obligation;
    j["verdict"] = verdict;
    j["scope"] = scope > 0 ? nlohmann::ordered_json(scope) : nlohmann::ordered_json(nullptr);
    j["scopes"] = scopes;
    j["witness"] = witness ? nlohmann::ordered_json(format_model(*witness)) : nlohmann::ordered_json(nullptr);
    j["cite"] = nullptr;
    j["millis"] = nullptr;
    return j;
}

int print_verdict(const Verdict& v, std::ostream& out, bool affirmative_on_holds) {
    switch (v.kind) {
        case VerdictKind::Holds:
            out << "HOLDS up to scope " << v.scope << " (no countermodel at scopes " << join_scopes(v.scopes) << ")\n";
            return affirmative_on_holds ? kExitAffirmative : kExitNegative;
        case VerdictKind::CounterexampleFound:
            out << "COUNTERMODEL at scope " << v.scope << "\n" << format_model(*v.model) << "\n";
            return affirmative_on_holds ? kExitNegative : kExitAffirmative;
        case VerdictKind::Inconclusive:
            out << "INCONCLUSIVE at scope " << v.scope << ": " << v.detail << "\n";
            return kExitNegative;
        default:
            out << to_string(v.kind) << "\n";
            return kExitNegative;
    }
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Finite model finder and bounded obligation checker for free-logic axiom sets", "flc"};
    app.require_subcommand(1);
    int code = kExitError;

    // check
    auto* check = app.add_subcommand("check", "Parse a theory; with --model, evaluate every axiom in a model");
    std::string check_file, check_model;
    check->add_option("FILE", check_file, "Theory file or built-in name")->required();
    check->add_option("--model", check_model, "Model file in the text format printed by find-model");

    // find-model
    auto* find = app.add_subcommand("find-model", "Search for a model (affirmative: SAT)");
    std::string find_file, find_json;
    bool require_nonexistent = false, require_mixed = false, find_all = false;
    std::vector<std::string> constraints;
    SearchFlags find_flags;
    find->add_option("FILE", find_file, "Theory file or built-in name")->required();
    find->add_flag("--require-nonexistent", require_nonexistent, "Add the constraint rex x. ~E(x)");
    find->add_flag("--require-mixed", require_mixed, "Add (rex x. ~E(x)) & (rex x. E(x))");
    find->add_option("--constraint", constraints, "Extra side constraint (repeatable)");
    find->add_flag("--all", find_all, "List every model (no symmetry breaking) at each scope");
    find->add_option("--json", find_json, "Write a JSON report to PATH ('-' for stdout)");
    find_flags.add_to(find);

    // implies
    auto* imp = app.add_subcommand("implies", "Bounded implication check (affirmative: HOLDS)");
    std::string imp_file, imp_goal, imp_goal_file;
    std::vector<std::string> imp_assume;
    SearchFlags imp_flags;
    imp->add_option("FILE", imp_file, "Theory file or built-in name")->required();
    auto* g1 = imp->add_option("--goal", imp_goal, "Axiom label, THEORY:LABEL, or formula");
    auto* g2 = imp->add_option("--goal-file", imp_goal_file, "File holding the goal formula");
    g1->excludes(g2);
    imp->add_option("--assume", imp_assume, "Extra assumption (repeatable)");
    imp_flags.add_to(imp);

    // independent
    auto* ind = app.add_subcommand("independent", "Independence of one axiom (affirmative: countermodel found)");
    std::string ind_file, ind_axiom;
    SearchFlags ind_flags;
    ind->add_option("FILE", ind_file, "Theory file or built-in name")->required();
    ind->add_option("--axiom", ind_axiom, "Axiom label")->required();
    ind_flags.add_to(ind);

    // refute-ground
    auto* ground = app.add_subcommand("refute-ground",
                                      "Ground refutation of a theory whose axioms are ground (affirmative: UNSAT)");
    std::string ground_file;
    ground->add_option("FILE", ground_file, "Theory file with ground axioms")->required();

    // export
    auto* exp = app.add_subcommand("export", "Write the theory in TPTP FOF");
    std::string exp_file, exp_conj, exp_format = "tptp", exp_output = "-";
    exp->add_option("FILE", exp_file, "Theory file or built-in name")->required();
    exp->add_option("--conjecture", exp_conj, "Axiom label, THEORY:LABEL, or formula");
    exp->add_option("--format", exp_format, "Output format")->check(CLI::IsMember({"tptp"}));
    exp->add_option("--output,-o", exp_output, "Output path ('-' for stdout)");

    // suite
    auto* suite = app.add_subcommand("suite", "Run a .suite manifest, or the built-in one with 'paper'");
    std::string suite_ref, suite_json, suite_emit;
    bool suite_timing = false;
    SearchFlags suite_flags;
    suite->add_option("SUITE", suite_ref, "'paper' or a .suite path")->required();
    suite->add_option("--json", suite_json, "Write the JSON report to PATH ('-' for stdout)");
    suite->add_option("--emit-corpus", suite_emit, "Write the built-in theory and suite files to DIR");
    suite->add_flag("--timing", suite_timing, "Record elapsed milliseconds in the JSON report");
    suite_flags.add_to(suite, false);

    // translate
    auto* tr = app.add_subcommand("translate", "Rewrite a theory into diagrammatic composition");
    std::string tr_file;
    bool tr_diag = false;
    tr->add_option("FILE", tr_file, "Theory file or built-in name")->required();
    tr->add_flag("--diagrammatic", tr_diag, "Swap composition arguments")->required();

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        int c = app.exit(e, out, err);
        return c == 0 ? kExitAffirmative : kExitError;
    }

    try {
        if (*check) {
            Source s = load_theory(check_file);
            if (check_model.empty()) {
                out << "ok: theory " << s.theory.name << ", " << s.theory.axioms.size() << " axioms\n";
                return kExitAffirmative;
            }
            Interpretation m = parse_model(read_file(check_model), s.theory.signature);
            bool all = true;
            for (const auto& a : s.theory.axioms) {
                bool h = holds(m, a.formula);
                all = all && h;
                out << (h ? "true   " : "false  ") << a.label << "\n";
            }
            out << (all ? "model satisfies " : "model violates ") << s.theory.name << "\n";
            return all ? kExitAffirmative : kExitNegative;
        }

        if (*find) {
            Source s = load_theory(find_file);
            std::vector<Formula> side;
            if (require_nonexistent) side.push_back(parse_formula("rex x. ~E(x)", s.theory.signature));
            if (require_mixed) side.push_back(parse_formula("(rex x. ~E(x)) & (rex x. E(x))", s.theory.signature));
            for (const auto& c : constraints) side.push_back(parse_formula(c, s.theory.signature));
            SearchConfig cfg = find_flags.config();
            if (find_all) {
                std::size_t total = 0;
                for (int n : cfg.scopes) {
                    auto models = enumerate_models(s.theory, side, n, static_cast<std::size_t>(-1), false);
                    out << "scope " << n << ": " << models.size() << " models\n";
                    for (const auto& m : models) out << format_model(m) << "\n";
                    total += models.size();
                }
                return total > 0 ? kExitAffirmative : kExitNegative;
            }
            SearchOutcome o = find_model(s.theory, side, cfg);
            std::ostringstream text;  // suppressed when the JSON goes to stdout
            const char* verdict = "holds";
            if (o.sat()) {
                text << "SAT at scope " << o.scope << "\n" << format_model(*o.model) << "\n";
                code = kExitAffirmative;
            } else if (o.unsat()) {
                text << "UNSAT at scopes " << join_scopes(o.refuted_scopes) << "\n";
                verdict = "refuted";
                code = kExitNegative;
            } else {
                text << "INCONCLUSIVE at scope " << o.scope << ": " << o.limit_reason << "\n";
                verdict = "inconclusive";
                code = kExitNegative;
            }
            if (find_json != "-") out << text.str();
            if (!find_json.empty()) {
                auto j = single_report("find-model " + s.name, verdict, o.scope, o.refuted_scopes, o.model);
                write_file(find_json, j.dump(2) + "\n", out);
            }
            return code;
        }

        if (*imp) {
            Source s = load_theory(imp_file);
            if (imp_goal.empty() && imp_goal_file.empty()) throw UsageError("implies needs --goal or --goal-file");
            Formula goal = imp_goal_file.empty() ? resolve_goal(imp_goal, s.theory)
                                                 : parse_formula(read_file(imp_goal_file), s.theory.signature);
            std::vector<Formula> assume;
            for (const auto& a : imp_assume) assume.push_back(parse_formula(a, s.theory.signature));
            return print_verdict(check_implies_bounded(s.theory, goal, imp_flags.config(), assume), out, true);
        }

        if (*ind) {
            Source s = load_theory(ind_file);
            if (!s.theory.find(ind_axiom)) throw UsageError("theory has no axiom '" + ind_axiom + "'");
            Verdict v = check_independence(s.theory, ind_axiom, ind_flags.config());
            if (v.kind == VerdictKind::CounterexampleFound) out << "INDEPENDENT: ";
            return print_verdict(v, out, false);
        }

        if (*ground) {
            Source s = load_theory(ground_file);
            GroundProblem p{s.theory.signature, {}};
            for (const auto& a : s.theory.axioms) p.instances.push_back(a.formula);
            GroundResult r;
            try {
                r = ground_refute(p);
            } catch (const std::invalid_argument& e) {
                throw UsageError(e.what());
            }
            out << "universe: " << r.universe.size() << " terms, " << r.valuations << " valuations examined\n";
            if (r.unsat) {
                out << "UNSAT: no congruence valuation satisfies the instances\n";
                return kExitAffirmative;
            }
            out << "SAT: " << format_valuation(r.universe, *r.witness) << "\n";
            return kExitNegative;
        }

        if (*exp) {
            Source s = load_theory(exp_file);
            ExportJob job{s.theory, std::nullopt, parse_export_format(exp_format)};
            if (!exp_conj.empty()) job.conjecture = resolve_goal(exp_conj, s.theory);
            write_file(exp_output, export_tptp(job), out);
            return kExitAffirmative;
        }

        if (*suite) {
            if (!suite_emit.empty()) {
                fs::create_directories(suite_emit);
                for (const auto& f : corpus_files())
                    write_file((fs::path(suite_emit) / f.file_name).string(), std::string(f.text), out);
                write_file((fs::path(suite_emit) / "paper.suite").string(), std::string(paper_suite_text()), out);
            }
            std::vector<Obligation> obligations;
            if (suite_ref == "paper") {
                obligations = parse_suite(paper_suite_text(), default_resolver());
            } else {
                std::string dir = fs::path(suite_ref).parent_path().string();
                obligations = parse_suite(read_file(suite_ref), default_resolver(dir));
            }
            SuiteOptions opts;
            opts.search = suite_flags.config();
            opts.search.parallel = false;  // obligations run concurrently instead
            opts.jobs = suite_flags.jobs;
            SuiteReport report = run_suite(obligations, opts);
            if (suite_json == "-") {
                out << report_to_json(report, suite_timing);
            } else {
                out << report_to_text(report);
                if (!suite_json.empty()) write_file(suite_json, report_to_json(report, suite_timing), out);
            }
            return report.ok() ? kExitAffirmative : kExitNegative;
        }

        if (*tr) {
            Source s = load_theory(tr_file);
            out << pretty_print(to_diagrammatic(s.theory));
            return kExitAffirmative;
        }
    } catch (const FileParseError& e) {
        err << e.what() << "\n";
        return kExitError;
    } catch (const ParseError& e) {
        err << "parse error: " << e.what() << "\n";
        return kExitError;
    } catch (const SuiteError& e) {
        err << "suite error: " << e.what() << "\n";
        return kExitError;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kExitError;
    }
    return code;
}

}  // namespace flc
