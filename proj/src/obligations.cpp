#include "flc/obligations.hpp"

#include <algorithm>
#include <atomic>
#include <fstream>
#include <mutex>
#include <regex>
#include <sstream>
#include <thread>

#include "flc/corpus.hpp"
#include "flc/parser.hpp"
#include "json.hpp"

namespace flc {

const char* to_string(VerdictKind k) {
    switch (k) {
        case VerdictKind::Holds: return "holds";
        case VerdictKind::CounterexampleFound: return "counterexample";
        case VerdictKind::Refuted: return "refuted";
        case VerdictKind::Inconclusive: return "inconclusive";
        case VerdictKind::Open: return "open";
    }
    return "?";
}

VerdictKind parse_verdict_kind(std::string_view text) {
    if (text == "holds" || text == "sat") return VerdictKind::Holds;
    if (text == "counterexample") return VerdictKind::CounterexampleFound;
    if (text == "refuted" || text == "unsat") return VerdictKind::Refuted;
    if (text == "inconclusive") return VerdictKind::Inconclusive;
    if (text == "open") return VerdictKind::Open;
    throw std::invalid_argument("unknown verdict '" + std::string(text) + "'");
}

const char* to_string(ObligationKind k) {
    switch (k) {
        case ObligationKind::Consistency: return "consistency";
        case ObligationKind::Implies: return "implies";
        case ObligationKind::Independent: return "independent";
        case ObligationKind::Ground: return "ground";
        case ObligationKind::Open: return "open";
    }
    return "?";
}

const char* to_string(ResultStatus s) {
    switch (s) {
        case ResultStatus::Pass: return "pass";
        case ResultStatus::Fail: return "fail";
        case ResultStatus::Inconclusive: return "inconclusive";
        case ResultStatus::Open: return "open";
    }
    return "?";
}

// ---------------------------------------------------------------------------
// checks

namespace {

Verdict inconclusive(const SearchOutcome& o) {
    Verdict v;
    v.kind = VerdictKind::Inconclusive;
    v.scope = o.scope;
    v.scopes = o.refuted_scopes;
    v.detail = o.limit_reason;
    v.nodes = o.nodes;
    return v;
}

}  // namespace

Verdict check_consistency(const Theory& t, const std::vector<Formula>& side, const SearchConfig& cfg) {
    SearchOutcome o = find_model(t, side, cfg);
    if (o.status == SearchOutcome::Status::ResourceLimit) return inconclusive(o);
    Verdict v;
    v.nodes = o.nodes;
    v.scopes = o.refuted_scopes;
    if (o.sat()) {
        v.kind = VerdictKind::Holds;
        v.scope = o.scope;
        v.model = std::move(o.model);
    } else {
        v.kind = VerdictKind::Refuted;
        v.scope = v.scopes.empty() ? 0 : v.scopes.back();
    }
    return v;
}

Verdict check_implies_bounded(const Theory& t, const Formula& goal, const SearchConfig& cfg,
                              const std::vector<Formula>& assumptions) {
    check_well_formed(t.signature, goal);
    std::vector<Formula> constraints = assumptions;
    constraints.push_back(neg(universal_closure(goal)));
    SearchOutcome o = find_model(t, constraints, cfg);
    if (o.status == SearchOutcome::Status::ResourceLimit) return inconclusive(o);
    Verdict v;
    v.nodes = o.nodes;
    v.scopes = o.refuted_scopes;
    if (o.sat()) {
        const Interpretation& m = *o.model;
        bool ok = satisfies(m, t) && !holds(m, goal);
        for (const auto& a : assumptions) ok = ok && holds(m, a);
        if (!ok) throw std::logic_error("countermodel failed re-verification:\n" + format_model(m));
        v.kind = VerdictKind::CounterexampleFound;
        v.scope = o.scope;
        v.model = std::move(o.model);
    } else {
        v.kind = VerdictKind::Holds;
        v.scope = v.scopes.empty() ? 0 : v.scopes.back();
    }
    return v;
}

Verdict check_independence(const Theory& t, const std::string& target, const SearchConfig& cfg) {
    const Axiom* a = t.find(target);
    if (!a) throw std::invalid_argument("theory '" + t.name + "' has no axiom '" + target + "'");
    return check_implies_bounded(t.without({target}), a->formula, cfg);
}

Verdict check_ground(const GroundProblem& p) {
    GroundResult r = ground_refute(p);
    Verdict v;
    v.nodes = r.valuations;
    if (r.unsat) {
        v.kind = VerdictKind::Refuted;
    } else {
        v.kind = VerdictKind::Holds;
        v.ground_witness = format_valuation(r.universe, *r.witness);
    }
    return v;
}

// ---------------------------------------------------------------------------
// diagrammatic translation

namespace {

Term swap_comp(const Term& t) {
    if (t.is_var()) return t;
    Term r = t;
    for (auto& a : r.args) a = swap_comp(a);
    if (r.name == kComp && r.args.size() == 2) std::swap(r.args[0], r.args[1]);
    return r;
}

Formula swap_comp(const Formula& f) {
    Formula r = f;
    for (auto& t : r.terms) t = swap_comp(t);
    for (auto& s : r.subs) s = swap_comp(s);
    return r;
}

void term_order(const Term& t, std::vector<std::string>& order) {
    if (t.is_var()) {
        if (std::find(order.begin(), order.end(), t.name) == order.end()) order.push_back(t.name);
        return;
    }
    for (const auto& a : t.args) term_order(a, order);
}

void term_order(const Formula& f, std::vector<std::string>& order) {
    for (const auto& t : f.terms) term_order(t, order);
    for (const auto& s : f.subs) term_order(s, order);
}

void binder_names(const Formula& f, std::vector<std::string>& order) {
    if (is_quantifier(f.kind) && std::find(order.begin(), order.end(), f.var) == order.end())
        order.push_back(f.var);
    for (const auto& s : f.subs) binder_names(s, order);
}

bool unary_of_var(const Term& t, const std::string& fn) {
    return t.is_app() && t.name == fn && t.args.size() == 1 && t.args[0].is_var();
}

Formula flip_dom_cod(const Formula& f) {
    Formula r = f;
    for (auto& s : r.subs) s = flip_dom_cod(s);
    if ((f.kind == FormulaKind::KleeneEq || f.kind == FormulaKind::ExEq) && r.terms.size() == 2) {
        const Term& l = r.terms[0];
        const Term& rr = r.terms[1];
        if ((unary_of_var(l, kDom) && unary_of_var(rr, kCod)) || (unary_of_var(l, kCod) && unary_of_var(rr, kDom)))
            std::swap(r.terms[0], r.terms[1]);
    }
    return r;
}

}  // namespace

Formula to_diagrammatic(const Formula& f) {
    Formula s = swap_comp(f);
    std::vector<std::string> order;
    term_order(s, order);
    binder_names(s, order);
    std::vector<std::string> sorted = order;
    std::sort(sorted.begin(), sorted.end());
    std::map<std::string, std::string> rename;
    for (std::size_t i = 0; i < order.size(); ++i) rename[order[i]] = sorted[i];
    return flip_dom_cod(rename_all_vars(s, rename));
}

Theory to_diagrammatic(const Theory& t) {
    static const std::string suffix = "-diagrammatic";
    Theory r;
    if (t.name.size() > suffix.size() && t.name.compare(t.name.size() - suffix.size(), suffix.size(), suffix) == 0)
        r.name = t.name.substr(0, t.name.size() - suffix.size());
    else
        r.name = t.name + suffix;
    r.signature = t.signature;
    for (const auto& a : t.axioms) r.axioms.push_back({a.label, to_diagrammatic(a.formula)});
    return r;
}

// ---------------------------------------------------------------------------
// manifest

SuiteError::SuiteError(std::size_t line, const std::string& message)
    : std::runtime_error("line " + std::to_string(line) + ": " + message), line_(line) {}

TheoryResolver default_resolver(std::string base_dir) {
    return [base_dir](const std::string& ref) -> Theory {
        if (ref == "empty") return Theory{"empty", Signature{}, {}};
        const auto& corpus = builtin_corpus();
        if (auto it = corpus.find(ref); it != corpus.end()) return it->second;
        std::string path = ref;
        if (!base_dir.empty() && !path.empty() && path.front() != '/') path = base_dir + "/" + path;
        std::ifstream in(path, std::ios::binary);
        if (!in) throw std::invalid_argument("unknown theory '" + ref + "'");
        std::ostringstream ss;
        ss << in.rdbuf();
        return parse_theory(ss.str());
    };
}

namespace {

struct Field {
    std::string value;
    bool quoted = false;
};

// KIND key=value key="quoted value" ...
std::pair<std::string, std::map<std::string, Field>> split_line(const std::string& line, std::size_t lineno) {
    std::size_t i = 0;
    auto skip = [&] {
        while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
    };
    skip();
    std::size_t start = i;
    while (i < line.size() && line[i] != ' ' && line[i] != '\t') ++i;
    std::string kind = line.substr(start, i - start);
    std::map<std::string, Field> fields;
    for (;;) {
        skip();
        if (i >= line.size()) break;
        std::size_t eq = line.find('=', i);
        if (eq == std::string::npos) throw SuiteError(lineno, "expected key=value near '" + line.substr(i) + "'");
        std::string key = line.substr(i, eq - i);
        if (key.empty() || key.find_first_of(" \t\"") != std::string::npos)
            throw SuiteError(lineno, "malformed key near '" + line.substr(i) + "'");
        i = eq + 1;
        Field f;
        if (i < line.size() && line[i] == '"') {
            std::size_t close = line.find('"', i + 1);
            if (close == std::string::npos) throw SuiteError(lineno, "unterminated quote for '" + key + "'");
            f.value = line.substr(i + 1, close - i - 1);
            f.quoted = true;
            i = close + 1;
            if (i < line.size() && line[i] != ' ' && line[i] != '\t' && line[i] != '\r')
                throw SuiteError(lineno, "expected whitespace after quoted value of '" + key + "'");
        } else {
            std::size_t end = i;
            while (end < line.size() && line[end] != ' ' && line[end] != '\t' && line[end] != '\r') ++end;
            f.value = line.substr(i, end - i);
            i = end;
        }
        if (fields.count(key)) throw SuiteError(lineno, "duplicate key '" + key + "'");
        fields.emplace(std::move(key), std::move(f));
    }
    return {kind, fields};
}

std::vector<std::string> split_top_level(const std::string& s, char sep) {
    std::vector<std::string> out;
    int depth = 0;
    std::string cur;
    for (char c : s) {
        if (c == '(' || c == '[') ++depth;
        if (c == ')' || c == ']') --depth;
        if (c == sep && depth == 0) {
            out.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    out.push_back(cur);
    return out;
}

std::string trim(const std::string& s) {
    auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

ObligationKind parse_kind(const std::string& k, std::size_t lineno) {
    if (k == "consistency") return ObligationKind::Consistency;
    if (k == "implies") return ObligationKind::Implies;
    if (k == "independent") return ObligationKind::Independent;
    if (k == "ground") return ObligationKind::Ground;
    if (k == "open") return ObligationKind::Open;
    throw SuiteError(lineno, "unknown obligation kind '" + k + "'");
}

}  // namespace

std::vector<Obligation> parse_suite(std::string_view text, const TheoryResolver& resolve) {
    static const std::regex instance_re(R"(^([A-Za-z_][A-Za-z0-9_']*)\[(.*)\]$)");
    static const std::regex ref_re(R"(^(?:([A-Za-z0-9_-]+):)?([A-Za-z_][A-Za-z0-9_']*)$)");
    static const std::vector<std::string> known_keys = {"name", "theory", "goal",  "side",     "expect", "cite",
                                                        "scope", "sig",  "drop", "instances"};
    std::vector<Obligation> out;
    std::istringstream in{std::string(text)};
    std::string raw;
    std::size_t lineno = 0;
    while (std::getline(in, raw)) {
        ++lineno;
        std::string line = trim(raw);
        if (line.empty() || line.front() == '#') continue;
        auto [kind_text, fields] = split_line(line, lineno);
        for (const auto& [k, v] : fields)
            if (std::find(known_keys.begin(), known_keys.end(), k) == known_keys.end())
                throw SuiteError(lineno, "unknown key '" + k + "'");
        auto get = [&](const std::string& k) -> const Field* {
            auto it = fields.find(k);
            return it == fields.end() ? nullptr : &it->second;
        };
        auto require = [&](const std::string& k) -> const Field& {
            const Field* f = get(k);
            if (!f) throw SuiteError(lineno, "missing key '" + k + "'");
            return *f;
        };

        Obligation o;
        o.kind = parse_kind(kind_text, lineno);
        try {
            o.theory_ref = require("theory").value;
            Theory base = resolve(o.theory_ref);
            if (const Field* sig = get("sig")) {
                for (const auto& item : split_top_level(sig->value, ',')) {
                    auto slash = item.find('/');
                    if (slash == std::string::npos) throw SuiteError(lineno, "malformed symbol '" + item + "'");
                    base.signature.declare(trim(item.substr(0, slash)), std::stoi(item.substr(slash + 1)));
                }
            }
            o.theory = base;
            if (const Field* drop = get("drop")) {
                std::vector<std::string> labels;
                for (const auto& l : split_top_level(drop->value, ',')) labels.push_back(trim(l));
                o.theory = base.without(labels);
            }
            o.name = get("name") ? get("name")->value : kind_text + ":" + o.theory_ref + std::to_string(lineno);
            o.cite = get("cite") ? get("cite")->value : std::string();
            o.expected = parse_verdict_kind(require("expect").value);
            if (const Field* s = get("scope")) o.scopes = parse_scope_range(s->value);
            if (const Field* side = get("side")) o.side.push_back(parse_formula(side->value, base.signature));

            auto resolve_goal = [&](const Field& g) -> Formula {
                if (g.quoted) return parse_formula(g.value, base.signature);
                std::smatch m;
                if (!std::regex_match(g.value, m, ref_re)) throw SuiteError(lineno, "bad goal reference '" + g.value + "'");
                Theory src = m[1].matched ? resolve(m[1].str()) : base;
                const Axiom* a = src.find(m[2].str());
                if (!a) throw SuiteError(lineno, "theory '" + src.name + "' has no axiom '" + m[2].str() + "'");
                check_well_formed(base.signature, a->formula);
                return a->formula;
            };

            switch (o.kind) {
                case ObligationKind::Consistency:
                    break;
                case ObligationKind::Implies: {
                    const Field& g = require("goal");
                    o.goal_ref = g.value;
                    o.goal = resolve_goal(g);
                    break;
                }
                case ObligationKind::Independent: {
                    o.target = require("goal").value;
                    o.goal_ref = o.target;
                    if (!o.theory.find(o.target))
                        throw SuiteError(lineno, "theory '" + o.theory.name + "' has no axiom '" + o.target + "'");
                    break;
                }
                case ObligationKind::Ground: {
                    for (const auto& piece : split_top_level(require("instances").value, ';')) {
                        std::string item = trim(piece);
                        if (item.empty()) continue;
                        std::smatch m;
                        if (std::regex_match(item, m, instance_re) && base.find(m[1].str())) {
                            std::map<std::string, Term> subst;
                            for (const auto& b : split_top_level(m[2].str(), ',')) {
                                auto assign = b.find(":=");
                                if (assign == std::string::npos)
                                    throw SuiteError(lineno, "expected var:=term in '" + b + "'");
                                subst[trim(b.substr(0, assign))] = parse_term(trim(b.substr(assign + 2)), base.signature);
                            }
                            o.instances.push_back(instantiate(base.find(m[1].str())->formula, subst));
                        } else {
                            o.instances.push_back(parse_formula(item, base.signature));
                        }
                    }
                    break;
                }
                case ObligationKind::Open:
                    if (const Field* g = get("goal")) o.goal_ref = g->value;
                    break;
            }
        } catch (const SuiteError&) {
            throw;
        } catch (const ParseError& e) {
            throw SuiteError(lineno, std::string("parse error: ") + e.what());
        } catch (const std::exception& e) {
            throw SuiteError(lineno, e.what());
        }
        for (const auto& prev : out)
            if (prev.name == o.name) throw SuiteError(lineno, "duplicate obligation name '" + o.name + "'");
        out.push_back(std::move(o));
    }
    return out;
}

// ---------------------------------------------------------------------------
// running

Verdict run_obligation(const Obligation& o, const SearchConfig& base) {
    SearchConfig cfg = base;
    if (o.scopes) cfg.scopes = *o.scopes;
    switch (o.kind) {
        case ObligationKind::Consistency:
            return check_consistency(o.theory, o.side, cfg);
        case ObligationKind::Implies:
            return check_implies_bounded(o.theory, *o.goal, cfg, o.side);
        case ObligationKind::Independent: {
            const Axiom* a = o.theory.find(o.target);
            if (!a) throw std::invalid_argument("no axiom '" + o.target + "'");
            return check_implies_bounded(o.theory.without({o.target}), a->formula, cfg, o.side);
        }
        case ObligationKind::Ground:
            return check_ground(GroundProblem{o.theory.signature, o.instances});
        case ObligationKind::Open: {
            Verdict v;
            v.kind = VerdictKind::Open;
            return v;
        }
    }
    throw std::logic_error("unhandled obligation kind");
}

std::size_t SuiteReport::count(ResultStatus s) const {
    return static_cast<std::size_t>(
        std::count_if(results.begin(), results.end(), [s](const ObligationResult& r) { return r.status == s; }));
}

bool SuiteReport::ok() const { return count(ResultStatus::Fail) == 0 && count(ResultStatus::Inconclusive) == 0; }

namespace {

ObligationResult run_one(const Obligation& o, const SearchConfig& cfg) {
    ObligationResult r;
    r.name = o.name;
    r.kind = o.kind;
    r.theory = o.theory_ref;
    r.goal = o.goal_ref;
    r.expected = o.expected;
    r.cite = o.cite;
    auto t0 = std::chrono::steady_clock::now();
    try {
        r.verdict = run_obligation(o, cfg);
        if (r.verdict.kind == VerdictKind::Open)
            r.status = ResultStatus::Open;
        else if (r.verdict.kind == o.expected)
            r.status = ResultStatus::Pass;
        else if (r.verdict.kind == VerdictKind::Inconclusive)
            r.status = ResultStatus::Inconclusive;
        else
            r.status = ResultStatus::Fail;
    } catch (const std::exception& e) {
        r.status = ResultStatus::Fail;
        r.error = e.what();
        r.verdict.kind = VerdictKind::Inconclusive;
    }
    r.elapsed = std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - t0);
    return r;
}

}  // namespace

SuiteReport run_suite(const std::vector<Obligation>& obligations, const SuiteOptions& opts) {
    SuiteReport report;
    report.results.resize(obligations.size());
    if (opts.jobs <= 1 || obligations.size() <= 1) {
        for (std::size_t i = 0; i < obligations.size(); ++i) report.results[i] = run_one(obligations[i], opts.search);
    } else {
        std::atomic<std::size_t> next{0};
        std::vector<std::jthread> workers;
        const int jobs = std::min<int>(opts.jobs, static_cast<int>(obligations.size()));
        for (int j = 0; j < jobs; ++j)
            workers.emplace_back([&] {
                for (std::size_t i = next++; i < obligations.size(); i = next++)
                    report.results[i] = run_one(obligations[i], opts.search);
            });
    }
    std::stable_sort(report.results.begin(), report.results.end(),
                     [](const ObligationResult& a, const ObligationResult& b) { return a.name < b.name; });
    return report;
}

std::string report_to_json(const SuiteReport& r, bool timing) {
    using nlohmann::ordered_json;
    ordered_json results = ordered_json::array();
    for (const auto& res : r.results) {
        ordered_json j;
        const Verdict& v = res.verdict;
        j["obligation"] = res.name;
        j["kind"] = to_string(res.kind);
        j["theory"] = res.theory;
        j["goal"] = res.goal.empty() ? ordered_json(nullptr) : ordered_json(res.goal);
        j["expected"] = to_string(res.expected);
        j["verdict"] = to_string(v.kind);
        j["status"] = to_string(res.status);
        j["scope"] = v.scope > 0 ? ordered_json(v.scope) : ordered_json(nullptr);
        j["scopes"] = v.scopes;
        if (v.model)
            j["witness"] = format_model(*v.model);
        else if (!v.ground_witness.empty())
            j["witness"] = v.ground_witness;
        else
            j["witness"] = nullptr;
        j["cite"] = res.cite;
        j["millis"] = timing ? ordered_json(res.elapsed.count()) : ordered_json(nullptr);
        j["detail"] = v.detail.empty() ? ordered_json(nullptr) : ordered_json(v.detail);
        j["error"] = res.error.empty() ? ordered_json(nullptr) : ordered_json(res.error);
        results.push_back(std::move(j));
    }
    ordered_json doc;
    doc["summary"] = {{"total", r.results.size()},
                      {"pass", r.count(ResultStatus::Pass)},
                      {"fail", r.count(ResultStatus::Fail)},
                      {"inconclusive", r.count(ResultStatus::Inconclusive)},
                      {"open", r.count(ResultStatus::Open)}};
    doc["results"] = std::move(results);
    return doc.dump(2) + "\n";
}

std::string report_to_text(const SuiteReport& r) {
    std::ostringstream os;
    for (const auto& res : r.results) {
        std::string status = to_string(res.status);
        std::transform(status.begin(), status.end(), status.begin(), [](unsigned char c) { return std::toupper(c); });
        os << status << "  " << res.name << "  " << to_string(res.verdict.kind);
        if (res.verdict.scope > 0) os << " (scope " << res.verdict.scope << ")";
        if (res.status == ResultStatus::Fail && res.error.empty()) os << "  expected " << to_string(res.expected);
        if (!res.error.empty()) os << "  error: " << res.error;
        os << "\n";
    }
    os << "summary: " << r.results.size() << " obligations, " << r.count(ResultStatus::Pass) << " pass, "
       << r.count(ResultStatus::Fail) << " fail, " << r.count(ResultStatus::Inconclusive) << " inconclusive, "
       << r.count(ResultStatus::Open) << " open\n";
    return os.str();
}

}  // namespace flc
