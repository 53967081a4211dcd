#include "doctest.h"
#include "flc/corpus.hpp"
#include "flc/obligations.hpp"
#include "flc/parser.hpp"
#include "support/generators.hpp"
#include "support/oracle.hpp"

using namespace flc;

namespace {

SearchConfig upto(int n) { return SearchConfig::up_to(n); }

Formula f(const char* text) { return parse_formula(text, Signature{}); }

// Equal up to variable names, or a top-level equation with its sides swapped.
bool same_modulo_orientation(const Formula& a, const Formula& b) {
    if (canonical_var_names(a) == canonical_var_names(b)) return true;
    if (a.kind != b.kind) return false;
    if (a.kind != FormulaKind::KleeneEq && a.kind != FormulaKind::ExEq && a.kind != FormulaKind::RawEq) return false;
    Formula swapped = a;
    std::swap(swapped.terms[0], swapped.terms[1]);
    return canonical_var_names(swapped) == canonical_var_names(b);
}

std::vector<Obligation> suite(const std::string& text) { return parse_suite(text, default_resolver()); }

}  // namespace

TEST_CASE("verdict kind names round-trip") {
    for (VerdictKind k : {VerdictKind::Holds, VerdictKind::CounterexampleFound, VerdictKind::Refuted,
                          VerdictKind::Inconclusive, VerdictKind::Open})
        CHECK(parse_verdict_kind(to_string(k)) == k);
    CHECK(parse_verdict_kind("sat") == VerdictKind::Holds);
    CHECK(parse_verdict_kind("unsat") == VerdictKind::Refuted);
    CHECK_THROWS_AS(parse_verdict_kind("maybe"), std::invalid_argument);
}

TEST_CASE("consistency verdicts") {
    Verdict v = check_consistency(corpus_theory("VI"), {}, upto(2));
    CHECK(v.kind == VerdictKind::Holds);
    REQUIRE(v.model);
    CHECK(satisfies(*v.model, corpus_theory("VI")));
    v = check_consistency(corpus_theory("VII"), {f("rex x. ~E(x)")}, upto(3));
    CHECK(v.kind == VerdictKind::Refuted);
    CHECK(v.scopes == std::vector<int>{1, 2, 3});
}

TEST_CASE("set VII alone has the all-existing identity model at size 1") {
    Verdict v = check_consistency(corpus_theory("VII"), {}, upto(1));
    REQUIRE(v.kind == VerdictKind::Holds);
    CHECK(v.model->size() == 1);
    CHECK(v.model->exists(0));
}

TEST_CASE("bounded implication") {
    Verdict v = check_implies_bounded(corpus_theory("VIII"), corpus_theory("V").find("S1")->formula, upto(3));
    CHECK(v.kind == VerdictKind::Holds);
    CHECK(v.scopes == std::vector<int>{1, 2, 3});
    v = check_implies_bounded(corpus_theory("VIII-nostrict"), corpus_theory("V").find("S1")->formula, upto(3));
    REQUIRE(v.kind == VerdictKind::CounterexampleFound);
    CHECK(satisfies(*v.model, corpus_theory("VIII-nostrict")));
    CHECK_FALSE(holds(*v.model, corpus_theory("V").find("S1")->formula));
}

TEST_CASE("existing identity is not reflexive: size-1 countermodel") {
    Verdict v = check_implies_bounded(Theory{}, f("x === x"), upto(3));
    REQUIRE(v.kind == VerdictKind::CounterexampleFound);
    CHECK(v.scope == 1);
    CHECK_FALSE(v.model->exists(0));
}

TEST_CASE("assumptions join the theory") {
    Verdict v = check_implies_bounded(Theory{}, f("E(x)"), upto(2), {f("rall x. E(x)")});
    CHECK(v.kind == VerdictKind::Holds);
}

TEST_CASE("independence of A1 in set VI") {
    Verdict v = check_independence(corpus_theory("VI"), "A1", upto(3));
    REQUIRE(v.kind == VerdictKind::CounterexampleFound);
    CHECK(satisfies(*v.model, corpus_theory("VI").without({"A1"})));
    CHECK_FALSE(holds(*v.model, corpus_theory("VI").find("A1")->formula));
}

TEST_CASE("ground verdicts") {
    Signature s;
    s.declare("a", 0);
    Term a = Term::app("a");
    CHECK(check_ground({s, {exists_atom(a), neg(exists_atom(a))}}).kind == VerdictKind::Refuted);
    Verdict v = check_ground({s, {exists_atom(a)}});
    CHECK(v.kind == VerdictKind::Holds);
    CHECK_FALSE(v.ground_witness.empty());
}

TEST_CASE("diagrammatic translation") {
    CHECK(to_diagrammatic(f("E(x*dom(y))")) == f("E(dom(x)*y)"));
    CHECK(to_diagrammatic(f("E(x*y)")) == f("E(x*y)"));  // swapped, then renamed back
    // variable names follow first occurrence
    CHECK(to_diagrammatic(f("x*dom(x) == x")) == f("dom(x)*x == x"));
    CHECK(to_diagrammatic(f("E(x*y) <-> dom(x) == cod(y)")) == f("E(x*y) <-> cod(x) == dom(y)"));
    Theory d = to_diagrammatic(corpus_theory("VII"));
    CHECK(d.name == "VII-diagrammatic");
    CHECK(to_diagrammatic(d).name == "VII");
}

TEST_CASE("translation is an involution on the corpus") {
    for (const auto& [name, t] : builtin_corpus()) {
        CAPTURE(name);
        Theory back = to_diagrammatic(to_diagrammatic(t));
        REQUIRE(back.axioms.size() == t.axioms.size());
        for (std::size_t i = 0; i < t.axioms.size(); ++i) {
            CAPTURE(t.axioms[i].label);
            CHECK(canonical_var_names(back.axioms[i].formula) == canonical_var_names(t.axioms[i].formula));
        }
    }
}

TEST_CASE("translated VII matches the diagrammatic corpus file") {
    Theory d = to_diagrammatic(corpus_theory("VII"));
    const Theory& file = corpus_theory("VII-diagrammatic");
    REQUIRE(d.axioms.size() == file.axioms.size());
    for (std::size_t i = 0; i < d.axioms.size(); ++i) {
        CAPTURE(d.axioms[i].label);
        CHECK(d.axioms[i].label == file.axioms[i].label);
        CHECK(same_modulo_orientation(d.axioms[i].formula, file.axioms[i].formula));
    }
}

TEST_CASE("property: translation preserves truth under the mirrored composition") {
    gen::Rng r(606);
    for (int i = 0; i < 500; ++i) {
        int n = 1 + r.below(3);
        Interpretation m = gen::interpretation(r, Signature{}, n);
        Interpretation mirror = m;
        for (Element x = 0; x < n; ++x)
            for (Element y = 0; y < n; ++y) mirror.set("comp", {x, y}, m.apply("comp", {y, x}));
        Formula g = gen::formula(r, Signature{}, 4);
        CHECK(holds(m, g) == holds(mirror, to_diagrammatic(g)));
    }
}

TEST_CASE("suite parsing") {
    auto obs = suite(
        "# comment\n"
        "consistency name=A theory=VI side=\"rex x. ~E(x)\" scope=2 expect=holds cite=\"c\"\n"
        "implies name=B theory=VIII goal=V:S1 scope=1..3 expect=holds\n"
        "independent name=C theory=VI goal=A1 expect=counterexample\n"
        "implies name=D theory=VI drop=A2a,A2b goal=A2a expect=holds\n"
        "consistency name=E theory=I sig=C/1 side=\"all x. E(C(x))\" expect=sat\n"
        "ground name=F theory=VII sig=a/0 instances=\"~E(a) ; A3a[x:=a]\" expect=holds\n"
        "open name=G theory=I goal=II expect=open\n");
    REQUIRE(obs.size() == 7);
    CHECK(obs[0].kind == ObligationKind::Consistency);
    CHECK(obs[0].side.size() == 1);
    CHECK(obs[0].scopes == std::vector<int>{1, 2});
    CHECK(obs[0].cite == "c");
    CHECK(obs[1].goal == corpus_theory("V").find("S1")->formula);
    CHECK(obs[1].scopes == std::vector<int>{1, 2, 3});
    CHECK(obs[2].target == "A1");
    CHECK(obs[3].theory.find("A2a") == nullptr);
    CHECK(obs[4].theory.signature.arity("C") == 1);
    CHECK(obs[5].instances.size() == 2);
    CHECK(obs[6].kind == ObligationKind::Open);
}

TEST_CASE("suite errors carry line numbers") {
    auto line_of = [](const std::string& text) {
        try {
            suite(text);
        } catch (const SuiteError& e) {
            return e.line();
        }
        return std::size_t{0};
    };
    CHECK(line_of("\nconsistency name=A theory=NOPE expect=holds\n") == 2);
    CHECK(line_of("consistency name=A theory=I expect=holds bogus=1\n") == 1);
    CHECK(line_of("consistency name=A theory=I expect=holds\nconsistency name=A theory=I expect=holds\n") == 2);
    CHECK(line_of("implies name=A theory=I goal=NOLABEL expect=holds\n") == 1);
    CHECK(line_of("frobnicate name=A theory=I expect=holds\n") == 1);
    CHECK(line_of("consistency name=A theory=I expect=whatever\n") == 1);
    CHECK(line_of("consistency name=A theory=I side=\"E(\" expect=holds\n") == 1);
}

TEST_CASE("suite runs and reports") {
    auto obs = suite(
        "implies name=Z theory=empty goal=\"x === x\" scope=2 expect=counterexample\n"
        "implies name=A theory=empty goal=\"x == x\" scope=2 expect=holds\n"
        "implies name=M theory=empty goal=\"x == x\" scope=2 expect=counterexample\n"
        "open name=O theory=I goal=II expect=open\n");
    SuiteOptions opts;
    SuiteReport r = run_suite(obs, opts);
    REQUIRE(r.results.size() == 4);
    CHECK(r.results[0].name == "A");
    CHECK(r.results[0].status == ResultStatus::Pass);
    CHECK(r.results[1].name == "M");
    CHECK(r.results[1].status == ResultStatus::Fail);
    CHECK(r.results[2].status == ResultStatus::Open);
    CHECK(r.results[3].status == ResultStatus::Pass);
    CHECK(r.count(ResultStatus::Pass) == 2);
    CHECK_FALSE(r.ok());
    std::string json = report_to_json(r, false);
    CHECK(json.find("\"millis\": null") != std::string::npos);
    CHECK(json.find("\"fail\": 1") != std::string::npos);
    opts.jobs = 3;
    CHECK(report_to_json(run_suite(obs, opts), false) == json);
    CHECK(report_to_text(r).find("summary") != std::string::npos);
}

TEST_CASE("resource limits make an obligation inconclusive") {
    auto obs = suite("consistency name=A theory=VII side=\"rex x. ~E(x)\" scope=4..4 expect=refuted\n");
    SuiteOptions opts;
    opts.search.node_limit = 10;
    SuiteReport r = run_suite(obs, opts);
    CHECK(r.results[0].verdict.kind == VerdictKind::Inconclusive);
    CHECK(r.results[0].status == ResultStatus::Inconclusive);
    CHECK_FALSE(r.ok());
}
