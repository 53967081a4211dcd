#include <algorithm>
#include <set>

#include "doctest.h"
#include "flc/corpus.hpp"
#include "flc/groundproof.hpp"
#include "flc/parser.hpp"
#include "support/generators.hpp"
#include "support/oracle.hpp"

using namespace flc;

namespace {

Term a() { return Term::app("a"); }

Signature with_a() {
    Signature s;
    s.declare("a", 0);
    return s;
}

Formula at(const char* set, const char* label, std::map<std::string, Term> subst) {
    return instantiate(corpus_theory(set).find(label)->formula, subst);
}

std::vector<Formula> vii_instances() {
    return {neg(exists_atom(a())), at("VII", "A3a", {{"x", a()}}), at("VII", "A2a", {{"x", a()}}),
            at("VII", "A1", {{"x", a()}, {"y", dom(a())}})};
}

}  // namespace

TEST_CASE("subterm universes") {
    CHECK(subterm_universe({exists_atom(Term::app("c"))}) == std::vector<Term>{Term::app("c")});
    Term x0 = Term::app("x0"), y0 = Term::app("y0"), z0 = Term::app("z0");
    CHECK(subterm_universe({exists_atom(comp(x0, comp(y0, z0)))}).size() == 5);
    auto u = subterm_universe(vii_instances());
    CHECK(u.size() == 4);
    std::set<std::string> names;
    for (const auto& t : u) names.insert(format_term(t));
    CHECK(names == std::set<std::string>{"a", "dom(a)", "cod(dom(a))", "a * dom(a)"});
    // arguments come before the terms that contain them
    CHECK(u[0] == a());
    CHECK(u[1] == dom(a()));
}

TEST_CASE("valuation counts") {
    CHECK(enumerate_congruence_valuations({Term::app("c")}).size() == 2);
    CHECK(enumerate_congruence_valuations({a(), dom(a())}).size() == 6);
    Term b = Term::app("b");
    std::vector<Term> u = {a(), b, Term::app("f", {a()}), Term::app("f", {b})};
    auto all = enumerate_congruence_valuations(u);
    for (const auto& v : all) {
        CHECK(respects_congruence(u, v));
        if (v.class_of[0] == v.class_of[1]) CHECK(v.class_of[2] == v.class_of[3]);
    }
    // independent count: restricted-growth strings over the four terms,
    // dropping those that merge a and b but not f(a) and f(b)
    std::size_t expected = 0, expected_partitions = 0;
    for (int p1 = 0; p1 <= 1; ++p1)
        for (int p2 = 0; p2 <= std::max(0, p1) + 1; ++p2)
            for (int p3 = 0; p3 <= std::max({0, p1, p2}) + 1; ++p3) {
                if (p1 == 0 && p2 != p3) continue;
                int classes = std::max({0, p1, p2, p3}) + 1;
                expected += std::size_t{1} << classes;
                ++expected_partitions;
            }
    std::set<std::vector<int>> partitions;
    for (const auto& v : all) partitions.insert(v.class_of);
    CHECK(partitions.size() == expected_partitions);
    CHECK(expected_partitions == 12);  // Bell(4) = 15, minus 3 that merge a, b only
    CHECK(all.size() == expected);
}

TEST_CASE("the visitor can stop early") {
    int seen = 0;
    for_each_congruence_valuation({a(), dom(a())}, [&](const CongruenceValuation&) { return ++seen == 3; });
    CHECK(seen == 3);
}

TEST_CASE("ground refutation of the collapse argument") {
    GroundResult r = ground_refute({with_a(), vii_instances()});
    CHECK(r.unsat);
    CHECK_FALSE(r.witness);
    // each non-negated instance is needed
    for (std::size_t drop = 1; drop < 4; ++drop) {
        auto inst = vii_instances();
        inst.erase(inst.begin() + static_cast<std::ptrdiff_t>(drop));
        GroundResult s = ground_refute({with_a(), inst});
        CAPTURE(drop);
        CHECK_FALSE(s.unsat);
        REQUIRE(s.witness);
        for (const auto& f : inst) CHECK(eval_ground(s.universe, *s.witness, f));
    }
}

TEST_CASE("ground refutation of the diagrammatic collapse argument") {
    std::vector<Formula> inst = {neg(exists_atom(a())), at("VII-diagrammatic", "A3a", {{"x", a()}}),
                                 at("VII-diagrammatic", "A2a", {{"x", a()}}),
                                 at("VII-diagrammatic", "A1", {{"x", dom(a())}, {"y", a()}})};
    CHECK(ground_refute({with_a(), inst}).unsat);
}

TEST_CASE("small ground problems") {
    CHECK(ground_refute({with_a(), {exists_atom(a()), neg(exists_atom(a()))}}).unsat);
    GroundResult s = ground_refute({with_a(), {neg(exists_atom(a())), at("VII", "A3a", {{"x", a()}})}});
    CHECK_FALSE(s.unsat);
    REQUIRE(s.witness);
    CHECK_FALSE(format_valuation(s.universe, *s.witness).empty());
}

TEST_CASE("non-ground input is rejected") {
    CHECK_THROWS_AS(ground_refute({Signature{}, {exists_atom(Term::var("x"))}}), std::invalid_argument);
    CHECK_THROWS_AS(ground_refute({with_a(), {forall_e("x", exists_atom(Term::var("x")))}}), std::invalid_argument);
    CHECK_THROWS_AS(instantiate(corpus_theory("VII").find("A1")->formula, {{"x", a()}}), std::invalid_argument);
}

TEST_CASE("unsat soundness against the semantics") {
    // every interpretation with an element whose flag is false falsifies one
    // of the instances: exhaustive up to size 2, random at sizes 3 and 4
    Theory vii = corpus_theory("VII");
    auto refuted_at = [&](const Interpretation& m) {
        for (Element e = 0; e < m.size(); ++e) {
            if (m.exists(e)) continue;
            Valuation v{{"x", e}, {"y", m.apply("dom", {e})}};
            bool all = oracle::eval(m, v, vii.find("A3a")->formula) && oracle::eval(m, v, vii.find("A1")->formula) &&
                       oracle::eval(m, v, vii.find("A2a")->formula);
            CHECK_FALSE(all);
        }
    };
    for (int n = 1; n <= 2; ++n)
        oracle::for_each_interpretation(vii.signature, n, [&](const Interpretation& m) {
            refuted_at(m);
            return false;
        });
    gen::Rng r(3);
    for (int i = 0; i < 20000; ++i) refuted_at(gen::interpretation(r, vii.signature, 3 + r.below(2)));
}
