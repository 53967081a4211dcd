#include <set>

#include "doctest.h"
#include "flc/corpus.hpp"
#include "flc/parser.hpp"
#include "flc/search.hpp"
#include "support/generators.hpp"
#include "support/oracle.hpp"

using namespace flc;

namespace {

Theory th(const char* text) { return parse_theory(text); }

SearchConfig scopes(std::vector<int> s) {
    SearchConfig c;
    c.scopes = std::move(s);
    return c;
}

}  // namespace

TEST_CASE("scope ranges") {
    CHECK(parse_scope_range("3") == std::vector<int>{1, 2, 3});
    CHECK(parse_scope_range("2..4") == std::vector<int>{2, 3, 4});
    CHECK(parse_scope_range("5..5") == std::vector<int>{5});
    CHECK_THROWS_AS(parse_scope_range("0"), std::invalid_argument);
    CHECK_THROWS_AS(parse_scope_range("3..2"), std::invalid_argument);
    CHECK_THROWS_AS(parse_scope_range("1..65"), std::invalid_argument);
    CHECK_THROWS_AS(parse_scope_range("x"), std::invalid_argument);
    CHECK(SearchConfig::up_to(2).scopes == std::vector<int>{1, 2});
}

TEST_CASE("model counts of tiny theories") {
    CHECK(enumerate_models(th("theory Empty\n"), 1, 100).size() == 2);
    Theory c = th("theory C\nsig c/0\naxiom K: E(c)\n");
    auto models = enumerate_models(c, 1, 100);
    REQUIRE(models.size() == 1);
    CHECK(models[0].exists(0));
    // one flag, two unary tables, one binary table: 4 * 2^8 at size 2
    CHECK(count_models(th("theory Empty\n"), {}, 2, false) == 1024);
}

TEST_CASE("the first model is the canonical smallest one") {
    SearchOutcome o = find_model(corpus_theory("I"), {}, scopes({1, 2}));
    REQUIRE(o.sat());
    CHECK(o.scope == 1);
    CHECK(o.model->existing().empty());
    Formula ne = parse_formula("rex x. ~E(x)", Signature{});
    Formula some = parse_formula("rex x. E(x)", Signature{});
    o = find_model(corpus_theory("VI"), {ne, some}, scopes({1, 2}));
    REQUIRE(o.sat());
    CHECK(o.scope == 2);
    CHECK(satisfies(*o.model, corpus_theory("VI")));
    CHECK(o.model->exists(0));
    CHECK_FALSE(o.model->exists(1));
}

TEST_CASE("unsat reports every exhausted scope") {
    Theory t = th("theory T\naxiom A: E(x)\naxiom B: ~E(dom(x))\n");
    SearchOutcome o = find_model(t, {}, scopes({1, 2, 3}));
    CHECK(o.unsat());
    CHECK(o.refuted_scopes == std::vector<int>{1, 2, 3});
    CHECK_FALSE(o.model);
}

TEST_CASE("a node limit yields a resource-limit outcome") {
    SearchConfig c = scopes({4});
    c.node_limit = 50;
    Formula ne = parse_formula("rex x. ~E(x)", Signature{});
    SearchOutcome o = find_model(corpus_theory("VII"), {ne}, c);
    CHECK(o.status == SearchOutcome::Status::ResourceLimit);
    CHECK(o.scope == 4);
    CHECK_FALSE(o.limit_reason.empty());
}

TEST_CASE("a corpus theory agrees with brute force at n <= 2") {
    for (const auto& [name, t] : builtin_corpus()) {
        for (int n = 1; n <= 2; ++n) {
            CAPTURE(name);
            CAPTURE(n);
            std::uint64_t expected = oracle::count_models(t, {}, n);
            CHECK(count_models(t, {}, n, false) == expected);
            CHECK(count_models(t, {}, n, false, CellOrder::ElementMajor) == expected);
            CHECK(find_model(t, {}, scopes({n})).sat() == (expected > 0));
        }
    }
}

TEST_CASE("property: random theories agree with brute force") {
    gen::Rng r(20240601);
    int sat = 0;
    for (int i = 0; i < 120; ++i) {
        Theory t = gen::theory(r, 3, 3);
        for (int n = 1; n <= 2; ++n) {
            std::uint64_t expected = oracle::count_models(t, {}, n);
            CAPTURE(pretty_print(t));
            CAPTURE(n);
            CHECK(count_models(t, {}, n, false) == expected);
            SearchOutcome o = find_model(t, {}, scopes({n}));
            CHECK(o.sat() == (expected > 0));
            if (o.sat()) {
                CHECK(oracle::satisfies(*o.model, t));
                ++sat;
            }
        }
    }
    CHECK(sat > 20);
}

TEST_CASE("property: symmetry breaking keeps exactly one representative per flag count") {
    gen::Rng r(31337);
    for (int i = 0; i < 60; ++i) {
        Theory t = gen::theory(r, 2, 3);
        for (int n = 1; n <= 2; ++n) {
            auto all = enumerate_models(t, {}, n, 100000, false);
            auto canon = enumerate_models(t, {}, n, 100000, true);
            CHECK(canon.size() <= all.size());
            CHECK(canon.empty() == all.empty());
            for (const auto& m : canon) {
                // existence set is a prefix
                auto e = m.existing();
                for (std::size_t k = 0; k < e.size(); ++k) CHECK(e[k] == static_cast<Element>(k));
            }
            // every flag count seen among all models also appears among the canonical ones
            std::set<std::size_t> counts_all, counts_canon;
            for (const auto& m : all) counts_all.insert(m.existing().size());
            for (const auto& m : canon) counts_canon.insert(m.existing().size());
            CHECK(counts_all == counts_canon);
        }
    }
}

TEST_CASE("side constraints are honoured") {
    Formula ne = parse_formula("rex x. ~E(x)", Signature{});
    Theory vi = corpus_theory("VI");
    SearchOutcome o = find_model(vi, {ne}, scopes({1, 2}));
    REQUIRE(o.sat());
    CHECK(holds(*o.model, ne));
    CHECK(oracle::first_model_scope(vi, {ne}, {1, 2}) == o.scope);
}

TEST_CASE("parallel search agrees on the verdict") {
    SearchConfig c = scopes({1, 2, 3});
    c.parallel = true;
    c.jobs = 4;
    Formula ne = parse_formula("rex x. ~E(x)", Signature{});
    CHECK(find_model(corpus_theory("VII"), {ne}, c).unsat());
    SearchOutcome o = find_model(corpus_theory("VI"), {ne}, c);
    REQUIRE(o.sat());
    CHECK(satisfies(*o.model, corpus_theory("VI")));
    CHECK(holds(*o.model, ne));
}

TEST_CASE("element-major order finds the same verdicts") {
    SearchConfig c = scopes({1, 2, 3});
    c.order = CellOrder::ElementMajor;
    Formula ne = parse_formula("rex x. ~E(x)", Signature{});
    CHECK(find_model(corpus_theory("VII"), {ne}, c).unsat());
    CHECK(find_model(corpus_theory("VIII"), {ne}, c).sat());
}
