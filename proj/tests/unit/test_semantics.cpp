#include <functional>

#include "doctest.h"
#include "flc/parser.hpp"
#include "flc/semantics.hpp"
#include "support/generators.hpp"
#include "support/oracle.hpp"

using namespace flc;

namespace {

Formula f(const char* text) { return parse_formula(text, Signature{}); }

// Calls fn on every assignment of kVars into {0..n-1}.
void for_each_valuation(int n, const std::function<void(const Valuation&)>& fn) {
    Valuation v;
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
            for (int c = 0; c < n; ++c) {
                v["x"] = a, v["y"] = b, v["z"] = c;
                fn(v);
            }
}

// Exists-flag models only matter for the equality laws; use all of n <= 2
// exhaustively and random ones above.
void for_models(const std::function<void(const Interpretation&)>& fn) {
    for (int n = 1; n <= 2; ++n)
        oracle::for_each_interpretation(Signature{}, n, [&](const Interpretation& m) {
            fn(m);
            return false;
        });
    gen::Rng r(1234);
    for (int i = 0; i < 300; ++i) fn(gen::interpretation(r, Signature{}, 3 + r.below(2)));
}

void check_law(const char* law) {
    Formula g = expand(f(law));
    for_models([&](const Interpretation& m) {
        for_each_valuation(m.size(), [&](const Valuation& v) {
            CAPTURE(law);
            CHECK(eval_formula(m, v, g));
        });
    });
}

// Some completion of p, chosen at random.
Interpretation complete(gen::Rng& r, const PartialInterpretation& p) {
    Interpretation m(p.signature(), p.size());
    for (int e = 0; e < p.size(); ++e) m.set_exists(e, p.exists(e).value_or(r.chance(50)));
    for (std::size_t s = 0; s < p.signature().symbols().size(); ++s)
        for (std::size_t i = 0; i < p.table(s).size(); ++i) {
            Element c = p.table(s)[i];
            m.table(s)[i] = c == PartialInterpretation::kUnassigned ? r.below(p.size()) : c;
        }
    return m;
}

// Every completion of p (small p only).
void for_each_completion(const PartialInterpretation& p, const std::function<void(const Interpretation&)>& fn) {
    oracle::for_each_interpretation(p.signature(), p.size(), [&](const Interpretation& m) {
        for (int e = 0; e < p.size(); ++e)
            if (p.exists(e) && *p.exists(e) != m.exists(e)) return false;
        for (std::size_t s = 0; s < p.signature().symbols().size(); ++s)
            for (std::size_t i = 0; i < p.table(s).size(); ++i)
                if (p.table(s)[i] != PartialInterpretation::kUnassigned && p.table(s)[i] != m.table(s)[i])
                    return false;
        fn(m);
        return false;
    });
}

}  // namespace

TEST_CASE("table layout is row-major") {
    std::vector<Element> args = {1, 0};
    CHECK(table_index(args, 3) == 3);
    CHECK(table_cells(2, 3) == 9);
    CHECK(table_cells(0, 3) == 1);
}

TEST_CASE("guarded quantifiers range over existing elements") {
    Interpretation m(Signature{}, 2);
    m.set_exists(1, true);
    CHECK(holds(m, f("all x. E(x)")));
    CHECK_FALSE(holds(m, f("rall x. E(x)")));
    CHECK(holds(m, f("rex x. ~E(x)")));
    CHECK_FALSE(holds(m, f("ex x. ~E(x)")));
    Interpretation empty(Signature{}, 1);
    CHECK(holds(empty, f("all x. x = dom(x) & ~E(x)")));
    CHECK_FALSE(holds(empty, f("ex x. x = x")));
}

TEST_CASE("free variables are read under raw closure") {
    Interpretation m(Signature{}, 2);
    m.set_exists(0, true);
    CHECK_FALSE(holds(m, f("E(x)")));
    CHECK(holds(m, f("E(x) -> x = dom(x)")));  // dom is constantly 0
}

TEST_CASE("Kleene and existing identity on a two-element model") {
    Interpretation m(Signature{}, 2);
    m.set_exists(0, true);
    Valuation v{{"x", 1}, {"y", 1}};
    CHECK(eval_formula(m, v, expand(f("x == y"))));
    CHECK_FALSE(eval_formula(m, v, expand(f("x === y"))));
    v = {{"x", 0}, {"y", 1}};
    CHECK_FALSE(eval_formula(m, v, expand(f("x == y"))));
    v = {{"x", 0}, {"y", 0}};
    CHECK(eval_formula(m, v, expand(f("x === y"))));
}

TEST_CASE("property: Kleene equality is an equivalence") {
    check_law("x == x");
    check_law("x == y -> y == x");
    check_law("x == y & y == z -> x == z");
}

TEST_CASE("property: existing identity is symmetric, transitive and implies Kleene equality") {
    check_law("x === y -> y === x");
    check_law("x === y & y === z -> x === z");
    check_law("x === y -> x == y");
}

TEST_CASE("existing identity is not reflexive") {
    Interpretation m(Signature{}, 1);
    CHECK_FALSE(holds(m, f("x === x")));
}

TEST_CASE("property: core evaluation agrees with the oracle") {
    gen::Rng r(99);
    Signature sig;
    sig.declare("c", 0);
    for (int i = 0; i < 3000; ++i) {
        int n = 1 + r.below(4);
        Interpretation m = gen::interpretation(r, sig, n);
        Formula g = gen::formula(r, sig, 4);
        Valuation v = gen::valuation(r, n);
        CHECK(eval_formula(m, v, expand(g)) == oracle::eval(m, v, g));
    }
}

TEST_CASE("property: eval_partial is sound, exhaustively at n <= 2") {
    gen::Rng r(4242);
    for (int i = 0; i < 400; ++i) {
        int n = 1 + r.below(2);
        Interpretation full = gen::interpretation(r, Signature{}, n);
        PartialInterpretation p = gen::forget(r, full, 40);
        Formula g = expand(gen::formula(r, Signature{}, 3, true));
        Valuation v = gen::valuation(r, n);
        Truth t = eval_partial(p, v, g);
        if (t == Truth::Unknown) continue;
        for_each_completion(p, [&](const Interpretation& m) { CHECK(eval_formula(m, v, g) == (t == Truth::True)); });
    }
}

TEST_CASE("property: eval_partial is sound, randomized at n <= 4") {
    gen::Rng r(777);
    int definite = 0;
    for (int i = 0; i < 2000; ++i) {
        int n = 1 + r.below(4);
        Interpretation full = gen::interpretation(r, Signature{}, n);
        PartialInterpretation p = gen::forget(r, full, 30);
        Formula g = expand(gen::formula(r, Signature{}, 4, true));
        Valuation v = gen::valuation(r, n);
        Truth t = eval_partial(p, v, g);
        if (t == Truth::Unknown) continue;
        ++definite;
        CHECK(eval_formula(full, v, g) == (t == Truth::True));
        for (int k = 0; k < 5; ++k) CHECK(eval_formula(complete(r, p), v, g) == (t == Truth::True));
    }
    CHECK(definite > 200);
}

TEST_CASE("eval_partial on a complete interpretation is two-valued") {
    gen::Rng r(5);
    for (int i = 0; i < 500; ++i) {
        int n = 1 + r.below(3);
        Interpretation m = gen::interpretation(r, Signature{}, n);
        Formula g = expand(gen::formula(r, Signature{}, 4, true));
        Valuation v = gen::valuation(r, n);
        CHECK(eval_partial(PartialInterpretation(m), v, g) == (eval_formula(m, v, g) ? Truth::True : Truth::False));
    }
}

TEST_CASE("format_model and parse_model are inverse") {
    gen::Rng r(8);
    Signature sig;
    sig.declare("C", 1);
    sig.declare("a", 0);
    for (int i = 0; i < 200; ++i) {
        Interpretation m = gen::interpretation(r, sig, 1 + r.below(4));
        CHECK(parse_model(format_model(m), sig) == m);
    }
    CHECK_THROWS_AS(parse_model("size=2 E={5}\n", Signature{}), std::invalid_argument);
}

TEST_CASE("partial interpretations track completeness") {
    PartialInterpretation p(Signature{}, 1);
    CHECK_FALSE(p.complete());
    p.set_exists(0, true);
    for (std::size_t s = 0; s < 3; ++s) p.table(s)[0] = 0;
    REQUIRE(p.complete());
    Interpretation m = p.to_interpretation();
    CHECK(m.exists(0));
    CHECK(m.apply("comp", {0, 0}) == 0);
}
