#include "doctest.h"
#include "flc/ast.hpp"
#include "flc/parser.hpp"
#include "support/generators.hpp"

using namespace flc;

namespace {
Formula f(const char* text, const Signature& sig = {}) { return parse_formula(text, sig); }
}  // namespace

TEST_CASE("signature keeps the built-ins first") {
    Signature s;
    REQUIRE(s.symbols().size() == 3);
    CHECK(s.symbols()[0] == FunctionSymbol{"dom", 1});
    CHECK(s.symbols()[1] == FunctionSymbol{"cod", 1});
    CHECK(s.symbols()[2] == FunctionSymbol{"comp", 2});
    s.declare("C", 1);
    s.declare("a", 0);
    s.declare("C", 1);  // redeclaration is a no-op
    CHECK(s.user_symbols().size() == 2);
    CHECK(s.index_of("a") == 4u);
    CHECK(s.is_constant("a"));
    CHECK_FALSE(s.is_constant("C"));
    CHECK_THROWS_AS(s.declare("C", 2), WellFormednessError);
    CHECK_THROWS_AS(s.declare("dom", 2), WellFormednessError);
}

TEST_CASE("well-formedness rejects arity mismatches and unknown symbols") {
    Signature s;
    CHECK_THROWS_AS(check_well_formed(s, exists_atom(Term::app("dom", {}))), WellFormednessError);
    CHECK_THROWS_AS(check_well_formed(s, exists_atom(Term::app("g", {Term::var("x")}))), WellFormednessError);
    CHECK_NOTHROW(check_well_formed(s, exists_atom(comp(Term::var("x"), dom(Term::var("y"))))));
}

TEST_CASE("theory labels are unique and without() removes by label") {
    Theory t;
    t.add_axiom("A", f("E(x)"));
    t.add_axiom("B", f("x = x"));
    CHECK_THROWS_AS(t.add_axiom("A", f("E(y)")), WellFormednessError);
    Theory u = t.without({"A"});
    REQUIRE(u.axioms.size() == 1);
    CHECK(u.axioms[0].label == "B");
    CHECK_THROWS_AS(t.without({"Z"}), WellFormednessError);
}

TEST_CASE("expand lowers the sugar connectives") {
    CHECK(expand(f("E(x) | E(y)")) == implies(neg(exists_atom(Term::var("x"))), exists_atom(Term::var("y"))));
    CHECK(expand(f("E(x) & E(y)")) ==
          neg(implies(neg(neg(exists_atom(Term::var("x")))), neg(exists_atom(Term::var("y"))))));
    CHECK(expand(f("E(x) <- E(y)")) == expand(f("E(y) -> E(x)")));
    CHECK(expand(f("ex x. E(x)")) == neg(forall_e("x", neg(exists_atom(Term::var("x"))))));
    CHECK(expand(f("rex x. E(x)")) == neg(forall_all("x", neg(exists_atom(Term::var("x"))))));
    CHECK(expand(f("x == y")) == expand(f("(E(x) | E(y)) -> x = y")));
    CHECK(expand(f("x === y")) == expand(f("E(x) & (E(y) & x = y)")));
    CHECK(expand(f("E(x) <-> E(y)")) == expand(f("(E(x) -> E(y)) & (E(y) -> E(x))")));
}

TEST_CASE("I(t) picks a variable not free in t") {
    Formula e = expand(identity(Term::var("x")));
    CHECK(is_core(e));
    CHECK(free_vars(e) == std::set<std::string>{"x"});
    Formula plain = expand(identity(Term::var("i")));
    CHECK(plain == expand(f("(all x. E(i*x) -> i*x == x) & (all x. E(x*i) -> x*i == x)")));
}

TEST_CASE("free variables and closure order") {
    Formula g = f("all y. E(y*x) -> E(z)");
    CHECK(free_vars(g) == std::set<std::string>{"x", "z"});
    Formula c = universal_closure(g);
    REQUIRE(c.kind == FormulaKind::ForallAll);
    CHECK(c.var == "x");
    CHECK(c.subs[0].var == "z");
    CHECK(universal_closure(c) == c);
}

TEST_CASE("substitution avoids capture") {
    Formula g = f("all y. x*y == y");
    Formula s = substitute(g, {{"x", Term::var("y")}});
    CHECK(free_vars(s) == std::set<std::string>{"y"});
    REQUIRE(s.kind == FormulaKind::ForallE);
    CHECK(s.var != "y");
}

TEST_CASE("canonical names compare formulas modulo renaming") {
    CHECK(canonical_var_names(f("all a. E(a*b)")) == canonical_var_names(f("all p. E(p*q)")));
    CHECK(canonical_var_names(f("all a. E(a*b)")) != canonical_var_names(f("all a. E(b*a)")));
    Formula r = rename_all_vars(f("all a. E(a*b)"), {{"a", "u"}, {"b", "v"}});
    CHECK(r == f("all u. E(u*v)"));
}

TEST_CASE("property: expand is idempotent and yields core formulas") {
    gen::Rng r(0xA57);
    Signature sig;
    sig.declare("c", 0);
    for (int i = 0; i < 500; ++i) {
        Formula g = gen::formula(r, sig, 4);
        Formula e = expand(g);
        CHECK(is_core(e));
        CHECK(expand(e) == e);
        CHECK(free_vars(e) == free_vars(g));
    }
}
