#include "doctest.h"
#include "flc/corpus.hpp"
#include "flc/parser.hpp"

using namespace flc;

TEST_CASE("ten built-in theories in a fixed order") {
    const auto& files = corpus_files();
    std::vector<std::string> names;
    for (const auto& f : files) names.push_back(f.name);
    CHECK(names == std::vector<std::string>{"I", "II", "III", "IV", "V", "VI", "VII", "VII-diagrammatic",
                                            "VIII-nostrict", "VIII"});
    for (const auto& f : files) CHECK(f.file_name == f.name + ".fth");
    CHECK(builtin_corpus().size() == 10);
}

TEST_CASE("axiom labels of the corpus") {
    auto labels = [](const char* name) {
        std::vector<std::string> out;
        for (const auto& a : corpus_theory(name).axioms) out.push_back(a.label);
        return out;
    };
    CHECK(labels("I") == std::vector<std::string>{"S_i", "E_i", "A_i", "C_i", "D_i"});
    CHECK(labels("V") == std::vector<std::string>{"S1", "S2", "S3", "S4", "S5", "S6"});
    CHECK(labels("VI") == std::vector<std::string>{"A1", "A2a", "A2b", "A3a", "A3b", "A4a", "A4b", "A5"});
    CHECK(labels("VII") == labels("VI"));
    CHECK(labels("VII-diagrammatic") == labels("VI"));
    CHECK(labels("VIII").front() == "B0a");
    CHECK(labels("VIII-nostrict").size() + 3 == labels("VIII").size());
}

TEST_CASE("corpus uses no user symbols") {
    for (const auto& [name, t] : builtin_corpus()) {
        CAPTURE(name);
        CHECK(t.signature.user_symbols().empty());
        CHECK_NOTHROW(check_well_formed(t));
    }
}

TEST_CASE("set VI and VII differ only in A1") {
    const Theory& vi = corpus_theory("VI");
    const Theory& vii = corpus_theory("VII");
    for (std::size_t i = 0; i < vi.axioms.size(); ++i) {
        CAPTURE(vi.axioms[i].label);
        CHECK((vi.axioms[i].formula == vii.axioms[i].formula) == (vi.axioms[i].label != "A1"));
    }
}

TEST_CASE("unknown names") {
    CHECK_THROWS_AS(corpus_theory("IX"), std::out_of_range);
}

TEST_CASE("the built-in suite text is present") {
    CHECK(paper_suite_text().find("InconsistencyInteractiveVII") != std::string_view::npos);
}
