#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "au/checker.hpp"
#include "au/error.hpp"
#include "au/format.hpp"
#include "fixtures.hpp"
#include "gen.hpp"

using namespace au;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::vector<fs::path> fixtureFiles() {
    std::vector<fs::path> out;
    for (const auto& e : fs::directory_iterator(AU_FIXTURES))
        if (e.path().extension() == ".au") out.push_back(e.path());
    std::sort(out.begin(), out.end());
    return out;
}

int errorColumn(std::string_view text, int* line = nullptr) {
    try {
        format::parse(text);
    } catch (const ParseError& e) {
        if (line) *line = e.line();
        return e.column();
    }
    return -1;
}

}  // namespace

TEST_CASE("printing a parsed fixture gives back its bytes") {
    auto files = fixtureFiles();
    REQUIRE(files.size() >= 7);
    for (const auto& p : files) {
        CAPTURE(p.filename().string());
        std::string text = slurp(p);
        format::Document d = format::parse(text);
        CHECK(format::print(d) == text);
        CHECK(format::print(format::parse(format::print(d))) == text);
    }
}

TEST_CASE("parsed presentations match the in-memory fixtures") {
    auto walk = format::parseFile(std::string(AU_FIXTURES) + "/walk.au");
    REQUIRE(walk.categories.size() == 1);
    CHECK(walk.categories[0].objects == fixtures::walk().objects);
    REQUIRE(walk.models.size() == 1);
    const auto& wr = walk.models[0];
    auto ref = fixtures::walkReal();
    CHECK(wr.structure.swapPairs);
    CHECK(wr.structure.terminal == "pt");
    CHECK(wr.structure.properTag == "A");
    CHECK(wr.arrows[0].graph == ref.arrows[0].graph);
    CHECK(walk.checks.size() == 5);

    auto fs = format::parseFile(std::string(AU_FIXTURES) + "/functors.au");
    REQUIRE(fs.functors.size() == 2);
    auto wf = fixtures::walkToFin();
    CHECK(fs.functors[0].carriers == wf.carriers);
    CHECK(fs.functors[0].arrows == wf.arrows);
}

TEST_CASE("parse errors carry line and column") {
    int line = 0;
    CHECK(errorColumn("category c\n  object X\n  arrow f X -> X\nend\n", &line) == 11);
    CHECK(line == 3);
    CHECK(errorColumn("category c\n  object X\n") == 1);
    CHECK(errorColumn("theory T = free\n", &line) == 16);
    CHECK(errorColumn("judgement T [x : X] (f x : X\n") == 26);
    CHECK(errorColumn("judgement T [x : X] (sum X X) : Top extra\n") == 31);
    CHECK(errorColumn("frobnicate\n") == 1);
    CHECK(errorColumn("model m\n  object X { 0 }\n  arrow g : X -> X { 0 }\nend\n", &line) == 24);
    CHECK(line == 3);
    CHECK(errorColumn("judgement T [] (eq X) type\n") > 0);
}

TEST_CASE("types and terms round trip up to alpha") {
    testgen::ExprGen gen(7);
    for (int i = 0; i < 300; ++i) {
        Expr ty = gen.type(3, {"v"});
        Expr tm = gen.term(3, {"v", "w"});
        CAPTURE(format::printExpr(ty));
        CHECK(alphaEqual(format::parseType(format::printExpr(ty)), ty));
        CHECK(alphaEqual(format::parseTerm(format::printExpr(tm)), tm));
    }
}

TEST_CASE("binder names that would capture are renamed on print") {
    // (case s x <v> y <x>) where the first branch mentions an outer x
    Expr s = mk::var("s");
    Expr t = mk::caseOf(s, "x", mk::pair(mk::var("x"), mk::var("v")), "x", mk::var("x"));
    Expr outer = substitute(t, "v", mk::var("x"));
    std::string text = format::printExpr(outer);
    CHECK(alphaEqual(format::parseTerm(text), outer));
    CHECK(text.find("(pair x' x)") != std::string::npos);
}

TEST_CASE("reserved words are refused") {
    CHECK_THROWS_AS(format::parseTerm("(fst)"), ParseError);
    CHECK_THROWS_AS(format::parseType("sigma"), ParseError);
    CHECK_THROWS_AS(format::printExpr(mk::proper("sum")), UsageError);
    CHECK_THROWS_AS(format::parseTerm("(case s refl * y y)"), ParseError);
}

TEST_CASE("the workspace builds declared theories") {
    format::Workspace ws(format::parseFile(std::string(AU_FIXTURES) + "/z2.au"), 5);
    const auto& tcat = ws.theory("Tcat");
    CHECK(tcat.properTypes == std::vector<std::string>{"M"});
    const auto& tiso = ws.theory("Tiso");
    CHECK(!tiso.coherence.empty());
    CHECK(ws.generator("Tiso") != nullptr);
    CHECK(ws.generator("Tcat") == nullptr);
    CHECK_THROWS_AS(ws.theory("nope"), ScopeError);

    format::Workspace loop(format::parse("theory A = subspace B with S\n\ntheory B = subspace A with S\n"), 3);
    CHECK_THROWS_AS(loop.theory("A"), ScopeError);

    format::Workspace open(format::parseFile(std::string(AU_FIXTURES) + "/open.au"), 5);
    const auto& an = open.theory("An");
    bool hasN = false;
    for (const auto& d : an.properTerms) hasN = hasN || d.name == "n";
    CHECK(hasN);
}
