#include <doctest.h>

#include <cstdlib>
#include <fstream>
#include <sys/wait.h>

#include "au/cli.hpp"
#include "au/error.hpp"

using namespace au;

namespace {

std::string fixture(const std::string& name) { return std::string(AU_FIXTURES) + "/" + name; }

cli::Flags quick() {
    cli::Flags f;
    f.depth = 3;
    return f;
}

}  // namespace

TEST_CASE("check on the fixtures") {
    for (const char* f : {"empty.au", "walk.au", "z2.au", "mfin.au", "open.au"}) {
        CAPTURE(f);
        cli::Result r = cli::cmdCheck({fixture(f)}, cli::Flags{});
        CHECK(r.exitCode == cli::Success);
        CHECK(r.report["ok"] == true);
        CHECK(r.report["summary"]["failed"] == 0);
    }
    cli::Result z2 = cli::cmdCheck({fixture("z2.au")}, cli::Flags{});
    for (const auto& o : z2.report["obligations"]) CHECK(o["verdict"] == "Proved");
}

TEST_CASE("a wrong axiom is located") {
    cli::Result r = cli::cmdCheck({fixture("bad.au")}, cli::Flags{});
    CHECK(r.exitCode == cli::ObligationFailed);
    std::size_t refuted = 0;
    for (const auto& o : r.report["obligations"]) {
        if (o["verdict"] != "Refuted") continue;
        ++refuted;
        CHECK(o["name"] == "mid");
        CHECK(o["line"] == 15);
        CHECK(o["file"] == "bad.au");
        CHECK(o.contains("counterexample"));
    }
    CHECK(refuted == 1);
}

TEST_CASE("reports are deterministic") {
    std::vector<std::string> files{fixture("walk.au"), fixture("z2.au"), fixture("bad.au")};
    cli::Flags one;
    cli::Flags four;
    four.jobs = 4;
    std::string a = cli::render(cli::withoutTiming(cli::cmdCheck(files, one).report));
    std::string b = cli::render(cli::withoutTiming(cli::cmdCheck(files, one).report));
    std::string c = cli::render(cli::withoutTiming(cli::cmdCheck(files, four).report));
    CHECK(a == b);
    CHECK(a == c);
    CHECK(cli::render(cli::cmdCheck(files, one).report).find("\"timing\"") != std::string::npos);
}

TEST_CASE("parse errors and unknown names are usage problems") {
    std::string path = "aukit_broken.au";
    std::ofstream(path) << "category c\n  arrow f X -> X\nend\n";
    CHECK_THROWS_AS(cli::cmdCheck({path}, cli::Flags{}), ParseError);
    std::ofstream(path) << "judgement Nope [] * : Top\n";
    CHECK_THROWS_AS(cli::cmdCheck({path}, cli::Flags{}), ScopeError);
    CHECK_THROWS_AS(cli::cmdGenIso(fixture("mfin.au"), quick()), UsageError);
    std::remove(path.c_str());
}

TEST_CASE("geniso") {
    cli::Result walk = cli::cmdGenIso(fixture("walk.au"), quick());
    CHECK(walk.exitCode == cli::Success);
    CHECK(walk.report["summary"]["failed-conditions"] == 0);
    CHECK(walk.report["summary"]["failed-axioms"] == 0);
    CHECK(walk.report["conditions"].size() == walk.report["corpus"].get<std::size_t>() * 5);

    cli::Result z2 = cli::cmdGenIso(fixture("z2.au"), quick());
    CHECK(z2.exitCode == cli::Success);
    std::size_t eq = 0;
    for (const auto& c : z2.report["components"]) eq += c["rule"] == "equalizer";
    CHECK(eq > 0);

    cli::Result empty = cli::cmdGenIso(fixture("empty.au"), quick());
    CHECK(empty.exitCode == cli::Success);
    for (const auto& c : empty.report["components"]) CHECK(c["rule"] != "proper");
}

TEST_CASE("subspace actions") {
    cli::SubspaceOptions opts;
    opts.action = "enumerate";
    opts.pairs = {"Top -> Y", "X -> Y"};
    cli::Result en = cli::cmdSubspace(fixture("open.au"), fixture("open.au"), opts, quick());
    REQUIRE(en.report["homs"].size() == 2);
    CHECK(en.report["homs"][0]["before"]["classes"] == 0);
    CHECK(en.report["homs"][0]["after"]["classes"] == 1);
    CHECK(en.report["homs"][0]["after"]["representatives"][0] == "(n)");

    opts.action = "slice-compare";
    opts.pairs.clear();
    cli::Result sc = cli::cmdSubspace(fixture("open.au"), fixture("open.au"), opts, quick());
    CHECK(sc.exitCode == cli::Success);
    CHECK(sc.report["pairs"].size() >= 5);

    opts.action = "lift";
    CHECK_THROWS_AS(cli::cmdSubspace(fixture("open.au"), fixture("open.au"), opts, quick()), UsageError);
    opts.alpha["n"] = "b";
    cli::Result li = cli::cmdSubspace(fixture("open.au"), fixture("open.au"), opts, quick());
    CHECK(li.exitCode == cli::Success);
    CHECK(li.report["constants"][0]["value"] == "b");

    opts.alpha["n"] = "nowhere";
    CHECK(cli::cmdSubspace(fixture("open.au"), fixture("open.au"), opts, quick()).exitCode == cli::ObligationFailed);

    opts.action = "frobnicate";
    CHECK_THROWS_AS(cli::cmdSubspace(fixture("open.au"), fixture("open.au"), opts, quick()), UsageError);
}

#ifdef AUKIT_BIN
TEST_CASE("exit status of the tool") {
    auto run = [](const std::string& args) {
        int rc = std::system((std::string(AUKIT_BIN) + " " + args + " > /dev/null 2>&1").c_str());
        return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
    };
    CHECK(run("check " + fixture("z2.au")) == 0);
    CHECK(run("check " + fixture("bad.au")) == 1);
    CHECK(run("check " + fixture("z2.au") + " " + fixture("bad.au")) == 1);
    CHECK(run("check") == 2);
    CHECK(run("check /no/such/file.au") == 2);
    CHECK(run("subspace " + fixture("open.au") + " " + fixture("open.au") + " lift") == 2);
    CHECK(run("--depth 3 subspace " + fixture("open.au") + " " + fixture("open.au") + " lift --alpha n=b") == 0);
    int rc = std::system(("AUKIT_DEPTH=x " + std::string(AUKIT_BIN) + " check " + fixture("z2.au") + " > /dev/null 2>&1").c_str());
    CHECK(WEXITSTATUS(rc) == 2);
    std::string out = "aukit_env_report.json";
    rc = std::system(("AUKIT_DEPTH=2 " + std::string(AUKIT_BIN) + " check " + fixture("z2.au") + " --report " + out).c_str());
    CHECK(WEXITSTATUS(rc) == 0);
    std::ifstream in(out);
    std::string all((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    CHECK(all.find("\"depth\": 2") != std::string::npos);
    std::remove(out.c_str());
}
#endif
