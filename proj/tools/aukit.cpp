// aukit: batch commands over theory files.
//
//   aukit check FILE...                      every judgement, equality and axiom
//   aukit geniso FILE [--theory T]           coherence family of an iso theory
//   aukit subspace THEORY S ACTION           enumerate | lift | slice-compare
//
// Reports are JSON on stdout (or --report FILE). Exit status: 0 when every
// obligation holds, 1 when one fails, 2 on a usage or parse error.

#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>

#include "au/cli.hpp"
#include "au/error.hpp"

namespace {

void fromEnv(const char* var, std::size_t& into) {
    if (const char* v = std::getenv(var)) {
        try {
            into = std::stoul(v);
        } catch (const std::exception&) {
            throw au::UsageError(std::string(var) + " is not a number: " + v);
        }
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"aukit: checking, coherence generation and subspaces for AU theories"};
    app.require_subcommand(1);
    app.fallthrough();

    au::cli::Flags flags;
    try {
        fromEnv("AUKIT_DEPTH", flags.depth);
        fromEnv("AUKIT_FUEL", flags.fuel);
        fromEnv("AUKIT_INST_DEPTH", flags.instDepth);
        fromEnv("AUKIT_JOBS", flags.jobs);
    } catch (const au::UsageError& e) {
        std::cerr << "aukit: " << e.what() << "\n";
        return au::cli::UsageProblem;
    }
    std::string reportPath;
    app.add_option("--depth", flags.depth, "evaluation depth")->capture_default_str();
    app.add_option("--fuel", flags.fuel, "rewrite steps per normalization")->capture_default_str();
    app.add_option("--inst-depth", flags.instDepth, "axiom instantiation depth")->capture_default_str();
    app.add_option("--jobs", flags.jobs, "worker threads")->capture_default_str();
    app.add_option("--report", reportPath, "write the report here instead of stdout");

    std::vector<std::string> files;
    auto* check = app.add_subcommand("check", "check every obligation of the files");
    check->add_option("files", files, "theory files")->required()->check(CLI::ExistingFile);

    std::string isoFile, isoTheory;
    auto* geniso = app.add_subcommand("geniso", "generate and verify coherent isomorphisms");
    geniso->add_option("file", isoFile, "theory file")->required()->check(CLI::ExistingFile);
    geniso->add_option("--theory", isoTheory, "iso theory to generate (default: the first)");

    std::string theoryFile, subspaceFile;
    std::vector<std::string> alpha;
    au::cli::SubspaceOptions sub;
    auto* subspace = app.add_subcommand("subspace", "open subspaces and their lifts");
    subspace->add_option("theory", theoryFile, "file with the model")->required()->check(CLI::ExistingFile);
    subspace->add_option("axioms", subspaceFile, "file with the subspace")->required()->check(CLI::ExistingFile);
    subspace->add_option("action", sub.action, "enumerate, lift or slice-compare")
        ->required()
        ->check(CLI::IsMember({"enumerate", "lift", "slice-compare"}));
    subspace->add_option("--model", sub.model, "model of the theory file");
    subspace->add_option("--functor", sub.functor, "functor to lift (default: identity)");
    subspace->add_option("--alpha", alpha, "NAME=ELEMENT for each constant");
    subspace->add_option("--pair", sub.pairs, "object pair 'DOM -> COD'");
    subspace->add_option("--size", sub.size, "term size bound")->capture_default_str();
    subspace->add_option("--slice-size", sub.sliceSize, "slice term size bound")->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : au::cli::UsageProblem;
    }

    au::cli::Result res;
    try {
        if (check->parsed()) {
            res = au::cli::cmdCheck(files, flags);
        } else if (geniso->parsed()) {
            res = au::cli::cmdGenIso(isoFile, flags, isoTheory);
        } else {
            for (const auto& kv : alpha) {
                auto eq = kv.find('=');
                if (eq == std::string::npos) throw au::UsageError("--alpha expects NAME=ELEMENT, got " + kv);
                sub.alpha[kv.substr(0, eq)] = kv.substr(eq + 1);
            }
            res = au::cli::cmdSubspace(theoryFile, subspaceFile, sub, flags);
        }
    } catch (const au::ParseError& e) {
        std::cerr << "aukit: parse error: " << e.what() << "\n";
        return au::cli::UsageProblem;
    } catch (const au::UsageError& e) {
        std::cerr << "aukit: " << e.what() << "\n";
        return au::cli::UsageProblem;
    } catch (const au::ScopeError& e) {
        std::cerr << "aukit: " << e.what() << "\n";
        return au::cli::UsageProblem;
    } catch (const au::Error& e) {
        std::cerr << "aukit: " << e.what() << "\n";
        return au::cli::ObligationFailed;
    }

    std::string out = au::cli::render(res.report);
    if (reportPath.empty()) {
        std::cout << out;
    } else {
        std::ofstream f(reportPath, std::ios::binary);
        if (!f) {
            std::cerr << "aukit: cannot write " << reportPath << "\n";
            return au::cli::UsageProblem;
        }
        f << out;
    }
    return res.exitCode;
}
