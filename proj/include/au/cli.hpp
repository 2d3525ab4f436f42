#pragma once

// Batch commands over theory files. Each returns a JSON report and the exit
// status it calls for; usage and parse problems are thrown (UsageError,
// ParseError, ScopeError) for the caller to turn into status 2.

#include <map>
#include <string>
#include <vector>

#include <json.hpp>

namespace au::cli {

struct Flags {
    std::size_t depth = 5;
    std::size_t fuel = 1000;
    std::size_t instDepth = 3;
    std::size_t jobs = 1;
};

enum Exit : int { Success = 0, ObligationFailed = 1, UsageProblem = 2 };

struct Result {
    nlohmann::ordered_json report;
    int exitCode = Success;
};

/// Every check line of every file, and the term and type axioms of the
/// explicit and internal theories they declare.
Result cmdCheck(const std::vector<std::string>& files, const Flags& flags);

/// The coherence family of an iso theory (the first one declared unless
/// named) over the type corpus of the theory it extends, with the condition
/// checks and the extended theory's equations against its realization.
Result cmdGenIso(const std::string& file, const Flags& flags, const std::string& theory = "");

struct SubspaceOptions {
    std::string action;  // enumerate, lift, slice-compare
    std::string model;   // default: the only model of the theory file
    std::string functor;  // lift: default identity on the model
    std::map<std::string, std::string> alpha;  // lift: constant -> carrier element
    std::vector<std::string> pairs;  // "DOM -> COD"; default: a fixed sample
    std::size_t size = 5;
    std::size_t sliceSize = 9;
};

Result cmdSubspace(const std::string& theoryFile, const std::string& subspaceFile, const SubspaceOptions& opts,
                   const Flags& flags);

/// The report as printed: two-space indented JSON and a final newline.
std::string render(const nlohmann::ordered_json& report);
/// The report without its timing field.
nlohmann::ordered_json withoutTiming(nlohmann::ordered_json report);

}  // namespace au::cli
