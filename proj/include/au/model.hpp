#pragma once

// SetEval: depth-indexed evaluation of types and terms into finite sets of
// values. Lists are enumerated up to length `depth`, so every verdict is
// relative to the depth it was computed at.

#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "au/syntax.hpp"
#include "au/theory.hpp"
#include "au/value.hpp"

namespace au {

/// Sorted, duplicate-free enumeration of a type at some depth.
struct EnumSet {
    std::vector<Value> elems;

    static EnumSet of(std::vector<Value> xs);
    bool contains(const Value& v) const;
    std::size_t size() const { return elems.size(); }
};

using Env = std::vector<std::pair<std::string, Value>>;

/// A computable map, compared extensionally on its domain enumeration.
struct CompMap {
    EnumSet domain;
    std::function<Value(const Value&)> fn;
};

struct SampleVerdict {
    enum class Status { AgreeAtDepth, CounterexampleFound };
    Status status = Status::AgreeAtDepth;
    std::size_t depth = 0;
    std::size_t samples = 0;
    std::optional<Value> witness;  // argument where the maps differ
    std::string detail;

    bool agree() const { return status == Status::AgreeAtDepth; }
};

SampleVerdict morphismsEqualOnSamples(const CompMap& f, const CompMap& g, std::size_t depth);

class Evaluator {
public:
    using TermFn = std::function<Value(const std::vector<Value>&)>;
    using MapFn = std::function<Value(const Value&)>;

    /// `model` may be null: then only explicitly defined proper symbols evaluate.
    Evaluator(const ModelPresentation* model, Structure structure, std::size_t depth,
              std::size_t enumCap = 250000);

    const Structure& structure() const { return structure_; }
    std::size_t depth() const { return depth_; }
    const ModelPresentation* model() const { return model_; }

    void defineType(const std::string& name, std::vector<Value> carrier);
    void defineTerm(const std::string& name, TermFn fn);
    void defineIso(const std::string& key, MapFn forward, MapFn inverse);
    bool hasTerm(const std::string& name) const;

    EnumSet evalType(const Expr& type, const Env& env = {}) const;
    Value evalTerm(const Expr& term, const Env& env = {}) const;
    /// Whether the type is inhabited (cheaper than enumerating it for Eq).
    bool inhabited(const Expr& type, const Env& env = {}) const;

    /// All environments of a context, each entry ranging over its evaluated type.
    std::vector<Env> enumerateContext(const Context& ctx) const;

    /// The map x |-> t for a one-variable context.
    CompMap termMap(const Binding& var, const Expr& term) const;

    /// Compares two terms in every environment of the context.
    SampleVerdict agreeOn(const Context& ctx, const Expr& t, const Expr& u) const;

private:
    const ModelPresentation* model_;
    Structure structure_;
    std::size_t depth_;
    std::size_t cap_;
    std::map<std::string, std::vector<Value>> types_;
    std::map<std::string, TermFn> terms_;
    std::map<std::string, std::pair<MapFn, MapFn>> isos_;

    struct Cache {
        std::mutex mutex;
        std::map<std::string, std::shared_ptr<const EnumSet>> types;
        std::map<std::string, std::shared_ptr<const std::map<Value, Value>>> quotients;
    };
    // copies start with an empty cache
    struct CacheSlot {
        std::unique_ptr<Cache> ptr = std::make_unique<Cache>();
        CacheSlot() = default;
        CacheSlot(const CacheSlot&) : ptr(std::make_unique<Cache>()) {}
        CacheSlot(CacheSlot&&) noexcept = default;
        CacheSlot& operator=(const CacheSlot&) {
            ptr = std::make_unique<Cache>();
            return *this;
        }
        CacheSlot& operator=(CacheSlot&&) noexcept = default;
    };
    CacheSlot cache_;

    EnumSet typeImpl(const Expr& b, const Env& env, std::vector<Value>& bound) const;
    Value termImpl(const Expr& t, const Env& env, std::vector<Value>& bound) const;
    std::shared_ptr<const std::map<Value, Value>> quotClasses(const Expr& q, const Env& env,
                                                              std::vector<Value>& bound) const;
    void guard(std::size_t n) const;
};

/// Evaluates a model presentation's proper symbols under its own structure.
Evaluator modelEvaluator(const ModelPresentation& m, std::size_t depth);

/// Numerals in List(Top): the list of n units under the structure.
Value numeral(const Structure& s, std::size_t n);

}  // namespace au
