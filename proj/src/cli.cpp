#include "au/cli.hpp"

#include <atomic>
#include <chrono>
#include <filesystem>
#include <functional>
#include <memory>
#include <optional>
#include <thread>

#include "au/checker.hpp"
#include "au/error.hpp"
#include "au/format.hpp"
#include "au/functor.hpp"
#include "au/subspace.hpp"

namespace au::cli {

using json = nlohmann::ordered_json;

namespace {

using Clock = std::chrono::steady_clock;

double msSince(Clock::time_point t0) {
    return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

std::string text(const Expr& e) {
    try {
        return format::printExpr(e);
    } catch (const UsageError&) {
        return show(e);
    }
}

std::string text(const Judgement& j) {
    try {
        std::string ctx = format::printContext(j.ctx) + " ";
        switch (j.form) {
        case Judgement::Form::Type: return ctx + format::printExpr(j.type) + " type";
        case Judgement::Form::Term: return ctx + format::printExpr(j.term) + " : " + format::printExpr(j.type);
        case Judgement::Form::TypeEq:
            return ctx + format::printExpr(j.type) + " = " + format::printExpr(j.type2) + " type";
        case Judgement::Form::TermEq:
            return ctx + format::printExpr(j.term) + " = " + format::printExpr(j.term2) + " : " +
                   format::printExpr(j.type);
        }
    } catch (const UsageError&) {
    }
    return show(j);
}

json certificateJson(const EqCertificate& c) {
    json out;
    json steps = json::array();
    for (const auto& s : c.steps) steps.push_back(s.str());
    out["steps"] = steps;
    if (!c.splitVar.empty()) {
        out["split"] = c.splitVar;
        json branches = json::array();
        for (const auto& b : c.branches) branches.push_back(certificateJson(b));
        out["branches"] = branches;
    }
    return out;
}

// Verdicts from best to worst; an obligation takes the worst of its parts.
enum class Verdict { Proved, AgreeAtDepth, Unknown, Refuted, Rejected };

const char* verdictName(Verdict v) {
    switch (v) {
    case Verdict::Proved: return "Proved";
    case Verdict::AgreeAtDepth: return "AgreeAtDepth";
    case Verdict::Unknown: return "Unknown";
    case Verdict::Refuted: return "Refuted";
    case Verdict::Rejected: return "Rejected";
    }
    return "?";
}

Verdict fromHost(const HostVerdict& h) {
    switch (h.status) {
    case HostVerdict::Status::Proved: return Verdict::Proved;
    case HostVerdict::Status::AgreeAtDepth: return Verdict::AgreeAtDepth;
    case HostVerdict::Status::Unknown: return Verdict::Unknown;
    case HostVerdict::Status::Refuted: return Verdict::Refuted;
    }
    return Verdict::Unknown;
}

void putSample(json& out, const SampleVerdict& s) {
    out["samples"] = s.samples;
    if (!s.agree()) {
        json cx;
        if (s.witness) cx["at"] = s.witness->str();
        cx["detail"] = s.detail;
        out["counterexample"] = cx;
    }
}

json hostJson(const HostVerdict& h) {
    json out;
    out["verdict"] = verdictName(fromHost(h));
    if (h.status == HostVerdict::Status::Proved) out["certificate"] = certificateJson(h.certificate);
    if (h.sample) putSample(out, *h.sample);
    return out;
}

// Runs the tasks on up to `jobs` threads; results keep the task order.
std::vector<json> runAll(const std::vector<std::function<json()>>& tasks, std::size_t jobs) {
    std::vector<json> out(tasks.size());
    if (jobs <= 1 || tasks.size() <= 1) {
        for (std::size_t i = 0; i < tasks.size(); ++i) out[i] = tasks[i]();
        return out;
    }
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < tasks.size(); i = next++) out[i] = tasks[i]();
    };
    std::vector<std::thread> pool;
    for (std::size_t k = 0; k < std::min(jobs, tasks.size()); ++k) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
    return out;
}

CheckerOptions checkerOptions(const Flags& f) {
    CheckerOptions o;
    o.fuel = f.fuel;
    o.instDepth = f.instDepth;
    return o;
}

json flagsJson(const Flags& f) {
    return json{{"depth", f.depth}, {"fuel", f.fuel}, {"inst-depth", f.instDepth}};
}

// -------------------------------------------------------------- check

// What a file's theories are checked against.
struct TheoryHost {
    std::unique_ptr<Evaluator> owned;
    std::unique_ptr<SynCat> syn;
    const Evaluator* oracle = nullptr;
};

class FileChecker {
public:
    FileChecker(std::string path, const Flags& flags)
        : path_(std::move(path)), flags_(flags), ws_(format::parseFile(path_), flags.depth) {}

    // Builds every theory and host up front so that the tasks only read.
    std::vector<std::function<json()>> tasks() {
        const auto& doc = ws_.document();
        for (const auto& t : doc.theories) host(t.name);
        for (const auto& c : doc.checks) host(c.theory);

        std::vector<std::function<json()>> out;
        for (const auto& e : doc.order) {
            if (e.kind == format::Document::Kind::Check) {
                const auto& c = doc.checks[e.index];
                out.push_back([this, &c, line = e.line] { return checkLine(c, line); });
            } else if (e.kind == format::Document::Kind::Theory) {
                const auto& d = doc.theories[e.index];
                if (d.kind != format::TheoryDecl::Kind::Explicit && d.kind != format::TheoryDecl::Kind::Internal)
                    continue;
                const auto& t = ws_.theory(d.name);
                for (std::size_t i = 0; i < t.typeAxioms.size(); ++i)
                    out.push_back([this, &d, &t, i, line = e.line] { return typeAxiom(d.name, t.typeAxioms[i], line); });
                for (std::size_t i = 0; i < t.termAxioms.size(); ++i) {
                    int line = i < d.axiomLines.size() ? d.axiomLines[i] : e.line;
                    out.push_back([this, &d, &t, i, line] { return termAxiom(d.name, t.termAxioms[i], line); });
                }
            }
        }
        return out;
    }

    const std::string& path() const { return path_; }

private:
    std::string path_;
    Flags flags_;
    format::Workspace ws_;
    std::map<std::string, TheoryHost> hosts_;

    const TheoryHost& host(const std::string& name) {
        if (auto it = hosts_.find(name); it != hosts_.end()) return it->second;
        const TheoryPresentation& t = ws_.theory(name);
        TheoryHost h;
        const format::TheoryDecl* decl = nullptr;
        for (const auto& d : ws_.document().theories)
            if (d.name == name) decl = &d;
        bool faithful = false;
        if (decl && decl->kind == format::TheoryDecl::Kind::Iso) {
            h.owned = ws_.generator(name)->stEvaluator();
            faithful = ws_.model(decl->realization).faithful;
        } else if (!t.realization.empty() && decl && decl->kind != format::TheoryDecl::Kind::Subspace) {
            const ModelPresentation& m = ws_.model(t.realization);
            h.owned = std::make_unique<Evaluator>(&m, m.structure, flags_.depth);
            faithful = m.faithful;
        }
        h.oracle = h.owned.get();
        Oracle o;
        if (h.oracle) o = Oracle{{h.oracle}, faithful};
        h.syn = std::make_unique<SynCat>(t, checkerOptions(flags_), o);
        return hosts_.emplace(name, std::move(h)).first->second;
    }

    json base(const char* kind, const std::string& theory, int line) const {
        json out;
        out["file"] = std::filesystem::path(path_).filename().string();
        out["line"] = line;
        out["kind"] = kind;
        out["theory"] = theory;
        return out;
    }

    json checkLine(const format::CheckDecl& c, int line) const {
        const TheoryHost& h = hosts_.at(c.theory);
        const Checker& ck = h.syn->checker();
        const Judgement& j = c.judgement;
        bool eq = j.form == Judgement::Form::TermEq || j.form == Judgement::Form::TypeEq;
        json out = base(eq ? "equal" : "judgement", c.theory, line);
        out["judgement"] = text(j);
        try {
            if (j.form == Judgement::Form::TermEq) {
                ck.checkContext(j.ctx);
                ck.checkTerm(j.ctx, j.term, j.type);
                ck.checkTerm(j.ctx, j.term2, j.type);
                out.update(hostJson(h.syn->equalTerms(j.ctx, j.term, j.term2, j.type)));
                return out;
            }
            if (j.form == Judgement::Form::TypeEq) {
                ck.checkContext(j.ctx);
                ck.checkType(j.ctx, j.type);
                ck.checkType(j.ctx, j.type2);
                if (ck.typesConvertible(j.ctx, j.type, j.type2)) {
                    out["verdict"] = verdictName(Verdict::Proved);
                    return out;
                }
                out.update(typesInModel(h, j.ctx, j.type, j.type2));
                return out;
            }
            Derivation d = ck.check(j);
            out["rules"] = d.size();
            Verdict worst = Verdict::Proved;
            json pending = json::array();
            for (const auto& o : d.allObligations()) {
                json r;
                r["judgement"] = text(o);
                if (o.form == Judgement::Form::TermEq) r.update(hostJson(h.syn->equalTerms(o.ctx, o.term, o.term2, o.type)));
                else r["verdict"] = verdictName(Verdict::Unknown);
                Verdict v = verdictOf(r);
                worst = std::max(worst, v);
                pending.push_back(r);
            }
            if (!pending.empty()) out["obligations"] = pending;
            out["verdict"] = verdictName(worst);
        } catch (const TypeError& e) {
            out["verdict"] = verdictName(Verdict::Rejected);
            out["error"] = e.what();
        } catch (const ScopeError& e) {
            out["verdict"] = verdictName(Verdict::Rejected);
            out["error"] = e.what();
        }
        return out;
    }

    static Verdict verdictOf(const json& r) {
        std::string v = r["verdict"];
        for (Verdict x : {Verdict::Proved, Verdict::AgreeAtDepth, Verdict::Unknown, Verdict::Refuted})
            if (v == verdictName(x)) return x;
        return Verdict::Rejected;
    }

    json typesInModel(const TheoryHost& h, const Context& ctx, const Expr& a, const Expr& b) const {
        json out;
        if (!h.oracle) {
            out["verdict"] = verdictName(Verdict::Unknown);
            return out;
        }
        std::size_t samples = 0;
        for (const Env& env : h.oracle->enumerateContext(ctx)) {
            ++samples;
            if (h.oracle->evalType(a, env).elems != h.oracle->evalType(b, env).elems) {
                std::string at;
                for (const auto& [x, v] : env) at += (at.empty() ? "" : ", ") + x + "=" + v.str();
                out["verdict"] = verdictName(Verdict::Refuted);
                out["samples"] = samples;
                out["counterexample"] = json{{"at", "[" + at + "]"}, {"detail", "the two types denote different sets"}};
                return out;
            }
        }
        out["verdict"] = verdictName(Verdict::AgreeAtDepth);
        out["samples"] = samples;
        return out;
    }

    json typeAxiom(const std::string& theory, const TypeAxiom& ax, int line) const {
        const TheoryHost& h = hosts_.at(theory);
        json out = base("type-axiom", theory, line);
        out["name"] = ax.name;
        try {
            const Checker& ck = h.syn->checker();
            ck.checkContext(ax.ctx);
            ck.checkType(ax.ctx, ax.lhs);
            ck.checkType(ax.ctx, ax.rhs);
            if (h.oracle) out.update(typesInModel(h, ax.ctx, ax.lhs, ax.rhs));
            else out["verdict"] = verdictName(Verdict::Proved);
        } catch (const Error& e) {
            out["verdict"] = verdictName(Verdict::Rejected);
            out["error"] = e.what();
        }
        return out;
    }

    json termAxiom(const std::string& theory, const TermAxiom& ax, int line) const {
        const TheoryHost& h = hosts_.at(theory);
        json out = base("axiom", theory, line);
        out["name"] = ax.name;
        try {
            const Checker& ck = h.syn->checker();
            ck.checkContext(ax.ctx);
            ck.checkTerm(ax.ctx, ax.lhs, ax.type);
            ck.checkTerm(ax.ctx, ax.rhs, ax.type);
            if (h.oracle) {
                SampleVerdict s = h.oracle->agreeOn(ax.ctx, ax.lhs, ax.rhs);
                out["verdict"] = verdictName(s.agree() ? Verdict::AgreeAtDepth : Verdict::Refuted);
                putSample(out, s);
            } else {
                // nothing to hold it against: only its typing is an obligation
                out["verdict"] = verdictName(Verdict::Proved);
            }
        } catch (const ModelError& e) {
            out["verdict"] = verdictName(Verdict::Refuted);
            out["error"] = e.what();
        } catch (const TypeError& e) {
            out["verdict"] = verdictName(Verdict::Rejected);
            out["error"] = e.what();
        } catch (const ScopeError& e) {
            out["verdict"] = verdictName(Verdict::Rejected);
            out["error"] = e.what();
        }
        return out;
    }
};

json summarize(const json& obligations) {
    std::map<std::string, std::size_t> counts;
    std::size_t failed = 0;
    for (const auto& o : obligations) {
        std::string v = o["verdict"];
        ++counts[v];
        if (v != "Proved" && v != "AgreeAtDepth") ++failed;
    }
    json by;
    for (const auto& [k, n] : counts) by[k] = n;
    return json{{"total", obligations.size()}, {"failed", failed}, {"verdicts", by}};
}

// ------------------------------------------------------------ subspace

std::pair<Expr, Expr> parsePair(const std::string& s) {
    auto at = s.find("->");
    if (at == std::string::npos) throw UsageError("a pair is written 'DOM -> COD', got '" + s + "'");
    return {format::parseType(s.substr(0, at)), format::parseType(s.substr(at + 2))};
}

std::vector<std::pair<Expr, Expr>> defaultPairs(const ModelPresentation& m, const Expr& u) {
    std::vector<Expr> doms{mk::top()};
    std::vector<Expr> cods{mk::top(), mk::sum(mk::top(), mk::top())};
    for (const auto& o : m.objects) {
        doms.push_back(mk::proper(o.name));
        cods.push_back(mk::proper(o.name));
    }
    cods.push_back(mk::sum(u, u));
    std::vector<std::pair<Expr, Expr>> out;
    for (const auto& d : doms)
        for (const auto& c : cods) out.emplace_back(d, c);
    return out;
}

json classesJson(const HomEnumeration& h) {
    json reps = json::array();
    for (const auto& c : h.classes) reps.push_back(text(c.rep));
    return json{{"classes", h.classes.size()}, {"representatives", reps}, {"candidates", h.candidates},
                {"truncated", h.truncated}};
}

const ModelPresentation& pickModel(const format::Workspace& ws, const std::string& name) {
    if (!name.empty()) return ws.model(name);
    const auto& ms = ws.document().models;
    if (ms.size() != 1) throw UsageError("the theory file declares " + std::to_string(ms.size()) + " models; name one");
    return ms.front();
}

}  // namespace

// ------------------------------------------------------------ commands

Result cmdCheck(const std::vector<std::string>& files, const Flags& flags) {
    auto t0 = Clock::now();
    if (files.empty()) throw UsageError("check needs at least one file");
    std::vector<std::unique_ptr<FileChecker>> checkers;
    std::vector<std::function<json()>> tasks;
    for (const auto& f : files) {
        checkers.push_back(std::make_unique<FileChecker>(f, flags));
        auto more = checkers.back()->tasks();
        tasks.insert(tasks.end(), more.begin(), more.end());
    }
    json obligations = json::array();
    for (auto& r : runAll(tasks, flags.jobs)) obligations.push_back(std::move(r));

    Result res;
    json names = json::array();
    for (const auto& c : checkers) names.push_back(std::filesystem::path(c->path()).filename().string());
    json summary = summarize(obligations);
    res.exitCode = summary["failed"].get<std::size_t>() == 0 ? Success : ObligationFailed;
    res.report["command"] = "check";
    res.report["files"] = names;
    res.report["flags"] = flagsJson(flags);
    res.report["ok"] = res.exitCode == Success;
    res.report["summary"] = summary;
    res.report["obligations"] = obligations;
    res.report["timing"] = json{{"milliseconds", msSince(t0)}};
    return res;
}

Result cmdGenIso(const std::string& file, const Flags& flags, const std::string& theory) {
    auto t0 = Clock::now();
    format::Workspace ws(format::parseFile(file), flags.depth);
    const format::TheoryDecl* decl = nullptr;
    for (const auto& d : ws.document().theories)
        if (d.kind == format::TheoryDecl::Kind::Iso && (theory.empty() || d.name == theory)) {
            decl = &d;
            break;
        }
    if (!decl) throw UsageError(theory.empty() ? "no iso theory declared" : "no iso theory named '" + theory + "'");

    Result res;
    json& r = res.report;
    r["command"] = "geniso";
    r["file"] = std::filesystem::path(file).filename().string();
    r["theory"] = decl->name;
    r["extends"] = decl->from;
    r["realization"] = decl->realization;
    r["flags"] = flagsJson(flags);

    const TheoryPresentation& base = ws.theory(decl->from);
    auto corpus = typeCorpus(base);
    r["corpus"] = corpus.size();
    try {
        const TheoryPresentation& tiso = ws.theory(decl->name);
        CoherenceGenerator& gen = *ws.generator(decl->name);
        IsoFamily fam = gen.family(corpus);
        ComponentSource extra = [&gen](const Judgement& j) -> const IsoComponent& { return gen.component(j); };
        MorphismReport rep = checkInterpMorphism(fam, gen.hSide(), gen.aSide(), corpus, base, extra);

        json comps = json::array();
        for (const auto& c : gen.generated().components()) {
            json e;
            e["id"] = c.id;
            e["index"] = text(c.index);
            e["rule"] = c.rule;
            e["reflected"] = c.reflected;
            e["uses"] = c.uses;
            json eqs = json::array();
            for (const auto& ax : c.equations)
                eqs.push_back(format::printContext(ax.ctx) + " " + text(ax.lhs) + " = " + text(ax.rhs) + " : " +
                              text(ax.type));
            e["equations"] = eqs;
            comps.push_back(e);
        }
        json conds = json::array();
        for (const auto& c : rep.results) {
            json e{{"entry", c.entry}, {"condition", c.condition},
                   {"verdict", c.ok ? "AgreeAtDepth" : "Refuted"}, {"samples", c.samples}};
            if (!c.ok) e["detail"] = c.detail;
            conds.push_back(e);
        }

        // the equations of the extended theory, typed and held against its realization
        auto st = gen.stEvaluator();
        Checker ck(tiso, checkerOptions(flags));
        std::vector<std::function<json()>> tasks;
        for (const auto& ax : tiso.termAxioms)
            tasks.push_back([&ax, &ck, &st] {
                json e{{"name", ax.name}};
                try {
                    ck.checkContext(ax.ctx);
                    ck.checkTerm(ax.ctx, ax.lhs, ax.type);
                    ck.checkTerm(ax.ctx, ax.rhs, ax.type);
                    SampleVerdict s = st->agreeOn(ax.ctx, ax.lhs, ax.rhs);
                    e["verdict"] = s.agree() ? "AgreeAtDepth" : "Refuted";
                    putSample(e, s);
                } catch (const Error& err) {
                    e["verdict"] = "Rejected";
                    e["error"] = err.what();
                }
                return e;
            });
        json axioms = json::array();
        std::size_t badAxioms = 0;
        for (auto& e : runAll(tasks, flags.jobs)) {
            if (e["verdict"] != "AgreeAtDepth") ++badAxioms;
            axioms.push_back(std::move(e));
        }
        res.exitCode = rep.ok() && badAxioms == 0 ? Success : ObligationFailed;
        r["ok"] = res.exitCode == Success;
        r["summary"] = json{{"components", comps.size()}, {"conditions", conds.size()},
                            {"failed-conditions", rep.failures()}, {"axioms", axioms.size()},
                            {"failed-axioms", badAxioms}};
        r["components"] = comps;
        r["conditions"] = conds;
        r["axioms"] = axioms;
    } catch (const ModelError& e) {
        res.exitCode = ObligationFailed;
        r["ok"] = false;
        r["error"] = e.what();
    }
    r["timing"] = json{{"milliseconds", msSince(t0)}};
    return res;
}

Result cmdSubspace(const std::string& theoryFile, const std::string& subspaceFile, const SubspaceOptions& opts,
                   const Flags& flags) {
    auto t0 = Clock::now();
    if (opts.action != "enumerate" && opts.action != "lift" && opts.action != "slice-compare")
        throw UsageError("unknown action '" + opts.action + "' (enumerate, lift, slice-compare)");
    format::Workspace ws(format::parseFile(theoryFile), flags.depth);
    format::Document sdoc = format::parseFile(subspaceFile);
    if (sdoc.subspaces.empty()) throw UsageError(subspaceFile + " declares no subspace");
    const SubspaceAxioms& s = sdoc.subspaces.front();
    const ModelPresentation& m = pickModel(ws, opts.model);

    Result res;
    json& r = res.report;
    r["command"] = "subspace";
    r["action"] = opts.action;
    r["model"] = m.name;
    r["subspace"] = s.name;
    r["flags"] = flagsJson(flags);

    if (opts.action == "lift") {
        FunctorPresentation f = opts.functor.empty() ? identityFunctor(m) : ws.functor(opts.functor);
        const ModelPresentation& a = ws.model(f.source);
        const ModelPresentation& b = ws.model(f.target);
        SubspaceAlpha alpha;
        for (const auto& ax : s.axioms) {
            if (ax.form != SubspaceAxiom::Form::NewTerm) continue;
            auto it = opts.alpha.find(ax.name);
            if (it == opts.alpha.end()) throw UsageError("no alpha given for the constant '" + ax.name + "'");
            if (ax.binder) throw UsageError("alpha for '" + ax.name + "' would have to be a map; only closed constants");
            alpha.constants[ax.name] = b.structure.proper(Value::atom(it->second));
        }
        r["functor"] = f.name;
        TheoryPresentation tcatA = internalTheoryOfModel(a);
        auto corpus = typeCorpus(tcatA);
        auto lf = liftFunctorToTheory(f, tcatA, a, b, flags.depth, corpus);
        try {
            SubspaceLift lift = liftToSubspaceFunctor(*lf, s, alpha);
            json gens = json::array();
            for (const auto& t : lift.source.properTypes)
                gens.push_back(json{{"type", t}, {"image", text(lift.translation.apply(mk::proper(t)))}});
            json consts = json::array();
            bool allOk = true;
            for (const auto& [name, want] : alpha.constants) {
                Value got = lift.realization->evalTerm(lift.translation.apply(mk::app(name, {})));
                bool ok = got == want;
                allOk = allOk && ok;
                consts.push_back(json{{"constant", name},
                                      {"image", text(lift.translation.apply(mk::app(name, {})))},
                                      {"value", got.str()},
                                      {"alpha", want.str()},
                                      {"verdict", ok ? "AgreeAtDepth" : "Refuted"}});
            }
            json objs = json::array();
            for (const auto& c : objectCorpus(tcatA)) {
                std::size_t lifted = lift.realization->evalType(lift.translation.apply(c)).elems.size();
                std::size_t plain = lf->realization->evalType(lf->translation.apply(c)).elems.size();
                allOk = allOk && lifted == plain;
                objs.push_back(json{{"object", text(c)}, {"lifted", lifted}, {"plain", plain}});
            }
            json axioms = json::array();
            for (const auto& ax : lf->axioms) {
                allOk = allOk && ax.verdict.holds();
                axioms.push_back(json{{"name", ax.name}, {"verdict", verdictName(fromHost(ax.verdict))}});
            }
            res.exitCode = allOk ? Success : ObligationFailed;
            r["ok"] = allOk;
            r["types"] = gens;
            r["constants"] = consts;
            r["objects"] = objs;
            r["axioms"] = axioms;
        } catch (const ModelError& e) {
            res.exitCode = ObligationFailed;
            r["ok"] = false;
            r["error"] = e.what();
        }
        r["timing"] = json{{"milliseconds", msSince(t0)}};
        return res;
    }

    if (s.axioms.size() != 1 || s.axioms[0].form != SubspaceAxiom::Form::NewTerm || s.axioms[0].binder ||
        s.axioms[0].type->kind != Kind::Proper)
        throw UsageError(opts.action + " needs a subspace with a single constant of a proper type");
    const std::string u = s.axioms[0].type->name;
    const std::string n = s.axioms[0].name;
    auto sub = openSubspace(m, u, n, flags.depth);
    std::vector<std::pair<Expr, Expr>> pairs;
    for (const auto& p : opts.pairs) pairs.push_back(parsePair(p));
    if (pairs.empty()) pairs = defaultPairs(m, mk::proper(u));
    r["open"] = json{{"constant", n}, {"type", u}, {"choices", sub->choices.size()}};

    if (opts.action == "enumerate") {
        SynCat before(sub->tiso, checkerOptions(flags), Oracle{{sub->evaluators.front().get()}, m.faithful});
        SynCat after(sub->theory, checkerOptions(flags), sub->oracle());
        std::vector<std::function<json()>> tasks;
        for (const auto& [d, c] : pairs)
            tasks.push_back([&, d, c] {
                return json{{"dom", text(d)},
                            {"cod", text(c)},
                            {"before", classesJson(before.enumerateHom(d, c, opts.size))},
                            {"after", classesJson(after.enumerateHom(d, c, opts.size))}};
            });
        json table = json::array();
        for (auto& e : runAll(tasks, flags.jobs)) table.push_back(std::move(e));
        r["ok"] = true;
        r["homs"] = table;
    } else {
        SliceComparison cmp = sliceCompare(*sub, m, pairs, opts.size, opts.sliceSize);
        json table = json::array();
        for (const auto& p : cmp.pairs) {
            json e{{"dom", text(p.dom)},          {"cod", text(p.cod)},
                   {"subspace", p.subspaceClasses}, {"slice", p.sliceHoms},
                   {"forward", p.forwardOk},        {"backward", p.backwardOk},
                   {"round-trip", p.roundTrip},     {"truncated", p.truncated},
                   {"verdict", p.ok() ? "AgreeAtDepth" : "Refuted"}};
            if (!p.detail.empty()) e["detail"] = p.detail;
            table.push_back(e);
        }
        res.exitCode = cmp.ok() ? Success : ObligationFailed;
        r["ok"] = cmp.ok();
        r["pairs"] = table;
    }
    r["timing"] = json{{"milliseconds", msSince(t0)}};
    return res;
}

std::string render(const json& report) { return report.dump(2) + "\n"; }

json withoutTiming(json report) {
    report.erase("timing");
    return report;
}

}  // namespace au::cli
