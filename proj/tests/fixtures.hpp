#pragma once

// In-memory copies of the fixture presentations used throughout the tests.

#include "au/functor.hpp"
#include "au/theory.hpp"

namespace au::fixtures {

inline CatPresentation empty() { return CatPresentation{"empty", {}, {}, {}}; }

inline CatPresentation walk() { return CatPresentation{"walk", {"X", "Y"}, {{"f", "X", "Y"}}, {}}; }

inline CatPresentation z2() {
    return CatPresentation{"z2", {"M"}, {{"m", "M", "M"}}, {{"M", {"m", "m"}, {}}}};
}

inline ModelPresentation mfin() {
    ModelPresentation m;
    m.name = "mfin";
    m.objects = {{"X", {"0", "1"}}, {"Y", {"a", "b", "c"}}};
    m.arrows = {{"f", "X", "Y", {{"0", "a"}, {"1", "b"}}}};
    return m;
}

/// A realization of walk whose chosen structure differs from the canonical one
/// in every respect.
inline ModelPresentation walkReal() {
    ModelPresentation m;
    m.name = "walkreal";
    m.objects = {{"X", {"p", "q"}}, {"Y", {"u", "v", "w"}}};
    m.arrows = {{"f", "X", "Y", {{"p", "u"}, {"q", "v"}}}};
    m.structure.swapPairs = true;
    m.structure.swapSums = true;
    m.structure.reverseLists = true;
    m.structure.terminal = "pt";
    m.structure.properTag = "A";
    return m;
}

inline ModelPresentation z2Real() {
    ModelPresentation m;
    m.name = "z2real";
    m.objects = {{"M", {"0", "1"}}};
    m.arrows = {{"m", "M", "M", {{"0", "1"}, {"1", "0"}}}};
    m.equations = {{"M", {"m", "m"}, {}}};
    m.structure.swapSums = true;
    m.structure.properTag = "Z";
    return m;
}

inline ModelPresentation emptyReal() {
    ModelPresentation m;
    m.name = "emptyreal";
    m.structure.swapPairs = true;
    m.structure.reverseLists = true;
    return m;
}

/// walk realized by walkReal, sent to mfin.
inline FunctorPresentation walkToFin() {
    FunctorPresentation f;
    f.name = "wf";
    f.source = "walkreal";
    f.target = "mfin";
    f.objects = {{"X", "X"}, {"Y", "Y"}};
    f.arrows = {{"f", {"f"}}};
    f.carriers = {{"X", {{"p", "0"}, {"q", "1"}}}, {"Y", {{"u", "a"}, {"v", "b"}, {"w", "c"}}}};
    return f;
}

}  // namespace au::fixtures
