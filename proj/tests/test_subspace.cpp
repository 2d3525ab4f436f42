#include "doctest.h"

#include "au/subspace.hpp"
#include "fixtures.hpp"

using namespace au;

namespace {

const Expr X = mk::proper("X");
const Expr Y = mk::proper("Y");
const Expr One = mk::top();

}  // namespace

TEST_CASE("open subspace against the slice") {
    ModelPresentation m = fixtures::mfin();
    auto s = openSubspace(m, "Y", "n", 3);
    CHECK(s->evaluators.size() == 3);

    // the new constant adds a class to hom(1, U)
    SynCat before(s->tiso, CheckerOptions{}, Oracle{{s->evaluators.front().get()}, true});
    SynCat after(s->theory, CheckerOptions{}, s->oracle());
    CHECK(before.enumerateHom(One, Y, 5).classes.empty());
    CHECK(after.enumerateHom(One, Y, 5).classes.size() == 1);

    std::vector<std::pair<Expr, Expr>> pairs{{One, One}, {One, mk::sum(One, One)}, {One, Y},
                                             {X, Y},     {Y, Y},                   {X, mk::sum(Y, Y)}};
    SliceComparison cmp = sliceCompare(*s, m, pairs, 5, 9);
    for (const auto& p : cmp.pairs) {
        INFO(show(p.dom) << " -> " << show(p.cod) << ": " << p.subspaceClasses << " vs " << p.sliceHoms << " "
                         << p.detail);
        CHECK(p.ok());
    }
}
