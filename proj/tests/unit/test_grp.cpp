#include "doctest.h"

#include <algorithm>
#include <random>

#include "coxdl/grp.hpp"

using namespace coxdl;

namespace {

struct G {
    GroupSpec spec;
    std::shared_ptr<FieldTower> tower;
    Group grp;
    Torus T;
    G(unsigned q, unsigned n, unsigned k, unsigned h)
        : spec(GroupSpec::make(q, n, k, h)), tower(build_tower(spec.p, spec.f, {n})), grp(spec, tower), T(spec, tower) {}
};

}  // namespace

TEST_CASE("group orders") {
    CHECK(group_order(GroupSpec::make(2, 2, 0, 1)) == 6);
    CHECK(group_order(GroupSpec::make(2, 2, 0, 2)) == 96);
    CHECK(group_order(GroupSpec::make(2, 2, 1, 2)) == 48);
    CHECK(group_order(GroupSpec::make(2, 3, 0, 1)) == 168);
    CHECK(group_order(GroupSpec::make(3, 2, 0, 2)) == 3888);
    for (auto [q, n, k, h] : {std::tuple{2u, 2u, 0u, 1u}, {2u, 2u, 0u, 2u}, {2u, 2u, 1u, 1u}, {2u, 2u, 1u, 2u},
                              {2u, 3u, 0u, 1u}, {3u, 2u, 0u, 1u}, {2u, 3u, 1u, 2u}}) {
        G g(q, n, k, h);
        CHECK(mpz_class(g.grp.size()) == group_order(g.spec));
    }
    G d(2, 2, 1, 1);
    CHECK(d.grp.size() == 3);
    CHECK_THROWS_AS(Group(GroupSpec::make(2, 4, 2, 1), build_tower(2, 1, {4})), unsupported_model);
}

TEST_CASE("closure, inverses and associativity") {
    std::mt19937_64 rng(11);
    for (auto [q, n, k, h] : {std::tuple{2u, 2u, 0u, 2u}, {2u, 2u, 1u, 2u}, {2u, 3u, 1u, 2u}, {2u, 3u, 0u, 1u}}) {
        G g(q, n, k, h);
        std::uniform_int_distribution<std::size_t> d(0, g.grp.size() - 1);
        for (int i = 0; i < 1000; ++i) {
            auto a = g.grp.element(d(rng)), b = g.grp.element(d(rng)), c = g.grp.element(d(rng));
            auto ab = g.grp.mul(a, b);
            CHECK_NOTHROW(g.grp.index_of(ab));
            CHECK(g.grp.mul(ab, c) == g.grp.mul(a, g.grp.mul(b, c)));
            CHECK(g.grp.mul(a, g.grp.inv(a)) == g.grp.identity());
        }
    }
}

TEST_CASE("conjugacy classes") {
    G g(2, 2, 0, 1);
    const auto& C = g.grp.classes();
    CHECK(C.rep.size() == 3);
    auto sizes = C.size;
    std::sort(sizes.begin(), sizes.end());
    CHECK(sizes == std::vector<std::size_t>{1, 2, 3});
    for (auto [q, n, k, h] : {std::tuple{2u, 2u, 0u, 2u}, {2u, 2u, 1u, 2u}, {3u, 2u, 0u, 1u}, {2u, 3u, 0u, 1u}}) {
        G x(q, n, k, h);
        const auto& D = x.grp.classes();
        std::size_t tot = 0;
        for (std::size_t i = 0; i < D.rep.size(); ++i) {
            CHECK(x.grp.size() % D.size[i] == 0);
            tot += D.size[i];
            CHECK(D.class_of[D.rep[i]] == i);
        }
        CHECK(tot == x.grp.size());
    }
    // GL_2(F_3) has 8 classes, GL_3(F_2) has 6.
    CHECK(G(3, 2, 0, 1).grp.classes().rep.size() == 8);
    CHECK(G(2, 3, 0, 1).grp.classes().rep.size() == 6);
}

TEST_CASE("parabolic radicals") {
    CHECK(parabolic_radical(G(2, 2, 0, 2).grp, 1).size() == 4);
    CHECK(parabolic_radical(G(2, 2, 0, 1).grp, 1).size() == 2);
    CHECK(parabolic_radical(G(2, 3, 0, 1).grp, 1).size() == 4);
    CHECK(parabolic_radical(G(2, 3, 0, 1).grp, 2).size() == 4);
    CHECK(parabolic_radical(G(3, 2, 0, 2).grp, 1).size() == 9);
    G g(2, 2, 0, 2);
    auto N = parabolic_radical(g.grp, 1);
    for (auto a : N)
        for (auto b : N) {
            auto c = g.grp.mul_idx(a, b);
            CHECK(std::find(N.begin(), N.end(), c) != N.end());
            CHECK(g.grp.mul_idx(a, b) == g.grp.mul_idx(b, a));
            CHECK(g.grp.mul_idx(a, a) == g.grp.identity_index());
        }
    CHECK_THROWS_AS(parabolic_radical(G(2, 2, 1, 2).grp, 1), unsupported_model);
}

TEST_CASE("torus embedding") {
    G g(2, 2, 0, 1);
    CHECK(embed_torus_element(g.grp, g.T, g.T.identity()) == g.grp.identity());
    const GF& F4 = g.tower->field(2);
    WittElem w = witt_from(*g.tower, 2, {F4.from_coeffs({0, 1})});
    auto m = embed_torus_element(g.grp, g.T, g.T.index(w));
    const GF& F2 = g.tower->field(1);
    CHECK(m == Group::Elt{F2.zero(), F2.one(), F2.one(), F2.one()});
    for (auto [q, n, k, h] : {std::tuple{2u, 2u, 0u, 1u}, {2u, 2u, 0u, 2u}, {2u, 2u, 1u, 2u}, {3u, 2u, 0u, 2u}}) {
        G x(q, n, k, h);
        for (std::uint64_t a = 0; a < x.T.order(); ++a)
            for (std::uint64_t b = 0; b < x.T.order(); b += 5)
                REQUIRE(x.grp.mul(embed_torus_element(x.grp, x.T, a), embed_torus_element(x.grp, x.T, b)) ==
                        embed_torus_element(x.grp, x.T, x.T.mul(a, b)));
    }
    // reduced characteristic polynomial of the embedded element: x^2 - tr(t) x + N(t)
    for (std::uint64_t a = 0; a < g.T.order(); ++a) {
        auto e = embed_torus_element(g.grp, g.T, a);
        fe t = g.T.residue(a);
        fe tr = F4.add(t, F4.frob_p(t, 1)), nrm = F4.mul(t, F4.frob_p(t, 1));
        CHECK(g.tower->embed(1, F2.add(e[0], e[3]), 2) == tr);
        CHECK(g.tower->embed(1, F2.sub(F2.mul(e[0], e[3]), F2.mul(e[1], e[2])), 2) == nrm);
    }
}

TEST_CASE("very regular elements") {
    G g(2, 2, 0, 2);
    auto vr = very_regular_elements(g.T);
    CHECK(vr.size() == 2 * 4);
    G h(3, 2, 0, 1);
    CHECK(very_regular_elements(h.T).size() == 6);
    for (auto x : vr)
        for (std::uint64_t u = 0; u < g.T.order(); ++u)
            if (g.T.level_of(u) >= 1) CHECK(std::find(vr.begin(), vr.end(), g.T.mul(x, u)) != vr.end());
}
