#include "doctest.h"

#include <random>

#include "coxdl/gf.hpp"

using namespace coxdl;

TEST_CASE("F4 defining relation and Frobenius") {
    auto T = build_tower(2, 1, {1, 2, 4});
    CHECK(T->supports(1));
    CHECK(T->supports(2));
    CHECK(T->supports(4));
    const GF& F4 = T->field(2);
    CHECK(F4.poly() == std::vector<unsigned>{1, 1, 1});
    fe w = F4.from_coeffs({0, 1});
    fe w_plus_1 = F4.from_coeffs({1, 1});
    CHECK(F4.mul(w, w) == w_plus_1);
    FqElem x{T.get(), 2, w};
    CHECK(frobenius(x, 1).v == w_plus_1);
    CHECK(frobenius(x, 2) == x);
    CHECK(frobenius(frobenius(x, 1), -1) == x);
}

TEST_CASE("embeddings preserve minimal polynomials and compose") {
    auto T = build_tower(2, 1, {8});
    const GF& F4 = T->field(2);
    const GF& F16 = T->field(4);
    fe w = F4.from_coeffs({0, 1});
    fe z = T->embed(2, w, 4);
    CHECK(F16.add(F16.add(F16.mul(z, z), z), F16.one()) == F16.zero());
    CHECK(T->embed(1, 0, 4) == F16.one());
    for (fe v : T->enumerate(2)) CHECK(T->embed(4, T->embed(2, v, 4), 8) == T->embed(2, v, 8));
    for (fe v : T->enumerate(4)) {
        for (fe u : T->enumerate(4)) {
            fe a = T->embed(4, F16.mul(v, u), 8), b = T->field(8).mul(T->embed(4, v, 8), T->embed(4, u, 8));
            CHECK(a == b);
            CHECK(T->embed(4, F16.add(v, u), 8) == T->field(8).add(T->embed(4, v, 8), T->embed(4, u, 8)));
        }
    }
    CHECK_THROWS_AS(T->embed(4, 0, 2), std::domain_error);
}

TEST_CASE("enumeration") {
    auto T = build_tower(2, 1, {3});
    CHECK(T->enumerate(3).size() == 8);
    auto T2 = build_tower(2, 1, {2});
    auto e1 = enumerate_field(*T2, 1);
    REQUIRE(e1.size() == 2);
    CHECK(e1[0].is_zero());
    CHECK(e1[1].v == T2->field(1).one());
    auto e2 = T2->enumerate(2);
    CHECK(e2.size() == 4);
    CHECK(std::count(e2.begin(), e2.end(), T2->field(2).zero()) == 1);
}

TEST_CASE("ring axioms and Frobenius homomorphism") {
    std::mt19937_64 rng(7);
    for (auto [p, f, m] : {std::tuple{2u, 1u, 6u}, {3u, 1u, 4u}, {3u, 2u, 3u}, {5u, 1u, 2u}}) {
        auto T = build_tower(p, f, {m});
        const GF& F = T->field(m);
        std::uniform_int_distribution<std::uint64_t> d(0, F.ord());
        for (int i = 0; i < 10000; ++i) {
            fe a = fe(d(rng)), b = fe(d(rng)), c = fe(d(rng));
            CHECK(F.mul(a, F.add(b, c)) == F.add(F.mul(a, b), F.mul(a, c)));
            CHECK(F.add(F.add(a, b), c) == F.add(a, F.add(b, c)));
            CHECK(F.add(a, F.neg(a)) == F.zero());
        }
        if (F.size() <= (1u << 10))
            for (fe a : T->enumerate(m))
                for (fe b : T->enumerate(m)) {
                    CHECK(T->frobenius(m, F.add(a, b), 1) == F.add(T->frobenius(m, a, 1), T->frobenius(m, b, 1)));
                    CHECK(T->frobenius(m, F.mul(a, b), 1) == F.mul(T->frobenius(m, a, 1), T->frobenius(m, b, 1)));
                }
    }
}

TEST_CASE("Fermat exhaustively and fixed field") {
    auto T = build_tower(2, 1, {16});
    const GF& F = T->field(16);
    for (fe a = 0; a < F.ord(); ++a) REQUIRE(F.pow(a, std::int64_t(F.ord())) == F.one());
    auto T3 = build_tower(3, 1, {2, 3});
    for (unsigned m : {1u, 2u, 3u, 6u})
        for (fe a : T3->enumerate(m)) CHECK(T3->frobenius(m, a, m) == a);
}

TEST_CASE("capacity") {
    CHECK_THROWS_AS(build_tower(2, 1, {21}), capacity_error);
    CHECK_THROWS_AS(build_tower(3, 1, {5, 3}), capacity_error);
}

TEST_CASE("relative extension") {
    auto T = build_tower(3, 1, {2});
    const GF& F9 = T->field(2);
    ExtField E(F9, 5, 1);
    std::mt19937_64 rng(3);
    std::uniform_int_distribution<std::uint64_t> d(0, F9.ord());
    auto rnd = [&] {
        ExtField::elem x(5);
        for (auto& v : x) v = fe(d(rng));
        return x;
    };
    for (int i = 0; i < 200; ++i) {
        auto a = rnd(), b = rnd();
        CHECK(E.frob(E.mul(a, b)) == E.mul(E.frob(a), E.frob(b)));
        CHECK(E.frob(a, 10) == a);  // F_{3^10}
        CHECK(E.in_base(E.frob(a, 2)) == E.in_base(a));
    }
    auto c = E.scalar(F9.from_coeffs({0, 1}));
    CHECK(E.frob(c, 2) == c);
    CHECK(E.frob(c, 1) != c);
}
