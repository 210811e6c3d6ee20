#include "doctest.h"

#include "coxdl/witt.hpp"

using namespace coxdl;

TEST_CASE("W_2(F_2) basics") {
    auto T = build_tower(2, 1, {1});
    WittElem one = witt_one(*T, 1, 2);
    WittElem x = witt_from(*T, 1, {0, 0});  // 1 + ϖ
    CHECK(x * x == one);
    CHECK(inv(x) == x);
    WittElem pi = witt_from(*T, 1, {T->field(1).zero(), 0});
    CHECK(is_zero(pi * pi));
    CHECK(unit_filtration_level(one) == 2);
    CHECK(unit_filtration_level(x) == 1);
    CHECK_THROWS_AS(inv(pi), std::domain_error);
}

TEST_CASE("norms and traces in W_h(F_4)") {
    auto T = build_tower(2, 1, {2});
    const GF& F4 = T->field(2);
    fe w = F4.from_coeffs({0, 1});
    WittElem x = witt_from(*T, 2, {w});
    CHECK(nm(x, 2, 1) == witt_one(*T, 2, 1));
    CHECK(nm(x, 2, 2) == x);
    WittElem y = witt_from(*T, 2, {F4.one(), w});
    CHECK(nm(y, 2, 1) == witt_from(*T, 2, {F4.one(), F4.one()}));
    FqElem fw{T.get(), 2, w};
    CHECK(tr_additive(fw, 2).v == F4.one());
    CHECK(tr_additive(fw, 1) == fw);
    CHECK(unit_filtration_level(witt_from(*T, 2, {w, F4.zero()})) == 0);
    CHECK_THROWS_AS(nm(x, 2, 3), std::domain_error);
}

TEST_CASE("nm multiplicative and transitive, trace telescopes") {
    for (unsigned q : {2u, 3u})
        for (unsigned n : {2u, 3u, 4u}) {
            if (q == 3 && n == 4) continue;
            auto T = build_tower(q, 1, {n});
            const GF& F = T->field(n);
            auto all = T->enumerate(n);
            std::vector<WittElem> units;
            for (fe a : all)
                if (!F.is_zero(a))
                    for (fe b : all) units.push_back(witt_from(*T, n, {a, b}));
            for (std::size_t i = 0; i < units.size(); i += 7) {
                const auto& u = units[i];
                const auto& v = units[(i * 31 + 5) % units.size()];
                CHECK(nm(u * v, n, 1) == nm(u, n, 1) * nm(v, n, 1));
                for (unsigned s = 1; s <= n; ++s) {
                    if (n % s) continue;
                    CHECK(witt_sigma(nm(u, n, s), s) == nm(u, n, s));
                    for (unsigned s2 = s; s2 <= n; s2 += s)
                        if (n % s2 == 0 && s2 % s == 0) CHECK(nm(u, n, s) == nm(nm(u, n, s2), s2, s));
                }
            }
            for (fe y : all) {
                FqElem Y{T.get(), n, y};
                FqElem d = frobenius(Y, 1) - Y;
                for (unsigned s = 1; s <= n; ++s) CHECK(tr_additive(d, s) == frobenius(Y, s) - Y);
            }
        }
}

TEST_CASE("sigma is a ring homomorphism") {
    auto T = build_tower(3, 1, {2});
    auto all = T->enumerate(2);
    for (std::size_t i = 0; i < 1000; ++i) {
        WittElem a = witt_from(*T, 2, {all[i % 9], all[(i / 9) % 9]});
        WittElem b = witt_from(*T, 2, {all[(i * 7) % 9], all[(i * 5 + 1) % 9]});
        CHECK(witt_sigma(a * b, 1) == witt_sigma(a, 1) * witt_sigma(b, 1));
        CHECK(witt_sigma(a, 2) == a);
    }
}
