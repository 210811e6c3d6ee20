#include <doctest.h>

#include "coxdl/langlands.hpp"

using namespace coxdl;

TEST_CASE("rectifier") {
    CHECK(rectifier(2) == -1);
    CHECK(rectifier(3) == 1);
    CHECK(rectifier(4) == -1);
}

TEST_CASE("Weil model group law") {
    WeilModel W(2, 2, 1);
    CHECK(W.order_A() == 6);
    CHECK(W.order() == 12);
    // associativity and inverses, exhaustively
    for (std::uint64_t a = 0; a < W.order(); ++a) {
        auto x = W.element(a);
        CHECK(W.index(x) == a);
        CHECK(W.mul(x, W.inv(x)) == W.element(0));
        for (std::uint64_t b = 0; b < W.order(); ++b)
            for (std::uint64_t c = 0; c < W.order(); c += 5) {
                auto y = W.element(b), z = W.element(c);
                CHECK(W.mul(W.mul(x, y), z) == W.mul(x, W.mul(y, z)));
            }
    }
    // F^n = ϖ
    WeilModel::Elt F{0, 0, 1};
    CHECK(W.mul(F, F) == (WeilModel::Elt{0, 1, 0}));
}

TEST_CASE("induced parameters at (2,2) level 1") {
    WeilModel W(2, 2, 1);
    auto th = all_characters(W.torus());
    REQUIRE(th.size() == 3);
    for (auto& t : th) {
        auto s = sigma_theta(W, t);
        CHECK(s.dim() == Cyclotomic(1, 2));
        // off A the induced character vanishes
        for (std::uint64_t i = W.order_A(); i < W.order(); ++i) CHECK(s.values[i].is_zero());
        bool gp = is_general_position(t, false);
        CHECK((param_inner(s, s) == Cyclotomic(1, 1)) == gp);
        if (!gp) CHECK(param_inner(s, s) == Cyclotomic(1, 2));
    }
    CHECK(verify_param_bijection(W, th).pass);
    for (auto& t : th) CHECK(verify_det_on_A(W, t).pass);
}

TEST_CASE("orbits at (3,2) level 1") {
    WeilModel W(3, 2, 1);
    auto th = all_characters(W.torus());
    CHECK(th.size() == 8);
    auto v = verify_param_bijection(W, th);
    CHECK(v.pass);
    // 6 gp characters in 3 orbits, 2 Galois-fixed ones
    CHECK(v.detail.find("irreducible=6 distinct parameters=5") != std::string::npos);
}

TEST_CASE("Macdonald volume and formal degree") {
    CHECK(macdonald_volume(GroupSpec::make(2, 2, 1, 1)) == mpq_class(1, 2));
    CHECK(macdonald_volume(GroupSpec::make(3, 2, 0, 1)) == mpq_class(1, 1));
    // (q - 1)(q^2 - 1)/3 at q = 2
    CHECK(macdonald_volume(GroupSpec::make(2, 3, 0, 1)) == mpq_class(1));
    Pipeline P(GroupSpec::make(2, 2, 1, 2), {});
    for (auto& th : all_characters(P.torus())) {
        if (!is_general_position(th, true)) continue;
        auto fd = formal_degree_check(P, th);
        CHECK(fd.verdict.pass);
        CHECK(fd.measured == 2);
    }
}
