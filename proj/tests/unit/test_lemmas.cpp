#include <doctest.h>

#include <numeric>

#include "coxdl/lemmas.hpp"

using namespace coxdl;

TEST_CASE("norm image sizes against a trace-zero count") {
    // U^1/U^2 of W_2(F_9) is (F_9,+) and the norm becomes the trace.
    GF F9(3, 2);
    unsigned trace_zero = 0;
    for (std::uint32_t w = 0; w < 9; ++w) trace_zero += F9.trace_prime(F9.from_packed(w)) == 0;
    CHECK(trace_zero == 3);
    auto v = verify_norm_image(3, 2, 1, 2);
    CHECK(v.pass);
    CHECK(v.detail.find("#kerN=3") != std::string::npos);
    CHECK(v.detail.find("#im=3") != std::string::npos);
    for (auto [q, n, m, h] : {std::array<unsigned, 4>{2, 3, 1, 2}, {3, 2, 1, 3}, {2, 3, 2, 3}}) CHECK(verify_norm_image(q, n, m, h).pass);
    auto gated = verify_norm_image(2, 2, 1, 2);
    CHECK(gated.skipped);
}

TEST_CASE("R_h fibers are affine lines when p > s") {
    auto v = verify_Rh_fibers(3, 2, 1, 3, 2);
    CHECK(v.pass);
    CHECK_FALSE(v.skipped);
    // p = s: each fiber is two lines, so the gate must trip
    auto w = verify_Rh_fibers(2, 3, 2, 2, 3);
    CHECK(w.skipped);
    CHECK(w.reason.find("4 lifts") != std::string::npos);
}

TEST_CASE("curve reduction counts") {
    CHECK(verify_curve_reduction(2, 1, 1, 1, 2, 3).pass);
    CHECK(verify_curve_reduction(5, 2, 3, 2, 3, 3).pass);
    CHECK(verify_curve_reduction(5, 1, 1, 2, 5, 3).pass);
    auto v = verify_curve_reduction(3, 1, 1, 1, 2, 3);
    CHECK(v.pass);
    // ac + bd = p: the chain stops and the curve has 3^{m+1} points
    CHECK(v.detail.find("m=1:9->9") != std::string::npos);
    CHECK(verify_curve_reduction(3, 0, 1, 1, 2, 1).skipped);
}

TEST_CASE("minor identity") {
    CHECK(verify_minor_identity(GroupSpec::make(2, 3, 0, 1), 1, SampleMode::exhaustive, 0, 3, 1).pass);
    CHECK(verify_minor_identity(GroupSpec::make(2, 3, 0, 1), 2, SampleMode::exhaustive, 0, 3, 1).pass);
    CHECK(verify_minor_identity(GroupSpec::make(2, 4, 0, 2), 2, SampleMode::random, 100, 4, 5).pass);
    auto v = verify_minor_identity(GroupSpec::make(2, 4, 2, 1), 1, SampleMode::random, 200, 6, 9);
    CHECK(v.pass);
    CHECK(v.reason.find("j < i0 fails") != std::string::npos);
    CHECK(verify_minor_identity(GroupSpec::make(2, 6, 3, 1), 2, SampleMode::random, 100, 6, 11).pass);
    CHECK(verify_minor_identity(GroupSpec::make(3, 4, 2, 2), 1, SampleMode::random, 50, 4, 13).pass);
}

TEST_CASE("quotient fibers") {
    auto a = verify_quotient_fibers(GroupSpec::make(2, 2, 0, 1), 1, {2, 4}, 3);
    CHECK(a.pass);
    CHECK(a.detail.find("#N=2") != std::string::npos);
    auto b = verify_quotient_fibers(GroupSpec::make(2, 2, 0, 2), 1, {2}, 3);
    CHECK(b.pass);
    CHECK(b.detail.find("#X=96") != std::string::npos);
    // F_8 is the first field with points at n = 3
    auto c = verify_quotient_fibers(GroupSpec::make(2, 3, 0, 1), 2, {3}, 3);
    CHECK(c.pass);
}

TEST_CASE("Turnbull tableaux") {
    auto v = verify_turnbull(200, 77);
    CHECK(v.pass);
    CHECK(v.seed == 77);
}

TEST_CASE("emptiness predicate and staircases") {
    CHECK_FALSE(sigma_w_empty_predicate({1, 2}));
    CHECK_FALSE(sigma_w_empty_predicate({2, 1}));
    CHECK(staircase({2, 1}) == std::vector<unsigned>{1, 2});
    CHECK(staircase({1, 2, 3}) == std::vector<unsigned>{3});
    // [w(2)] = 3 > [w(1)+1] = 2 > 1
    CHECK(sigma_w_empty_predicate({1, 3, 2}));
    CHECK(staircase({1, 3, 2}).empty());
    CHECK(staircase({3, 1, 2}).empty() == sigma_w_empty_predicate({3, 1, 2}));
    for (unsigned n = 2; n <= 6; ++n) {
        CHECK(sigma_w_criteria(n, 0).pass);
        if (n % 2 == 0) CHECK(sigma_w_criteria(n, n / 2).pass);
    }
    // δ = indicator of {1} on Z/3: shifts differ, sum is q^a - q^b
    CHECK(regular_torus_sum_nonzero({1, 0, 0}, 2, 1, 2));
    // periodic δ with period dividing i - j gives zero
    CHECK_FALSE(regular_torus_sum_nonzero({1, 0, 1, 0}, 3, 1, 2));
}

TEST_CASE("sigma-hat emptiness at h = 1") {
    std::vector<unsigned> w{1, 3, 2};
    CHECK(sigma_hat_points(2, 3, 1, w) == 0);
    // the identity cell is not empty
    CHECK(sigma_hat_points(2, 2, 1, {1, 2}) > 0);
}
