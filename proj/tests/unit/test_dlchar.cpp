#include <fstream>
#include "doctest.h"

#include <filesystem>
#include <random>

#include "coxdl/cache.hpp"
#include "coxdl/dlchar.hpp"

using namespace coxdl;

namespace {

Pipeline make(unsigned q, unsigned n, unsigned k, unsigned h) { return Pipeline(GroupSpec::make(q, n, k, h)); }

std::vector<TorusChar> gp_characters(const Torus& T) {
    std::vector<TorusChar> r;
    for (auto& th : all_characters(T))
        if (is_general_position(th, false)) r.push_back(th);
    return r;
}

}  // namespace

TEST_CASE("trace sums at (2,2,0,1)") {
    auto P = make(2, 2, 0, 1);
    std::size_t one = P.group().classes().class_of[P.group().identity_index()];
    auto thetas = all_characters(P.torus());
    REQUIRE(thetas.size() == 3);
    CHECK(P.c_function(thetas[0]).values[one] == Cyclotomic(1, 2));
    auto c = P.c_function(thetas[1]);
    CHECK(c.values[one] == Cyclotomic(1, 2));
    auto rep = P.lambda_extract(c, thetas[1]);
    CHECK(rep.concentrated);
    CHECK(rep.cc == 4);
    CHECK(rep.r == 1);
    CHECK(rep.lambda == -2);
    CHECK(rep.sign_flipped);
    CHECK(rep.chi.values[one] == Cyclotomic(1, 1));
    CHECK(inner_product(rep.chi, rep.chi) == Cyclotomic(1, 1));
}

TEST_CASE("GL_2 oracle") {
    auto P = make(2, 2, 0, 1);
    auto th = gp_characters(P.torus()).front();
    auto o = classical_gl2_oracle(P, th);
    const auto& cl = P.group().classes();
    // classes of S_3 by size: 1, 3 transvections, 2 elements of order 3
    for (std::size_t i = 0; i < cl.rep.size(); ++i) {
        long want = cl.size[i] == 1 ? 1 : (cl.size[i] == 3 ? -1 : 1);
        CHECK(o.values[i] == Cyclotomic(1, want));
    }
    for (unsigned q : {2u, 3u}) {
        auto Q = make(q, 2, 0, 1);
        for (auto& t : gp_characters(Q.torus())) {
            auto oc = classical_gl2_oracle(Q, t);
            CHECK(inner_product(oc, oc) == Cyclotomic(1, 1));
            CHECK(oc.values[Q.group().classes().class_of[Q.group().identity_index()]] == Cyclotomic(1, long(q - 1)));
        }
    }
}

TEST_CASE("pipeline matches the oracle and pins the orientation") {
    for (unsigned q : {2u, 3u}) {
        auto P = make(q, 2, 0, 1);
        bool other_side_differs = false;
        for (auto& th : gp_characters(P.torus())) {
            auto rep = P.lambda_extract(P.c_function(th), th);
            REQUIRE(rep.concentrated);
            CHECK(rep.chi.values == classical_gl2_oracle(P, th).values);
            other_side_differs |= rep.chi.values != classical_gl2_oracle(P, char_inv(th)).values;
        }
        if (q == 3) CHECK(other_side_differs);
    }
}

TEST_CASE("orthogonality bootstrap") {
    for (auto [q, n, k, h] : {std::tuple{2u, 2u, 0u, 1u}, {2u, 2u, 0u, 2u}, {2u, 2u, 1u, 2u}, {3u, 2u, 0u, 1u}}) {
        auto P = make(q, n, k, h);
        std::vector<Cyclotomic> sum(P.group().classes().rep.size(), Cyclotomic(1));
        for (auto& th : all_characters(P.torus())) {
            auto c = P.c_function(th);
            for (std::size_t i = 0; i < sum.size(); ++i) sum[i] += c.values[i];
        }
        for (std::size_t i = 0; i < sum.size(); ++i) CHECK(sum[i] == Cyclotomic(1, long(P.table().at(i, 0))));
    }
}

TEST_CASE("symmetry reduction and pruning do not change the table") {
    for (auto [q, n, k, h] : {std::tuple{2u, 2u, 0u, 2u}, {2u, 2u, 1u, 2u}, {3u, 2u, 0u, 1u}}) {
        auto P = make(q, n, k, h);
        const auto& tab = P.table();
        const auto& cl = P.group().classes();
        CHECK(P.stats().from_symmetry > 0);
        for (std::size_t c = 0; c < tab.classes; ++c)
            for (std::uint64_t t = 0; t < tab.tcount; ++t)
                CHECK(tab.at(c, t) == count_S(P.model(), P.group(), P.group().element(cl.rep[c]), P.torus(), t));
    }
}

TEST_CASE("Galois-conjugate characters give the same character") {
    auto P = make(2, 2, 0, 2);
    for (auto& th : gp_characters(P.torus())) {
        auto a = P.lambda_extract(P.c_function(th), th);
        auto s = char_sigma(th, 1);
        auto b = P.lambda_extract(P.c_function(s), s);
        if (a.concentrated && b.concentrated) CHECK(a.chi.values == b.chi.values);
    }
}

TEST_CASE("twisting by a character of the determinant") {
    auto P = make(2, 2, 0, 2);
    const Torus& T = P.torus();
    const Group& G = P.group();
    // characters of T trivial on ker N are exactly ψ ∘ N
    std::vector<TorusChar> norm_chars;
    for (auto& c : all_characters(T)) {
        bool ok = true;
        for (std::uint64_t t = 0; t < T.order() && ok; ++t)
            if (T.in_norm_kernel(t, 1)) ok = char_exp(c, t) == 0;
        if (ok) norm_chars.push_back(c);
    }
    REQUIRE(norm_chars.size() == 2);   // #W_2^×(F_2) = 2
    auto preimage = [&](std::size_t g) {
        WittElem d = embed(G.det(G.element(g)), 2);
        for (std::uint64_t t = 0; t < T.order(); ++t)
            if (nm(T.element(t), 2, 1) == d) return t;
        FAIL("norm not surjective");
        return std::uint64_t(0);
    };
    const auto& cl = G.classes();
    for (auto& th : gp_characters(T))
        for (auto& chi : norm_chars) {
            auto lhs = P.c_function(char_mul(th, chi));
            auto rhs = P.c_function(th);
            for (std::size_t i = 0; i < cl.rep.size(); ++i)
                CHECK(lhs.values[i] == rhs.values[i] * char_eval(chi, preimage(cl.rep[i])));
        }
}

TEST_CASE("Mackey predictions") {
    auto P = make(2, 2, 0, 2);
    auto triv = trivial_character(P.torus());
    CHECK(mackey_prediction(triv, triv) == 2);
    auto gp = gp_characters(P.torus());
    CHECK(mackey_prediction(gp[0], char_sigma(gp[0], 1)) == 1);
    auto D = make(2, 2, 1, 2);
    auto all = all_characters(D.torus());
    auto res = mackey_matrix(D, all);
    CHECK(res.pass);
    for (std::size_t i = 0; i < all.size(); ++i)
        for (std::size_t j = 0; j < all.size(); ++j) CHECK(res.predicted[i][j] == (i == j));
}

TEST_CASE("verifications at (2,2,0,1)") {
    auto P = make(2, 2, 0, 1);
    for (auto& th : gp_characters(P.torus())) {
        auto rep = P.lambda_extract(P.c_function(th), th);
        CHECK(verify_degree(P, rep).pass);
        auto cu = verify_cuspidal(P, rep, 1);
        CHECK(cu.pass);
        CHECK(cu.detail.find("#N = 2") != std::string::npos);
        CHECK(verify_very_regular(P, rep).pass);
        CHECK(verify_central(P, rep).pass);
    }
    auto D = make(2, 2, 1, 2);
    auto th = gp_characters(D.torus()).back();
    auto v = verify_cuspidal(D, D.lambda_extract(D.c_function(th), th), 1);
    CHECK(v.pass);
    CHECK(v.vacuous);
}

TEST_CASE("count cache round trip") {
    auto dir = std::filesystem::temp_directory_path() / "coxdl_cache_test";
    std::filesystem::remove_all(dir);
    auto spec = GroupSpec::make(2, 2, 0, 2);
    std::vector<std::uint64_t> first;
    {
        Pipeline P(spec);
        SCountCache cache(dir, spec, P.order_hash());
        cache.attach(P);
        first = P.table().counts;
        CHECK(cache.written() == P.stats().computed + P.stats().pruned);
    }
    {
        Pipeline P(spec);
        SCountCache cache(dir, spec, P.order_hash());
        cache.attach(P);
        CHECK(P.table().counts == first);
        CHECK(P.stats().computed == 0);
        CHECK(P.stats().from_cache > 0);
    }
    auto lines = [&] {
        std::ifstream in(dir / "scount_2_2_0_2.jsonl");
        std::size_t k = 0;
        for (std::string l; std::getline(in, l);) ++k;
        return k;
    };
    const std::size_t clean = lines();
    std::ofstream(dir / "scount_2_2_0_2.jsonl", std::ios::app) << "{\"v\":1,\"class\":\n";
    {
        Pipeline P(spec);
        SCountCache cache(dir, spec, P.order_hash());
        CHECK(cache.rejected() == 1);
        CHECK(cache.loaded() == clean);
    }
    CHECK(lines() == clean);   // compaction dropped the corrupt line
    {
        Pipeline P(spec);
        SCountCache cache(dir, spec, "stale");
        CHECK(cache.loaded() == 0);
    }
    std::filesystem::remove_all(dir);
}
