#pragma once

#include <gmpxx.h>

#include <functional>
#include <memory>
#include <unordered_map>
#include <vector>

#include "coxdl/torus.hpp"

namespace coxdl {

struct FeVecHash {
    std::size_t operator()(const std::vector<fe>& v) const {
        std::size_t h = 1469598103934665603ull;
        for (fe x : v) h = (h ^ x) * 1099511628211ull;
        return h;
    }
};

mpz_class group_order(const GroupSpec& spec);

// The finite group G_h with all elements enumerated and indexed.
//  κ = 0: n×n matrices over W_h(F_q), flat row-major, each entry h
//         coefficients in F_q (coefficient-major inside an entry).
//  n' = 1: Σ_{j ≤ n(h-1)} [a_j] Π^j with a_j ∈ F_{q^n}, a_0 ≠ 0,
//         Π [a] = [σ^e(a)] Π, e = -k0^{-1} mod n, Π^n = ϖ.
class Group {
public:
    using Elt = std::vector<fe>;
    static constexpr std::uint64_t cap = 1000000;

    Group(const GroupSpec& spec, std::shared_ptr<const FieldTower> tower);

    const GroupSpec& spec() const { return spec_; }
    const FieldTower& tower() const { return *tower_; }
    bool is_matrix_model() const { return spec_.kappa == 0; }
    unsigned pi_twist() const { return e_; }          // e with Π a = σ^e(a) Π
    unsigned length() const { return len_; }          // n(h-1)+1 for the division model

    std::size_t size() const { return elts_.size(); }
    const Elt& element(std::size_t i) const { return elts_[i]; }
    std::size_t index_of(const Elt& g) const;
    std::size_t identity_index() const { return id_; }

    Elt mul(const Elt& a, const Elt& b) const;
    Elt inv(const Elt& a) const;
    Elt identity() const;
    std::size_t mul_idx(std::size_t a, std::size_t b) const { return index_of(mul(elts_[a], elts_[b])); }

    // κ = 0: entry (i, j) as a Witt vector over F_q.
    WittElem entry(const Elt& g, unsigned i, unsigned j) const;
    Elt from_entries(const std::vector<std::vector<WittElem>>& m) const;
    WittElem det(const Elt& g) const;          // κ = 0 only

    // Conjugacy classes: representatives are least indices.
    struct Classes {
        std::vector<std::size_t> rep;
        std::vector<std::size_t> size;
        std::vector<std::size_t> class_of;   // element index -> class number
    };
    const Classes& classes() const;
    const std::vector<std::size_t>& generators() const;

private:
    GroupSpec spec_;
    std::shared_ptr<const FieldTower> tower_;
    unsigned e_ = 0, len_ = 0;
    std::vector<Elt> elts_;
    std::unordered_map<Elt, std::size_t, FeVecHash> idx_;
    std::size_t id_ = 0;
    mutable std::unique_ptr<Classes> classes_;
    mutable std::vector<std::size_t> gens_;
};

// Indices (into the group) of N_h for the standard parabolic with blocks
// (i0, n - i0): identity diagonal blocks, free upper-right block.
std::vector<std::size_t> parabolic_radical(const Group& G, unsigned i0);

// Image of a torus element in G_h.
Group::Elt embed_torus_element(const Group& G, const Torus& T, std::uint64_t t);

// Torus elements whose residue generates F_{q^n} over F_q.
std::vector<std::uint64_t> very_regular_elements(const Torus& T);

}  // namespace coxdl
