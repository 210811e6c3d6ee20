#pragma once

#include <gmpxx.h>

#include <memory>
#include <string>
#include <vector>

#include "coxdl/cyclotomic.hpp"
#include "coxdl/params.hpp"
#include "coxdl/witt.hpp"

namespace coxdl {

// T_h = W_h^×(F_{q^n}). Elements are indexed by e0 + (q^n-1)·u where e0 is
// the log of the residue and u packs the coefficients of t/[residue].
// Generators: the Teichmüller generator first, then a Smith basis of
// U^1/U^h ordered by decreasing order.
class Torus {
public:
    Torus(const GroupSpec& spec, std::shared_ptr<const FieldTower> tower);

    const GroupSpec& spec() const { return spec_; }
    const FieldTower& tower() const { return *tower_; }
    std::shared_ptr<const FieldTower> tower_ptr() const { return tower_; }
    std::uint64_t order() const { return order_; }
    const std::vector<std::uint64_t>& gen_orders() const { return d_; }
    const std::vector<WittElem>& generators() const { return gens_; }
    unsigned conductor() const { return E_; }

    WittElem element(std::uint64_t idx) const;
    std::uint64_t index(const WittElem& t) const;
    std::vector<std::uint64_t> coords(std::uint64_t idx) const;
    std::uint64_t from_coords(const std::vector<std::uint64_t>& y) const;
    std::uint64_t identity() const { return 0; }
    std::uint64_t mul(std::uint64_t a, std::uint64_t b) const;
    std::uint64_t inv(std::uint64_t a) const;
    std::uint64_t sigma(std::uint64_t a, std::int64_t s) const;
    fe residue(std::uint64_t a) const;
    // Largest a with t ≡ 1 mod ϖ^a (h for t = 1).
    unsigned level_of(std::uint64_t a) const;
    // N_{n/r}(t) == 1 ?
    bool in_norm_kernel(std::uint64_t a, unsigned r) const;

private:
    GroupSpec spec_;
    std::shared_ptr<const FieldTower> tower_;
    std::uint64_t Q_, P_, order_;
    unsigned E_;
    std::vector<std::uint64_t> d_;
    std::vector<WittElem> gens_;
    std::vector<std::uint64_t> pmixed_;      // principal index -> mixed radix of p-coordinates
    std::vector<std::uint64_t> pidx_of_;     // inverse
    std::vector<std::uint64_t> sigma1_;      // σ on indices
    std::vector<WittElem> principal_elems_;
};

struct TorusChar {
    const Torus* torus = nullptr;
    std::vector<std::uint64_t> a;   // exponent per generator, modulo its order

    bool operator==(const TorusChar& o) const { return a == o.a; }
    bool operator!=(const TorusChar& o) const { return a != o.a; }
    bool operator<(const TorusChar& o) const { return a < o.a; }
    bool is_trivial() const;
};

std::vector<TorusChar> all_characters(const Torus& T);
TorusChar trivial_character(const Torus& T);
// θ(t) = ζ_E^k; returns k.
std::uint64_t char_exp(const TorusChar& th, std::uint64_t t);
Cyclotomic char_eval(const TorusChar& th, std::uint64_t t);
TorusChar char_mul(const TorusChar& a, const TorusChar& b);
TorusChar char_inv(const TorusChar& a);
// θ ∘ σ^s
TorusChar char_sigma(const TorusChar& th, std::int64_t s);
unsigned char_level(const TorusChar& th);
bool is_general_position(const TorusChar& th, bool restrict_to_U1);
std::vector<TorusChar> galois_orbit(const TorusChar& th);
TorusChar parse_theta(const Torus& T, const std::string& text);
std::string format_theta(const TorusChar& th);

struct HoweDecomposition {
    unsigned t = 1;
    std::vector<unsigned> r;       // K_{r_k} = L_k, increasing, r_t = n
    std::vector<unsigned> levels;  // h_k
    std::vector<unsigned> d;       // [L : L_k] = n / r_k
    std::vector<unsigned> r_of_a;  // r(a) for a = 0..h-1
    bool top_field_proper = false; // θ not in general position
    bool norm_only = false;        // θ factors through N_{L/K}
};

HoweDecomposition howe_decompose(const TorusChar& th);
long r_theta(const HoweDecomposition& hd, const GroupSpec& spec);
mpz_class degree_formula(const HoweDecomposition& hd, const GroupSpec& spec);

}  // namespace coxdl
