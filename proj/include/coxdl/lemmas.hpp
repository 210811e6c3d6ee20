#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "coxdl/variety.hpp"

namespace coxdl {

struct LemmaVerdict {
    std::string id;
    std::string params;
    bool pass = false;
    bool skipped = false;
    std::string reason;    // skip reason or hypothesis note
    std::string witness;   // concrete counterexample on failure
    std::string detail;
    std::uint64_t seed = 0;
};

LemmaVerdict verify_norm_image(unsigned q, unsigned n, unsigned m, unsigned h);

// Fibers of R_h → R_{h-1} over F_{q^k}, k ≤ m_max, for
// R_h = {(y, x) ∈ U¹ × U¹ : Nm_{r/1}(σ(y)/y) = Nm_{s/1}(x)}.
LemmaVerdict verify_Rh_fibers(unsigned q, unsigned r, unsigned s, unsigned h, unsigned m_max);

// a tr_c(x) + b tr_d(x) = tr_d(y^q - y) against its Euclidean reduction.
LemmaVerdict verify_curve_reduction(unsigned q, unsigned a, unsigned b, unsigned c, unsigned d, unsigned m_max);

enum class SampleMode { exhaustive, random };

// |g(m)| = |g(x)| · ∏_{j=1}^{i0-1} σ^j |g(x')| over coordinates in F_{q^M}.
LemmaVerdict verify_minor_identity(const GroupSpec& spec, unsigned i0, SampleMode mode, unsigned samples,
                                   unsigned M, std::uint64_t seed);

// κ = 0: N_h-invariance of x ↦ (m(x), x'), bucket sizes over F_{q^M} for M in
// the schedule, and certification of empty buckets over extensions.
LemmaVerdict verify_quotient_fibers(const GroupSpec& spec, unsigned i0, const std::vector<unsigned>& M_schedule,
                                    std::uint64_t seed);

LemmaVerdict verify_turnbull(unsigned trials, std::uint64_t seed);

struct SigmaWReport {
    unsigned n = 0, kappa = 0;
    std::size_t elements = 0, predicate_true = 0, staircases = 0, delta_pairs = 0;
    bool pass = true;
    std::string witness;
};

// Emptiness predicate ∃ i: [w(i)] > [w(i-1)+1] > 1, with [a] ∈ {1..n}.
bool sigma_w_empty_predicate(const std::vector<unsigned>& w);
// Breakpoints i_1 < ... < i_s = n of the staircase decomposition; empty if w
// does not have that shape.
std::vector<unsigned> staircase(const std::vector<unsigned>& w);
bool regular_torus_sum_nonzero(const std::vector<int>& delta, unsigned i, unsigned j, long q);
SigmaWReport sigma_w_criteria(unsigned n, unsigned kappa);

// Points of Σ̂_w at h = 1, κ = 0 with coordinates in F_{q^m}.
std::uint64_t sigma_hat_points(unsigned q, unsigned n, unsigned m, const std::vector<unsigned>& w);
LemmaVerdict verify_sigma_w(unsigned n_max);

}  // namespace coxdl
