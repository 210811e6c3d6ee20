#pragma once

#include <gmpxx.h>

#include <memory>
#include <vector>

#include "coxdl/dlchar.hpp"
#include "coxdl/torus.hpp"

namespace coxdl {

// μ(ϖ) for the unramified rectifier; μ is trivial on U_L.
int rectifier(unsigned n);

// M = A ⋊ <F>, A = U_L/U_L^h × <ϖ>/<ϖ^{nm}>, F a F^{-1} = σ(a), F^n = ϖ.
class WeilModel {
public:
    struct Elt {
        std::uint64_t t = 0;   // torus index
        unsigned k = 0;        // ϖ exponent mod n·m
        unsigned j = 0;        // F exponent mod n
        bool operator==(const Elt& o) const { return t == o.t && k == o.k && j == o.j; }
    };

    WeilModel(unsigned q, unsigned n, unsigned h, unsigned m = 1);

    unsigned n() const { return n_; }
    unsigned m() const { return m_; }
    const Torus& torus() const { return *T_; }
    std::uint64_t order_A() const { return T_->order() * n_ * m_; }
    std::uint64_t order() const { return order_A() * n_; }

    Elt element(std::uint64_t idx) const;
    std::uint64_t index(const Elt& e) const;
    Elt mul(const Elt& a, const Elt& b) const;
    Elt inv(const Elt& a) const;
    bool in_A(const Elt& e) const { return e.j == 0; }

private:
    unsigned n_, m_;
    std::shared_ptr<FieldTower> tower_;
    std::unique_ptr<Torus> T_;
};

struct ParamChar {
    const WeilModel* W = nullptr;
    std::vector<Cyclotomic> values;   // by element index
    Cyclotomic dim() const { return values.at(0); }
};

// Ind_A^M(θ·μ·ν) with ν(ϖ) = ζ_{nm}^{varpi_exp}, by the induced-character sum
// over all of M.
ParamChar sigma_theta(const WeilModel& W, const TorusChar& th, long varpi_exp = 0);
Cyclotomic param_inner(const ParamChar& a, const ParamChar& b);

// Equal parameters ⟺ same Galois orbit; irreducible ⟺ general position;
// ⟨σ_θ, σ_θ'⟩ = #{γ : θ' = θ^γ}.
Verdict verify_param_bijection(const WeilModel& W, const std::vector<TorusChar>& thetas);
// det σ_θ on A from the explicit induced matrices against ∏_γ θ^γ · μ^n.
Verdict verify_det_on_A(const WeilModel& W, const TorusChar& th);

mpq_class macdonald_volume(const GroupSpec& spec);

struct FormalDegree {
    Verdict verdict;
    mpq_class volume;
    mpq_class measured;   // χ_θ(1)
    mpz_class formula;
};
FormalDegree formal_degree_check(Pipeline& P, const TorusChar& th);

}  // namespace coxdl
