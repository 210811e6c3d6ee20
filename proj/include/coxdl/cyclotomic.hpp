#pragma once

#include <gmpxx.h>

#include <complex>
#include <string>
#include <vector>

namespace coxdl {

// Element of Q(ζ_E), stored as its remainder modulo the E-th cyclotomic
// polynomial (coefficient vector of length φ(E)). Operands with different
// conductors are lifted to the lcm.
class Cyclotomic {
public:
    explicit Cyclotomic(unsigned E = 1);
    Cyclotomic(unsigned E, const mpq_class& r);
    static Cyclotomic zeta_pow(unsigned E, long k);
    // Σ g[i] ζ_E^i for a group-ring vector of length E.
    static Cyclotomic from_group_ring(unsigned E, const std::vector<mpq_class>& g);
    static Cyclotomic from_group_ring(unsigned E, const std::vector<long>& g);

    unsigned conductor() const { return E_; }
    const std::vector<mpq_class>& coeffs() const { return c_; }

    Cyclotomic operator+(const Cyclotomic& o) const;
    Cyclotomic operator-(const Cyclotomic& o) const;
    Cyclotomic operator-() const;
    Cyclotomic operator*(const Cyclotomic& o) const;
    Cyclotomic operator*(const mpq_class& r) const;
    Cyclotomic& operator+=(const Cyclotomic& o) { return *this = *this + o; }
    bool operator==(const Cyclotomic& o) const;
    bool operator!=(const Cyclotomic& o) const { return !(*this == o); }

    Cyclotomic conj() const;
    Cyclotomic lift(unsigned L) const;   // E | L
    bool is_zero() const;
    bool is_rational() const;
    mpq_class rational() const;          // throws unless is_rational()
    std::complex<double> to_complex() const;
    std::string str() const;

private:
    unsigned E_;
    std::vector<mpq_class> c_;
};

const std::vector<long>& cyclotomic_polynomial(unsigned E);
unsigned euler_phi(unsigned E);

}  // namespace coxdl
