#pragma once

#include <gmpxx.h>

#include <complex>
#include <string>
#include <vector>

#include "tatereg/errors.hpp"

namespace tatereg {

// Element of Q(zeta_n), represented by a rational-coefficient polynomial in
// zeta_n reduced modulo the n-th cyclotomic polynomial.  Exact arithmetic;
// equality is coefficient equality.
class Cyclo {
public:
    Cyclo() = default;

    static Cyclo zero(long conductor);
    static Cyclo one(long conductor);
    static Cyclo from_rational(long conductor, const mpq_class& r);
    static Cyclo zeta(long conductor, long exponent = 1);

    long conductor() const { return n_; }
    long degree() const { return static_cast<long>(c_.size()); }

    bool is_zero() const;
    bool is_one() const;
    bool is_rational(mpq_class* value = nullptr) const;
    bool operator==(const Cyclo& o) const;
    bool operator!=(const Cyclo& o) const { return !(*this == o); }
    // deterministic total order (conductor, then lexicographic coefficients)
    static int compare(const Cyclo& a, const Cyclo& b);

    Cyclo operator-() const;
    Cyclo operator+(const Cyclo& o) const;
    Cyclo operator-(const Cyclo& o) const;
    Cyclo operator*(const Cyclo& o) const;
    Cyclo operator/(const Cyclo& o) const;
    Cyclo inv() const;
    Cyclo pow(long k) const;

    // zeta_n -> zeta_n^s for gcd(s, n) = 1
    Cyclo galois(long s) const;
    // push into Q(zeta_m) for n | m
    Cyclo to_conductor(long m) const;
    // evaluation under zeta_n -> exp(2 pi i k / n)
    std::complex<double> embed(long k) const;

    // exponent t with *this == zeta_n^t, if this is a root of unity
    bool root_of_unity_exponent(long* t) const;

    std::string str() const;

    // n-th cyclotomic polynomial (integer coefficients, monic)
    static const std::vector<mpz_class>& cyclotomic_polynomial(long n);

private:
    Cyclo(long n, std::vector<mpq_class> c) : n_(n), c_(std::move(c)) {}
    void reduce();

    long n_ = 0;
    std::vector<mpq_class> c_; // size phi(n), basis 1, zeta, ..., zeta^{phi-1}
};

long euler_phi(long n);

} // namespace tatereg
