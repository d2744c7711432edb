#pragma once

#include <complex>
#include <tuple>
#include <vector>

#include "tatereg/cyclotomic.hpp"
#include "tatereg/rational.hpp"

namespace tatereg {

// Single-valued dilogarithm arg(1-z) log|z| + Im Li_2(z), accurate to at
// least 12 significant digits away from {0, 1}; exactly 0 on the real line
// and at the boundary points.
double bloch_wigner(std::complex<double> z);

// Formal rational-coefficient sum of brackets [x] over a cyclotomic field,
// kept in normal form under [x] + [x^{-1}] = 0.  Root-of-unity arguments
// use the representative zeta^k with 1 <= k < n/2; other arguments the
// lexicographically smaller of x, x^{-1}.  [1] and [-1] vanish.
class PreBloch {
public:
    explicit PreBloch(long conductor);

    long conductor() const { return n_; }
    PreBloch& add(const Cyclo& x, const mpq_class& coeff);
    // this + scalar * o, pushed into the compositum conductor
    PreBloch combined(const PreBloch& o, const mpq_class& scalar) const;
    PreBloch operator+(const PreBloch& o) const { return combined(o, 1); }
    PreBloch operator-(const PreBloch& o) const { return combined(o, -1); }

    bool is_zero() const { return t_.empty(); }
    bool operator==(const PreBloch& o) const;
    size_t term_count() const { return t_.size(); }
    const std::vector<std::pair<Cyclo, mpq_class>>& terms() const {
        return t_;
    }

    // data of the map [x] -> x wedge (1-x); membership in the Bloch group
    // is not decided here, only the wedge data is exposed
    std::vector<std::tuple<Cyclo, Cyclo, mpq_class>> wedge_terms() const;

    std::string str() const;

private:
    long n_ = 1;
    std::vector<std::pair<Cyclo, mpq_class>> t_; // sorted by Cyclo::compare
};

// the five-term scissors relation element
// [x] - [y] + [y/x] - [(1-1/x)/(1-1/y)] + [(1-x)/(1-y)]
PreBloch five_term(const Cyclo& x, const Cyclo& y);

// m * sum_{i=1..m} [zeta_m^i x] - [x^m]
PreBloch distribution_relation(const Cyclo& x, long m);

// one embedding per conjugate pair: exponents k with gcd(k, n) = 1 and
// 1 <= k < n/2 (just {1} for n <= 2)
std::vector<long> embedding_list(long conductor);
double borel_value(const PreBloch& e, long embedding);
std::vector<double> regulator_vector(const PreBloch& e);

// --- nodal-curve symbols ---------------------------------------------------

// c * prod_i (1 - s_i^{-1} t)^{m_i} with s_i != 0
struct NodalFunction {
    Cyclo constant;
    std::vector<std::pair<Cyclo, long>> factors;
};
struct NodalSymbol {
    struct Term {
        NodalFunction f, g;
        long mult = 1;
    };
    std::vector<Term> terms;
};

// the normalized two-root-of-unity generator symbol
NodalSymbol nodal_pair_symbol(const Cyclo& z1, long m1, const Cyclo& z2,
                              long m2);

// boundary of a nodal symbol into the pre-Bloch group:
// sum over factor pairs of m*n*([s^{-1} t'] - [s^{-1}] - [t']); verifies
// node compatibility and tame triviality away from the node first
PreBloch delta_bar(const NodalSymbol& sym);

// --- numeric contour regulator ----------------------------------------------

struct ComplexRational {
    std::complex<double> constant;
    std::vector<std::pair<std::complex<double>, long>> zeros;
};

ComplexRational embed_nodal(const NodalFunction& f, long embedding);

struct ContourResult {
    double value = 0;
    double angle = 0;
    double est_error = 0;
};
// integral of log|f| d arg(g) - log|g| d arg(f) along the ray
// t -> e^{i angle} t/(1-t); the ray must clear all zeros by `margin`
ContourResult contour_regulator(const ComplexRational& f,
                                const ComplexRational& g, double angle,
                                double margin = 1e-3, double tol = 1e-9);
// admissible ray angles sorted by clearance, best first
std::vector<double> ray_angles(const ComplexRational& f,
                               const ComplexRational& g);

// --- Galois action identities ------------------------------------------------

struct GaloisBetaReport {
    bool basic_relations = false; // b1(-k) = -b1(k), b2(-k) = b2(k)
    bool sigma_b1 = false;        // sigma* b1 = b1
    bool sigma_b2 = false;        // sigma* b2 = -b2
    bool tau_b1 = false;          // tau* b1 = -b1
    bool tau_b2 = false;          // tau* b2 = b2
    bool exact_all = false;
    // which candidate action of tau on zeta_l satisfies the identities
    bool tau_acts_by_square = false;
    bool tau_nonsquare_fails = false;
    double max_numeric_residual = 0.0;
};
GaloisBetaReport galois_beta_check(long l, long m);

} // namespace tatereg
