#pragma once

#include <utility>
#include <vector>

#include "tatereg/padic.hpp"

namespace tatereg {

// Lower bound on the order of coefficients beyond a window edge, linear in
// the distance d >= 1: base + floor(slope_num*d/slope_den).  `infinite`
// means the series is exactly zero beyond the edge.
struct Tail {
    bool infinite = true;
    long base = 0;
    long slope_num = 0;
    long slope_den = 1;

    long bound(long dist) const {
        if (infinite) return kInfPrec;
        if (dist < 1) dist = 1;
        return base + (slope_num * (dist - 1)) / slope_den;
    }
    static Tail exact() { return Tail{}; }
    static Tail flat(long b) { return Tail{false, b, 0, 1}; }
    static Tail linear(long b, long num, long den) {
        return Tail{false, b, num, den};
    }
};

// Truncated element of R<u>: coefficients on a finite exponent window with
// per-coefficient certified precision, plus tail certificates bounding the
// order of everything outside the window.
class Laurent {
public:
    Laurent() = default;
    Laurent(const Field* F, long lo, long hi);

    static Laurent constant(const PAdic& c);
    static Laurent monomial(const PAdic& c, long n);

    const Field& field() const { return *F_; }
    const Field* field_ptr() const { return F_; }
    long lo() const { return lo_; }
    long hi() const { return hi_; }
    bool in_window(long n) const { return n >= lo_ && n <= hi_; }

    const PAdic& coeff(long n) const;
    void set_coeff(long n, PAdic c);
    // Certified lower bound on ord of the true coefficient at any index.
    long ord_bound(long n) const;
    // min of ord_bound over every index (window and tails).
    long global_floor() const;

    const Tail& lo_tail() const { return tlo_; }
    const Tail& hi_tail() const { return thi_; }
    void set_lo_tail(Tail t) { tlo_ = t; }
    void set_hi_tail(Tail t) { thi_ = t; }

    Laurent operator-() const;
    Laurent operator+(const Laurent& o) const;
    Laurent operator-(const Laurent& o) const;
    Laurent operator*(const Laurent& o) const;
    Laurent scaled(const PAdic& c) const;     // c * f
    Laurent shifted(long k) const;            // u^k * f
    Laurent scale_arg(const PAdic& g) const;  // f(g*u)
    Laurent flipped() const;                  // f(u^{-1})
    Laurent derivative() const;               // df/du
    // Restrict the window, folding dropped coefficients into the tails.
    Laurent truncated(long lo, long hi) const;
    Laurent cap_coeff_prec(long abs_prec) const;

    // Sufficient invertibility-in-R<u> condition: the u^0 coefficient is a
    // unit of R and everything else has strictly positive order.
    bool unit_flag() const;
    // Inverse of a unit-flag element, computed on [lo,hi] with the
    // geometric series cut so the residual has ord >= target_prec.
    Laurent invert_unit(long lo, long hi, long target_prec) const;
    // Inverse of a u-adic unit u^m*G (lowest coefficient a unit, nothing
    // below it): power-series inversion of G, window [-m+?.. hi].
    Laurent invert_power_series(long hi, long target_prec) const;

    // ord lower bound certificates for "zero on the window" assertions:
    // min over [a,b] of the certified vanishing order; -1 if any
    // coefficient is certified nonzero.
    long zero_margin(long a, long b) const;

    std::string str(long max_terms = 16) const;

private:
    const Field* F_ = nullptr;
    long lo_ = 0, hi_ = -1;
    std::vector<PAdic> c_;
    Tail tlo_ = Tail::exact();
    Tail thi_ = Tail::exact();
};

// --- factored units and the residue of dlog ------------------------------

// A product prod_i F_i^{e_i} of invertible series.
struct FactoredUnit {
    std::vector<std::pair<Laurent, long>> factors;
};

// Res(df/f) mod n for f = u^{u_exponent} * (factored unit part).  Each
// factor's dlog residue is computed by expanding F'/F on a window around
// u^{-1} with the inversion mode the factor supports.
long residue_dlog(long u_exponent, const FactoredUnit& unit, long modulus);
// Single-factor convenience form.
long residue_dlog(long u_exponent, const Laurent& unit, long modulus);

// pi-order threshold above which 1+x is certified to be a p^nu-th power of
// a unit: nu*e + ceil(e/(p-1)) + 1.
long power_reduction_threshold(const Field& F, long nu);
// Sharp sufficient depth for the p^nu-th power certificate of a 1-unit:
// the least integer strictly greater than nu*e + e/(p-1).
long pnu_power_depth(const Field& F, long nu);

// p^nu-th root of a 1-unit u = 1 + x with ord(x) > nu*e + e/(p-1), via the
// binomial series; the result r satisfies r^{p^nu} = u to precision.
PAdic pnu_root_one_unit(const PAdic& u, long nu);
// Same for a series 1 + s whose coefficients all satisfy the depth
// bound; the root is computed on the window [lo, hi].
Laurent pnu_root_one_plus(const Laurent& s, long nu, long lo, long hi);

// Drop factors of a FactoredUnit that are certified p^nu-th powers; the
// certificate records the threshold used.
struct ReduceResult {
    FactoredUnit kept;
    long dropped_count = 0;
    long threshold = 0;
};
ReduceResult reduce_mod_power(const FactoredUnit& f, long nu);

} // namespace tatereg
