#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "tatereg/laurent.hpp"

namespace tatereg {

// The Tate curve K*/q^Z for a period q with ord(q) > 0.
class TateCurve {
public:
    TateCurve(const Field* F, PAdic q);

    const Field& field() const { return *F_; }
    const Field* field_ptr() const { return F_; }
    const PAdic& q() const { return q_; }
    long n_period() const { return nq_; } // ord(q)

    // k with alpha = q^k to precision, if alpha lies in q^Z.
    std::optional<long> q_power_class(const PAdic& alpha) const;
    // alpha = q^k * alpha' with 0 <= ord(alpha') < ord(q).
    std::pair<PAdic, long> normalize_to_fundamental(const PAdic& alpha) const;

    // theta as a Laurent window: (1-u) prod_{k<=k_max} (1-q^k u)(1-q^k u^{-1})
    // expanded on [-window, window]; coefficients carry the truncation cap
    // (k_max+1)*ord(q) as their precision.
    Laurent theta_series(long window, long k_max) const;
    // same content split as (1-u) * Theta with Theta a unit-flag series
    std::pair<Laurent, Laurent> theta_series_split(long window,
                                                   long k_max) const;
    // theta(gamma*u) built from its own linear factors, split as
    // (1 - gamma u) * (unit-flag remainder); needs |ord(gamma)| < ord(q)
    std::pair<Laurent, Laurent> theta_series_shifted_split(
        const PAdic& gamma, long window, long k_max) const;

    // direct product evaluation; exact zero iff alpha lies in q^Z
    PAdic theta_eval(const PAdic& alpha) const;
    // A = prod_{n>=1} (1-q^n)^2, the limit of theta(u)/(1-u) at u = 1
    PAdic theta_deriv_unit() const;

    std::pair<PAdic, PAdic> curve_coefficients() const; // (a4, a6)

    // X(u), Y(u) on the exponent window [-B, B]
    std::pair<Laurent, Laurent> xy_series(long B) const;

    struct Point {
        bool infinity = true;
        PAdic x, y;
    };
    Point point_eval(const PAdic& u0) const;
    // chord-tangent addition on y^2 + xy = x^3 + a4 x + a6
    Point add_points(const Point& P, const Point& Q) const;
    Point negate_point(const Point& P) const;
    // y^2 + xy - x^3 - a4 x - a6, for on-curve checks
    PAdic curve_equation_residual(const Point& P) const;

    // S(alpha) = prod_{k>=1} ((1-alpha q^k)/(1-alpha^{-1} q^k))^k truncated
    // at the p^nu-th power threshold; requires |ord(alpha)| < ord(q).
    PAdic s_value(const PAdic& alpha, long nu) const;

private:
    const Field* F_;
    PAdic q_;
    long nq_;
};

// One theta factor theta(shift * u)^exponent with the shift normalized to
// the fundamental domain 0 <= ord(shift) < ord(q).
struct ThetaFactor {
    PAdic shift;
    long exponent;
};

// c * u^e * prod_i theta(shift_i u)^{e_i} with exact divisor data.
class ThetaProduct {
public:
    explicit ThetaProduct(const TateCurve* E);
    static ThetaProduct constant(const TateCurve* E, const PAdic& c);

    const TateCurve& curve() const { return *E_; }
    const PAdic& constant_part() const { return c_; }
    long u_power() const { return e_; }
    const std::vector<ThetaFactor>& factors() const { return factors_; }

    // multiply by c, u^k, theta(shift u)^m (normalizing the shift)
    ThetaProduct& mul_constant(const PAdic& c);
    ThetaProduct& mul_upower(long k);
    ThetaProduct& mul_theta(const PAdic& shift, long exponent);

    ThetaProduct operator*(const ThetaProduct& o) const;
    ThetaProduct pow(long k) const;
    ThetaProduct inverse() const;

    // q-periodicity: sum of exponents 0 and prod shift_i^{e_i} = q^{u_power}
    bool q_periodic() const;

    // order of vanishing at the class of alpha in K*/q^Z
    long order_at_class(const PAdic& alpha) const;
    // value at a point whose class is not in the divisor
    PAdic eval(const PAdic& u0) const;
    // limit of f/(u-alpha)^m at alpha, m = order_at_class(alpha)
    PAdic leading_value_at_class(const PAdic& alpha) const;

    std::string str() const;

private:
    const TateCurve* E_;
    PAdic c_;
    long e_ = 0;
    std::vector<ThetaFactor> factors_;
};

// The function c * prod_i theta(a_i u)/theta(b_i u); requires the
// q-periodicity condition prod a_i/b_i = 1 to hold to precision.
ThetaProduct function_from_divisor(const TateCurve* E, const PAdic& c,
                                   const std::vector<std::pair<PAdic, PAdic>>& pairs);

} // namespace tatereg
