#pragma once

#include <string>
#include <vector>

#include "tatereg/rational.hpp"
#include "tatereg/tate.hpp"

namespace tatereg {

// Formal sum of Milnor symbols {f, g} of theta products on one curve.
struct MilnorSymbol {
    struct Term {
        ThetaProduct f, g;
        long mult = 1;
    };
    const TateCurve* E = nullptr;
    std::vector<Term> terms;
};

// Operations adapter instantiating the tame engine over K.
struct PAdicOps {
    const Field* F;
    PAdic one() const { return F->one(); }
    PAdic add(const PAdic& a, const PAdic& b) const { return a + b; }
    PAdic mul(const PAdic& a, const PAdic& b) const { return a * b; }
    PAdic inv(const PAdic& a) const { return a.inv(); }
    PAdic neg(const PAdic& a) const { return -a; }
    PAdic pow(const PAdic& a, long k) const { return a.pow(k); }
    bool eq(const PAdic& a, const PAdic& b) const { return a.eq_to_prec(b); }
    bool is_zero(const PAdic& a) const { return a.is_zero_to_precision(); }
};

using PadicRational = FactoredRational<PAdic>;
using PadicTame = TameEngine<PAdic, PAdicOps>;

// --- tame symbols ---------------------------------------------------------

// Tame symbol of the curve-mode symbol at the class of alpha, from exact
// theta divisor data.
PAdic tame_symbol(const MilnorSymbol& sym, const PAdic& alpha);

// Rational-function fallback mode on P^1: tame symbol at t = z0 (or at 0).
PAdic tame_symbol_rational(const Field& F, const PadicRational& f,
                           const PadicRational& g, const PAdic& z0);
PAdic tame_symbol_rational_at_zero(const Field& F, const PadicRational& f,
                                   const PadicRational& g);

// Membership in H^0(E, K_2): every class-wise tame symbol is 1.
struct MembershipReport {
    bool ok = true;
    long min_margin = 0; // certified digits of the worst |value - 1|
    std::vector<std::string> failures;
};
MembershipReport check_membership(const MilnorSymbol& sym);

// --- the regulator projection ---------------------------------------------

// Truncate a theta product modulo p^nu-th powers: every linear factor with
// coefficient order above the reduction threshold is dropped (each dropped
// factor is a certified p^nu-th power in the function ring).
PadicRational reduce_theta_product(const ThetaProduct& f, long nu);

// Sum of tame symbols over the region ord(alpha) > 0 together with
// alpha = 0, for a reduced rational pair.
PAdic tau_hat_rational(const TateCurve& E, const PadicRational& f,
                       const PadicRational& g);

// The regulator value tau of a symbol, well-defined mod (K*)^{p^nu}.
// For q-periodic symbols the membership check runs first (and failures
// raise); symbols with non-periodic entries are treated as function-ring
// symbols and skip it.
PAdic tau_infty(const MilnorSymbol& sym, long nu);

// ord_K(tau_infty), asserted stable across nu and nu+1.
long boundary_integer(const MilnorSymbol& sym, long nu);

// --- the p^nu-th power certificate ----------------------------------------

struct PowerCertificate {
    bool ok = false;
    long ord = 0;          // ord of the tested value
    long depth = 0;        // 1-unit depth after stripping pi^ord and roots
    long required = 0;     // depth needed for the binomial certificate
    std::string detail;
};
PowerCertificate pnu_power_certificate(const PAdic& w, long nu);

// --- named symbol families and their closed forms --------------------------

// xi = {f(u)/f(pi0^{-b}), g(u)/g(pi0^{-a})} built from
// f = (-u)^a (theta(pi0^a u)/theta(u))^r and the same with b.
MilnorSymbol build_xi_symbol(const TateCurve* E, const PAdic& pi0, long a,
                             long b, long r);

struct PairCheck {
    PAdic lhs, rhs;
    PowerCertificate cert;
    bool match = false;
    long ord_lhs = 0;
};

// brute-force tau against the closed form
//   (-1)^{a(r-b)} pi0^{a(b-a)(b-r)}
//   (theta(pi0^b)^b / (theta(pi0^{b-a})^{b-a} theta(pi0^a)^a))^r
//   (S(pi0^b)/(S(pi0^{b-a}) S(pi0^a)))^{r^2}
PairCheck check_xi_symbol(const TateCurve& E, const PAdic& pi0, long a, long b,
                          long r, long nu);

// pair of root-of-unity quotient functions:
//   f = (theta(z1^{-1}u)/theta(u))^{m1}, g = (theta(z2^{-1}u)/theta(u))^{m2},
// symbol {f/f(z2), g/g(z1)}; closed form
//   (S(z1^{-1} z2)/(S(z1^{-1}) S(z2)))^{m1 m2}.
PairCheck check_unit_pair_symbol(const TateCurve& E, const PAdic& z1, long m1,
                                 const PAdic& z2, long m2, long nu);

// mixed symbol with a uniformizer-root function (q0^a = q, 1 <= b < a):
//   f = theta(q0^{-b}u)^a / (theta(u)^{a-1} theta(q^{-b}u)),
//   g = (theta(z^{-1}u)/theta(u))^m, symbol {f/f(z), g/g(q0^b)}.
// rhs1 = (S(q0^{-b}z)/(S(z) S(q0^{-b})))^{ma} (theta(q0^b)/theta(q0^b z^{-1}))^{mb}
// rhs2 = the expanded unit-product form; both are checked against lhs.
struct TripleCheck {
    PAdic lhs, rhs1, rhs2;
    PowerCertificate cert_lhs_rhs1, cert_rhs1_rhs2;
    bool match_forms = false; // rhs1 == rhs2 mod (K*)^{p^nu}
    bool match_lhs = false;   // lhs == rhs1 mod (K*)^{p^nu}
};
TripleCheck check_mixed_symbol(const TateCurve& E, const PAdic& q0, long a,
                               long b, const PAdic& zeta, long m, long nu);

// Weil reciprocity on P^1: the product of tame symbols over all places is 1.
bool weil_reciprocity_check(const Field& F, const PadicRational& f,
                            const PadicRational& g);

// helper for building factored rational functions over K
PadicRational make_rational(const Field& F, const PAdic& constant, long t_power,
                            const std::vector<std::pair<PAdic, long>>& zeros);

} // namespace tatereg
