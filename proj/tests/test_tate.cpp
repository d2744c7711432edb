#include <doctest.h>

#include <random>

#include "tatereg/tate.hpp"

using namespace tatereg;

namespace {

struct Setup {
    Field F;
    TateCurve E;
    Setup(long prec = 40, long qpow = 3)
        : F({.p = 5, .precision = prec}),
          E(&F, F.from_integer(5).pow(qpow)) {}
};

} // namespace

TEST_CASE("theta series leading coefficient and value at 1") {
    Setup s;
    Laurent th = s.E.theta_series(10, 14);
    PAdic c0 = th.coeff(0);
    CHECK(c0.ord() == 0);
    CHECK((c0 - s.F.one()).ord() >= 3);
    PAdic sum = s.F.zero();
    for (long n = -10; n <= 10; ++n) sum = sum + th.coeff(n);
    CHECK(sum.is_zero_to_precision());
    CHECK(sum.abs_prec() >= 30);
}

TEST_CASE("theta functional equation on a window") {
    Setup s;
    long B = 8, kmax = 21;
    Laurent th = s.E.theta_series(B, kmax);
    Laurent lhs = th.scale_arg(s.E.q()) + th.shifted(-1);
    long m = lhs.zero_margin(-B, B - 1);
    CHECK(m >= 40);
    Laurent rhs = th.flipped() + th.shifted(-1);
    CHECK(rhs.zero_margin(-B, B - 1) >= 40);
}

TEST_CASE("theta_eval special points") {
    Setup s;
    CHECK(s.E.theta_eval(s.F.one()).is_exact_zero());
    CHECK(s.E.theta_eval(s.E.q()).is_exact_zero());
    CHECK(s.E.theta_eval(s.E.q().pow(-2)).is_exact_zero());
    PAdic lhs = s.E.theta_eval(-s.F.one());
    PAdic expect = s.F.from_integer(2);
    PAdic qk = s.F.one();
    for (long k = 1; k <= 15; ++k) {
        qk = qk * s.E.q();
        PAdic t = s.F.one() + qk;
        expect = expect * t * t;
    }
    CHECK((lhs - expect).is_zero_to_precision());
    CHECK((lhs - expect).abs_prec() >= 38);
}

TEST_CASE("theta consistency: series window against direct evaluation") {
    Setup s;
    PAdic alpha = s.F.from_integer(5);
    Laurent th = s.E.theta_series(11, 14);
    PAdic sum = s.F.zero();
    for (long n = -11; n <= 11; ++n) sum = sum + th.coeff(n) * alpha.pow(n);
    PAdic direct = s.E.theta_eval(alpha);
    PAdic diff = sum - direct;
    CHECK(diff.is_zero_to_precision());
    CHECK(diff.abs_prec() >= 10);
}

TEST_CASE("curve coefficients leading terms") {
    Setup s;
    auto [a4, a6] = s.E.curve_coefficients();
    PAdic q = s.E.q();
    CHECK((a4 + s.F.from_integer(5) * q).ord() >= 6);
    // a6 = -q mod q^2 with the classical 1/12 normalization
    CHECK((a6 + q).ord() >= 6);
    // leading-term dominance: ord(a4) = ord(5q); the 5 matters when p = 5
    CHECK(a4.ord() == 4);
    CHECK(a6.ord() == 3);
}

TEST_CASE("Weierstrass identity on the certified window") {
    Setup s;
    long B = 10, pad = 15;
    auto [X, Y] = s.E.xy_series(B + pad);
    auto [a4, a6] = s.E.curve_coefficients();
    Laurent A4 = Laurent::constant(a4), A6 = Laurent::constant(a6);
    Laurent R = Y * Y + X * Y - X * X * X - A4 * X - A6;
    long m = R.zero_margin(-B, B);
    CHECK(m >= 40);
    CHECK((X.coeff(1) - s.F.one()).ord() >= 3);

    // independent term-sum oracle: rebuild X by summing each k-term's
    // window expansion; the k -> -k reindexing gives the same object
    long W = 8;
    Laurent Xo(&s.F, -W, W);
    PAdic one = s.F.one();
    for (long m = 1; m <= W; ++m) {
        PAdic up = s.F.from_integer(m), dn = s.F.zero();
        PAdic qk = one;
        for (long k = 1; 3 * k * m <= 60; ++k) {
            qk = qk * s.E.q();
            up = up + s.F.from_integer(m) * qk.pow(m);
            dn = dn + s.F.from_integer(m) * qk.pow(m);
        }
        Xo.set_coeff(m, up.cap_abs_prec(40));
        Xo.set_coeff(-m, dn.cap_abs_prec(40));
    }
    Xo.set_coeff(0, X.coeff(0));
    for (long m = -W; m <= W; ++m) {
        PAdic d = Xo.coeff(m) - X.coeff(m);
        CHECK(d.is_zero_to_precision());
        CHECK(d.abs_prec() >= 40);
    }
    // value-level symmetry at sample points: x(u0) = x(1/u0)
    PAdic u0 = s.F.from_integer(2).teichmuller() * (one + s.F.pi());
    auto Pp = s.E.point_eval(u0);
    auto Pm = s.E.point_eval(u0.inv());
    CHECK((Pp.x - Pm.x).is_zero_to_precision());
}

TEST_CASE("point evaluation and the group law") {
    Setup s;
    CHECK(s.E.point_eval(s.F.one()).infinity);
    CHECK(s.E.point_eval(s.E.q().pow(2)).infinity);
    auto P = s.E.point_eval(-s.F.one());
    REQUIRE(!P.infinity);
    CHECK(s.E.curve_equation_residual(P).is_zero_to_precision());
    CHECK((s.F.from_integer(2) * P.y + P.x).is_zero_to_precision());
    auto D = s.E.add_points(P, P);
    CHECK(D.infinity);
    PAdic i4 = s.F.zeta(4);
    auto Q = s.E.point_eval(i4);
    REQUIRE(!Q.infinity);
    PAdic res = s.E.curve_equation_residual(Q);
    CHECK(res.is_zero_to_precision());
    CHECK(res.abs_prec() >= 30);
}

TEST_CASE("parametrization is a homomorphism on samples") {
    Setup s;
    std::mt19937_64 rng(2718);
    std::uniform_int_distribution<long> shift(0, 2);
    std::uniform_int_distribution<long> unitpick(1, 4);
    for (int it = 0; it < 6; ++it) {
        PAdic u0 = s.F.from_integer(unitpick(rng)).teichmuller() *
                   (s.F.one() + s.F.pi().pow(1 + shift(rng)));
        PAdic u1 = s.F.from_integer(unitpick(rng)).teichmuller() *
                   (s.F.one() + s.F.from_integer(2) * s.F.pi());
        if (s.E.q_power_class(u0).has_value() ||
            s.E.q_power_class(u1).has_value() ||
            s.E.q_power_class(u0 * u1).has_value())
            continue;
        auto P0 = s.E.point_eval(u0);
        auto P1 = s.E.point_eval(u1);
        auto S = s.E.add_points(P0, P1);
        auto T = s.E.point_eval(u0 * u1);
        REQUIRE(!S.infinity);
        REQUIRE(!T.infinity);
        PAdic dx = S.x - T.x, dy = S.y - T.y;
        CHECK(dx.is_zero_to_precision());
        CHECK(dy.is_zero_to_precision());
        CHECK(dx.abs_prec() >= 20);
    }
}

TEST_CASE("S(alpha) exact values and inversion symmetry") {
    Setup s;
    CHECK(s.E.s_value(s.F.one(), 2).eq_to_prec(s.F.one()));
    CHECK(s.E.s_value(-s.F.one(), 2).eq_to_prec(s.F.one()));
    std::mt19937_64 rng(99);
    std::uniform_int_distribution<long> pick(2, 4);
    for (int it = 0; it < 6; ++it) {
        PAdic a = s.F.from_integer(pick(rng)).teichmuller() *
                  (s.F.one() + s.F.pi()).pow(pick(rng));
        PAdic prod = s.E.s_value(a, 3) * s.E.s_value(a.inv(), 3);
        CHECK(prod.eq_to_prec(s.F.one()));
    }
    CHECK_THROWS_AS(s.E.s_value(s.F.from_integer(125), 2), math_error);
}

TEST_CASE("theta-S product identity (independent rearrangement oracle)") {
    // theta(pi0^i)^i S(pi0^i)^r = prod_n (1-pi0^{nr-r+i})^{nr-r+i}
    //                                    / (1-pi0^{nr-i})^{nr-i}
    Setup s(60, 3);
    const long r = 3;
    PAdic pi0 = s.F.from_integer(5);
    for (long i = 1; i < r; ++i) {
        PAdic lhs = s.E.theta_eval(pi0.pow(i)).pow(i) *
                    s.E.s_value(pi0.pow(i), 23).pow(r);
        PAdic rhs = s.F.one();
        for (long n = 1;; ++n) {
            long e1 = n * r - r + i, e2 = n * r - i;
            if (e1 > 25 && e2 > 25) break;
            rhs = rhs * (s.F.one() - pi0.pow(e1)).pow(e1) /
                  (s.F.one() - pi0.pow(e2)).pow(e2);
        }
        PAdic ratio = lhs / rhs;
        CHECK(ratio.ord() == 0);
        CHECK((ratio - s.F.one()).ord() > 20);
    }
}

TEST_CASE("theta products: normalization, periodicity, divisor data") {
    Setup s;
    PAdic pi0 = s.F.from_integer(5);
    const long r = 3;
    for (long a = 1; a < r; ++a) {
        ThetaProduct f(&s.E);
        f.mul_constant(s.F.from_integer(a % 2 ? -1 : 1));
        f.mul_upower(a);
        f.mul_theta(pi0.pow(a), r);
        f.mul_theta(s.F.one(), -r);
        CHECK(f.q_periodic());
        CHECK(f.order_at_class(pi0.pow(-a)) == r);
        CHECK(f.order_at_class(s.F.one()) == -r);
        CHECK(f.order_at_class(s.F.from_integer(2)) == 0);
    }
    ThetaProduct g(&s.E);
    g.mul_theta(s.E.q().inv(), 1);
    REQUIRE(g.factors().size() == 1);
    CHECK(g.factors()[0].shift.eq_to_prec(s.F.one()));
    CHECK(g.u_power() == 1);
    PAdic w = s.F.from_integer(2);
    PAdic lhs = s.E.theta_eval(s.E.q().inv() * w);
    PAdic rhs = g.eval(w);
    CHECK((lhs - rhs).is_zero_to_precision());
}

TEST_CASE("function_from_divisor accepts balanced data only") {
    Setup s;
    PAdic i4 = s.F.zeta(4);
    CHECK_THROWS_AS(function_from_divisor(&s.E, s.F.one(), {{i4, s.F.one()}}),
                    math_error);
    std::vector<std::pair<PAdic, PAdic>> pairs(4, {i4.inv(), s.F.one()});
    ThetaProduct f = function_from_divisor(&s.E, s.F.one(), pairs);
    CHECK(f.q_periodic());
    CHECK(f.order_at_class(i4) == 4);
    ThetaProduct c = function_from_divisor(&s.E, s.F.from_integer(7), {});
    CHECK(c.q_periodic());
    CHECK(c.factors().empty());
}

TEST_CASE("leading values at divisor classes") {
    Setup s;
    ThetaProduct f(&s.E);
    f.mul_theta(s.F.one(), 1);
    PAdic lead = f.leading_value_at_class(s.F.one());
    PAdic A = s.E.theta_deriv_unit();
    CHECK((lead + A).is_zero_to_precision());
    PAdic leadq = f.leading_value_at_class(s.E.q());
    CHECK((leadq - s.E.q().inv() * A).is_zero_to_precision());
}

TEST_CASE("dlog residues of the covering-generator functions") {
    // over Q_5 with q = 5^3 the cube root of q is 5 itself;
    // f1 = -u (theta(5u)/theta(u))^3 has residue 1, and
    // f2 = (theta(zu)/theta(u))^4 for z = zeta_4 has residue 0
    Setup s(40, 3);
    const long n = 3;
    long B = 10, kmax = 14;
    auto [front, rest] = s.E.theta_series_split(B, kmax);
    auto [front5, rest5] =
        s.E.theta_series_shifted_split(s.F.from_integer(5), B, kmax);
    REQUIRE(rest5.unit_flag());
    REQUIRE(front5.unit_flag()); // (1 - 5u)
    FactoredUnit f1;
    f1.factors.push_back({front5, n});
    f1.factors.push_back({rest5, n});
    f1.factors.push_back({front, -n}); // (1-u), power-series mode
    f1.factors.push_back({rest, -n});  // two-sided unit
    CHECK(residue_dlog(1, f1, n) == 1 % n);
    CHECK(residue_dlog(1, f1, 12) == 1);

    PAdic z4 = s.F.zeta(4);
    const long m = 4;
    auto [fz, rz] = s.E.theta_series_shifted_split(z4, B, kmax);
    REQUIRE(rz.unit_flag());
    FactoredUnit f2;
    f2.factors.push_back({fz, m}); // (1 - z u), power-series mode
    f2.factors.push_back({rz, m});
    f2.factors.push_back({front, -m});
    f2.factors.push_back({rest, -m});
    CHECK(residue_dlog(0, f2, m) == 0);
}
