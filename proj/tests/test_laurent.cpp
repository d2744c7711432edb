#include <doctest.h>

#include <random>

#include "tatereg/laurent.hpp"

using namespace tatereg;

namespace {

Field& q5() {
    static Field F({.p = 5, .precision = 40});
    return F;
}

Laurent random_poly(const Field& F, long lo, long hi, std::mt19937_64& rng,
                    long min_ord = 0) {
    std::uniform_int_distribution<long> coef(-20, 20);
    std::uniform_int_distribution<long> extra(0, 2);
    Laurent f(&F, lo, hi);
    for (long n = lo; n <= hi; ++n) {
        long c = coef(rng);
        if (c == 0) continue;
        f.set_coeff(n, F.from_integer(c).shift(min_ord + extra(rng)));
    }
    return f;
}

} // namespace

TEST_CASE("telescoping product (1-u) * geometric sum") {
    Field& F = q5();
    const long B = 12;
    Laurent a(&F, 0, 1);
    a.set_coeff(0, F.one());
    a.set_coeff(1, -F.one());
    Laurent b(&F, 0, B);
    for (long n = 0; n <= B; ++n) b.set_coeff(n, F.one());
    Laurent prod = a * b;
    CHECK(prod.lo() == 0);
    CHECK(prod.hi() == B + 1);
    CHECK(prod.coeff(0).eq_to_prec(F.one()));
    for (long n = 1; n <= B; ++n) CHECK(prod.coeff(n).is_zero_to_precision());
    CHECK(prod.coeff(B + 1).eq_to_prec(-F.one()));
}

TEST_CASE("invert_unit of 1-qu is the geometric series") {
    Field& F = q5();
    PAdic q = F.from_integer(125); // ord 3
    Laurent f(&F, 0, 1);
    f.set_coeff(0, F.one());
    f.set_coeff(1, -q);
    CHECK(f.unit_flag());
    Laurent inv = f.invert_unit(0, 10, 36);
    for (long k = 0; k <= 10; ++k) {
        PAdic expect = q.pow(k);
        CHECK(inv.coeff(k).eq_to_prec(expect.cap_abs_prec(inv.coeff(k).abs_prec())));
        if (k > 0) CHECK(inv.coeff(k).ord() == 3 * k);
    }
    // round trip on the certified window
    Laurent back = f * inv;
    CHECK(back.coeff(0).eq_to_prec(F.one()));
    CHECK(back.zero_margin(1, 9) >= 30);
}

TEST_CASE("inverse round trip for random units") {
    Field& F = q5();
    std::mt19937_64 rng(31337);
    for (int it = 0; it < 10; ++it) {
        Laurent f = random_poly(F, -3, 3, rng, 1);
        f.set_coeff(0, F.from_integer(1 + 5 * (it + 1)));
        REQUIRE(f.unit_flag());
        Laurent inv = f.invert_unit(-30, 30, 30);
        Laurent prod = (f * inv).truncated(-4, 4);
        CHECK(prod.coeff(0).eq_to_prec(F.one()));
        long m = prod.zero_margin(1, 4);
        CHECK(m >= 20);
        m = prod.zero_margin(-4, -1);
        CHECK(m >= 20);
    }
}

TEST_CASE("window underflow raises") {
    Field& F = q5();
    Laurent f(&F, 0, 1);
    f.set_coeff(0, F.one());
    f.set_coeff(1, -F.from_integer(5));
    CHECK_THROWS_AS(f.invert_unit(0, 4, 0), precision_error);
    Laurent nonunit(&F, 0, 1);
    nonunit.set_coeff(0, F.one());
    nonunit.set_coeff(1, F.one());
    CHECK_THROWS_AS(nonunit.invert_unit(0, 4, 20), math_error);
}

TEST_CASE("product certification against a wide-window oracle") {
    Field& F = q5();
    std::mt19937_64 rng(777);
    for (int it = 0; it < 20; ++it) {
        Laurent fw = random_poly(F, -6, 6, rng);
        Laurent gw = random_poly(F, -6, 6, rng);
        // tighten lower coefficients so truncation tails are honest
        for (long n = -6; n < -2; ++n) {
            fw.set_coeff(n, fw.coeff(n).shift(2 * (-n - 2)));
            gw.set_coeff(n, gw.coeff(n).shift(2 * (-n - 2)));
        }
        Laurent exact = fw * gw;          // exact polynomial product
        Laurent f = fw.truncated(-2, 4);  // folds the rest into tails
        Laurent g = gw.truncated(-2, 4);
        Laurent prod = f * g;
        for (long n = prod.lo(); n <= prod.hi(); ++n) {
            const PAdic& claimed = prod.coeff(n);
            if (claimed.is_exact_zero()) continue;
            PAdic truth = exact.in_window(n) ? exact.coeff(n) : F.zero();
            PAdic diff = truth - claimed;
            // claimed precision must be a valid agreement bound
            CHECK(diff.is_zero_to_precision());
        }
    }
}

TEST_CASE("residue of dlog: monomial, theta-type factors") {
    Field& F = q5();
    PAdic q = F.from_integer(125);

    // f = u: residue 1
    FactoredUnit empty;
    CHECK(residue_dlog(1, empty, 12) == 1);

    // f = 1 - qu: residue 0
    Laurent a(&F, 0, 1);
    a.set_coeff(0, F.one());
    a.set_coeff(1, -q);
    CHECK(residue_dlog(0, a, 12) == 0);

    // f = 1 - q u^{-1}: residue 0 (unit-flag expansion)
    Laurent b(&F, -1, 0);
    b.set_coeff(0, F.one());
    b.set_coeff(-1, -q);
    CHECK(residue_dlog(0, b, 12) == 0);

    // f = 1 - u: residue 0 (power-series expansion)
    Laurent c(&F, 0, 1);
    c.set_coeff(0, F.one());
    c.set_coeff(1, -F.one());
    CHECK(residue_dlog(0, c, 12) == 0);

    // f = u^3 * (1 - u): residue 3
    CHECK(residue_dlog(3, c, 12) == 3);

    // constants have residue 0
    Laurent k = Laurent::constant(F.from_integer(7));
    CHECK(residue_dlog(0, k, 12) == 0);
}

TEST_CASE("residue additivity over products") {
    Field& F = q5();
    std::mt19937_64 rng(4242);
    PAdic q = F.from_integer(25);
    for (int it = 0; it < 8; ++it) {
        std::uniform_int_distribution<long> ex(-3, 3);
        long e1 = ex(rng), e2 = ex(rng);
        Laurent a(&F, -1, 1);
        a.set_coeff(0, F.one());
        a.set_coeff(1, -q * F.from_integer(1 + (it % 3)));
        a.set_coeff(-1, q * q * F.from_integer(2));
        Laurent b(&F, 0, 1);
        b.set_coeff(0, F.one());
        b.set_coeff(1, F.from_integer(3)); // power-series mode factor
        FactoredUnit fu1, fu2, fu12;
        fu1.factors = {{a, 1}};
        fu2.factors = {{b, 1}};
        fu12.factors = {{a, 1}, {b, 1}};
        long r1 = residue_dlog(e1, fu1, 24);
        long r2 = residue_dlog(e2, fu2, 24);
        long r12 = residue_dlog(e1 + e2, fu12, 24);
        CHECK(r12 == (r1 + r2) % 24);
    }
}

TEST_CASE("power reduction thresholds") {
    Field& F = q5();
    CHECK(power_reduction_threshold(F, 0) == 2);
    CHECK(power_reduction_threshold(F, 2) == 4);
    CHECK(pnu_power_depth(F, 2) == 3);
    Field E({.p = 5, .eisenstein = {5, 10, 10, 5, 1}, .precision = 30});
    CHECK(power_reduction_threshold(E, 1) == 4 + 1 + 1);
    CHECK(pnu_power_depth(E, 1) == 4 + 1 + 1);
}

TEST_CASE("reduce_mod_power drops deep factors with certificates") {
    Field& F = q5();
    long nu = 2;
    long T = power_reduction_threshold(F, nu);

    auto lin = [&](const PAdic& x, int dir) {
        Laurent f(&F, dir < 0 ? -1 : 0, dir < 0 ? 0 : 1);
        f.set_coeff(0, F.one());
        f.set_coeff(dir < 0 ? -1 : 1, x);
        return f;
    };

    FactoredUnit fu;
    fu.factors.push_back({lin(F.pi().pow(T + 1), +1), 1});  // droppable
    fu.factors.push_back({lin(F.pi().pow(T), +1), 1});      // kept (== T)
    fu.factors.push_back({lin(F.pi().pow(T + 3), -1), 2});  // droppable
    fu.factors.push_back({lin(F.pi(), +1), 1});             // kept
    ReduceResult rr = reduce_mod_power(fu, nu);
    CHECK(rr.threshold == T);
    CHECK(rr.dropped_count == 2);
    CHECK(rr.kept.factors.size() == 2);

    // nu = 0: any unit factor above the nu=0 threshold may be dropped (it
    // is trivially a first power); only the shallow factor must stay
    ReduceResult rr0 = reduce_mod_power(fu, 0);
    CHECK(rr0.threshold == power_reduction_threshold(F, 0));
    CHECK(rr0.kept.factors.size() == 1);
}

TEST_CASE("binomial p^nu-th root round trips") {
    Field& F = q5();
    long nu = 2;
    // scalar case
    PAdic u = F.one() + F.pi().pow(power_reduction_threshold(F, nu) + 1) *
                            F.from_integer(3);
    PAdic r = pnu_root_one_unit(u, nu);
    CHECK(r.pow(25).eq_to_prec(u));
    // series case: the dropped factor of a reduction, multiplied back
    Laurent s(&F, 0, 1);
    s.set_coeff(1, F.pi().pow(power_reduction_threshold(F, nu) + 1));
    Laurent root = pnu_root_one_plus(s, nu, 0, 6);
    Laurent p25 = Laurent::constant(F.one());
    for (int i = 0; i < 25; ++i) p25 = (p25 * root).truncated(0, 6);
    Laurent expect = (Laurent::constant(F.one()) + s).truncated(0, 6);
    Laurent diff = p25 - expect;
    CHECK(diff.zero_margin(0, 6) >= 30);
}

TEST_CASE("functional transforms: scale_arg and flip") {
    Field& F = q5();
    std::mt19937_64 rng(5);
    Laurent f = random_poly(F, -3, 3, rng);
    PAdic g = F.from_integer(25);
    Laurent fg = f.scale_arg(g);
    for (long n = -3; n <= 3; ++n)
        CHECK(fg.coeff(n).eq_to_prec(f.coeff(n) * g.pow(n)));
    Laurent fl = f.flipped();
    for (long n = -3; n <= 3; ++n)
        CHECK(fl.coeff(-n).eq_to_prec(f.coeff(n)));
}
