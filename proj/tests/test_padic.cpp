#include <doctest.h>

#include <random>

#include "tatereg/padic.hpp"

using namespace tatereg;

namespace {

Field& q5() {
    static Field F({.p = 5, .precision = 40});
    return F;
}

Field& q3() {
    static Field F({.p = 3, .precision = 40});
    return F;
}

// random unit with prescribed digit spread
PAdic random_unit(const Field& F, std::mt19937_64& rng) {
    std::uniform_int_distribution<long> digit(0, F.p() - 1);
    std::vector<mpz_class> c(F.degree());
    mpz_class acc = 0, pw = 1;
    for (int k = 0; k < 12; ++k) {
        acc += digit(rng) * pw;
        pw *= F.p();
    }
    if (acc % F.p() == 0) acc += 1 + digit(rng) % (F.p() - 1);
    c[0] = acc;
    for (long i = 1; i < F.degree(); ++i) c[i] = digit(rng);
    return F.from_coeffs(c);
}

PAdic random_nonzero(const Field& F, std::mt19937_64& rng) {
    std::uniform_int_distribution<long> v(-4, 4);
    return random_unit(F, rng).shift(v(rng));
}

} // namespace

TEST_CASE("basic arithmetic and valuations over Q_5") {
    Field& F = q5();
    PAdic pi = F.pi();
    PAdic sq = pi * pi;
    CHECK(sq.ord() == 2);
    CHECK((sq / pi / pi).eq_to_prec(F.one()));

    // 2*3 = 6 = 1 + 1*5
    PAdic six = F.from_integer(2) * F.from_integer(3);
    CHECK(six.ord() == 0);
    auto d = six.digits(3);
    CHECK(d[0][0] == 1);
    CHECK(d[1][0] == 1);
    CHECK(d[2][0] == 0);
    CHECK(six.eq_to_prec(F.from_integer(6)));

    // inverse round trip
    std::mt19937_64 rng(12345);
    for (int i = 0; i < 24; ++i) {
        PAdic x = random_nonzero(F, rng);
        PAdic y = F.one() / x;
        CHECK((y * x).eq_to_prec(F.one()));
    }
}

TEST_CASE("ord is additive and normalized") {
    Field& F = q5();
    CHECK(F.pi().pow(3).ord() == 3);
    CHECK(F.from_integer(7).ord() == 0);
    std::mt19937_64 rng(99);
    for (int i = 0; i < 40; ++i) {
        PAdic x = random_nonzero(F, rng), y = random_nonzero(F, rng);
        CHECK((x * y).ord() == x.ord() + y.ord());
    }
    CHECK_THROWS_AS(F.zero().ord(), math_error);
    CHECK_THROWS_AS(F.unknown_zero(7).ord(), precision_error);
}

TEST_CASE("ramified extension: ord(5) = 2 when pi^2 = 5") {
    Field F({.p = 5, .eisenstein = {-5, 0, 1}, .precision = 40});
    CHECK(F.e() == 2);
    CHECK(F.f() == 1);
    PAdic five = F.from_integer(5);
    CHECK(five.ord() == 2);
    PAdic pi2 = F.pi() * F.pi();
    CHECK(pi2.eq_to_prec(five));
    // arithmetic sanity in the extension
    PAdic x = F.pi() + F.one();
    PAdic y = x * x;
    CHECK(y.eq_to_prec(F.one() + F.pi() * F.from_integer(2) + five));
}

TEST_CASE("unramified extension arithmetic") {
    // w^2 + 4w + 2 is irreducible mod 5 (discriminant 8 = 3 mod 5, not a QR)
    Field F({.p = 5, .unramified = {2, 4, 1}, .precision = 30});
    CHECK(F.f() == 2);
    CHECK(F.residue_card() == 25);
    PAdic w = F.from_coeffs({0, 1});
    PAdic lhs = w * w + F.from_integer(4) * w + F.from_integer(2);
    CHECK(lhs.is_zero_to_precision());
    // units invert
    PAdic u = w + F.from_integer(3);
    CHECK((u / u).eq_to_prec(F.one()));
}

TEST_CASE("division by exact zero and mixed fields error") {
    Field& F = q5();
    CHECK_THROWS_AS(F.one() / F.zero(), math_error);
    CHECK_THROWS_AS(F.one() / F.unknown_zero(5), precision_error);
    Field other({.p = 5, .precision = 40});
    CHECK_THROWS_AS(F.one() + other.one(), math_error);
}

TEST_CASE("teichmuller lift over Q_5") {
    Field& F = q5();
    // x = 1 mod pi lifts to 1
    PAdic x = F.one() + F.pi().pow(2);
    CHECK(x.teichmuller().eq_to_prec(F.one()));
    // omega(2)^4 = 1 and omega(2) = 2 mod 5
    PAdic w2 = F.from_integer(2).teichmuller();
    CHECK(w2.pow(4).eq_to_prec(F.one()));
    CHECK(w2.digits(1)[0][0] == 2);
    CHECK((w2 - F.from_integer(2)).ord() >= 1);
    // multiplicativity
    std::mt19937_64 rng(7);
    for (int i = 0; i < 16; ++i) {
        PAdic a = random_unit(F, rng), b = random_unit(F, rng);
        CHECK((a.teichmuller() * b.teichmuller())
                  .eq_to_prec((a * b).teichmuller()));
    }
}

TEST_CASE("roots of unity") {
    long n = 0;
    auto mu = q5().roots_of_unity(&n);
    CHECK(n == 4);
    CHECK(mu.size() == 4);
    // contains -1
    bool has_minus1 = false;
    for (const auto& z : mu)
        if (z.eq_to_prec(-q5().one())) has_minus1 = true;
    CHECK(has_minus1);

    CHECK(q3().roots_of_unity_order() == 2);

    // Q_5(zeta_5): Phi_5(1+u) = u^4 + 5u^3 + 10u^2 + 10u + 5
    Field F5({.p = 5, .eisenstein = {5, 10, 10, 5, 1}, .precision = 30});
    CHECK(F5.roots_of_unity_order() == 20);
    CHECK(F5.p_power_roots_exponent() == 1);
}

TEST_CASE("tame Hilbert symbol") {
    Field& F = q5();
    std::mt19937_64 rng(2024);
    // units pair to 1
    for (int i = 0; i < 8; ++i) {
        PAdic a = random_unit(F, rng), b = random_unit(F, rng);
        CHECK(F.hilbert_symbol_tame(a, b, 4).eq_to_prec(F.one()));
    }
    // (a, -a) = 1
    for (int i = 0; i < 16; ++i) {
        PAdic a = random_nonzero(F, rng);
        CHECK(F.hilbert_symbol_tame(a, -a, 4).eq_to_prec(F.one()));
    }
    // (5, u)_4 = omega(u)
    for (int i = 0; i < 8; ++i) {
        PAdic u = random_unit(F, rng);
        CHECK(F.hilbert_symbol_tame(F.from_integer(5), u, 4)
                  .eq_to_prec(u.teichmuller()));
    }
    // bimultiplicative and antisymmetric up to inversion
    for (int i = 0; i < 10; ++i) {
        PAdic a = random_nonzero(F, rng), b = random_nonzero(F, rng),
              c = random_nonzero(F, rng);
        PAdic lhs = F.hilbert_symbol_tame(a * b, c, 4);
        PAdic rhs = F.hilbert_symbol_tame(a, c, 4) *
                    F.hilbert_symbol_tame(b, c, 4);
        CHECK(lhs.eq_to_prec(rhs));
        CHECK((F.hilbert_symbol_tame(a, b, 4) * F.hilbert_symbol_tame(b, a, 4))
                  .eq_to_prec(F.one()));
    }
    // wild case rejected
    CHECK_THROWS_AS(F.hilbert_symbol_tame(F.pi(), F.one(), 5),
                    unsupported_error);
}

TEST_CASE("torsion of K_1 shapes") {
    Field& F = q5();
    auto t1 = F.torsion_of_k1(F.from_integer(5));
    CHECK(t1 == std::vector<long>{4, 4, 1});
    auto t2 = F.torsion_of_k1(F.from_integer(25));
    CHECK(t2 == std::vector<long>{4, 4, 2});
    auto t3 = q3().torsion_of_k1(q3().from_integer(3));
    CHECK(t3[0] == 2);
    CHECK(t3[1] == 2);
    CHECK((t3[2] == 1 || t3[2] == 2));
    // the symbol table decides: (3,-1)_2 = omega(-1) = -1, so quotient 1
    CHECK(t3[2] == 1);
}

TEST_CASE("precision propagation and monotonicity") {
    Field lo({.p = 5, .precision = 16});
    Field hi({.p = 5, .precision = 48});
    auto expr = [](const Field& F) {
        PAdic x = F.from_integer(7) / F.from_integer(3) + F.pi().pow(2);
        return (x * x - F.from_integer(2)).inv();
    };
    auto dl = expr(lo).digits(12);
    auto dh = expr(hi).digits(12);
    REQUIRE(dl.size() == dh.size());
    for (size_t i = 0; i < dl.size(); ++i) CHECK(dl[i] == dh[i]);
    CHECK(expr(lo).ord() == expr(hi).ord());

    // cancellation reduces certified precision
    Field& F = q5();
    PAdic a = F.one() + F.pi().pow(35);
    PAdic d = a - F.one(); // ord 35, rel 5
    CHECK(d.ord() == 35);
    CHECK(d.rel_prec() == 5);
    // total cancellation leaves a zero-to-precision element
    PAdic z = a - a;
    CHECK(z.is_zero_to_precision());
    CHECK(!z.is_exact_zero());
}

TEST_CASE("one-unit depth and integer rounding") {
    Field& F = q5();
    PAdic x = F.from_integer(2).teichmuller() * (F.one() + F.pi().pow(7));
    CHECK(x.one_unit_depth() == 7);
    CHECK(F.from_integer(-3).to_integer(10) == -3);
    CHECK_THROWS_AS(F.from_integer(2).to_integer(1), math_error);
}

TEST_CASE("two-level tower: eisenstein over unramified") {
    // Q_5 -> unramified of degree 2 -> ramified square root of 5
    Field F({.p = 5,
             .unramified = {2, 4, 1},
             .eisenstein = {-5, 0, 1},
             .precision = 24});
    CHECK(F.e() == 2);
    CHECK(F.f() == 2);
    CHECK(F.degree() == 4);
    CHECK(F.from_integer(5).ord() == 2);
    CHECK((F.pi() * F.pi()).eq_to_prec(F.from_integer(5)));
    // w still satisfies its polynomial
    PAdic w = F.from_coeffs({0, 1});
    CHECK((w * w + F.from_integer(4) * w + F.from_integer(2))
              .is_zero_to_precision());
    // arithmetic round trips with mixed basis elements
    std::mt19937_64 rng(5);
    std::uniform_int_distribution<long> d(0, 4);
    for (int i = 0; i < 10; ++i) {
        std::vector<mpz_class> c(4);
        for (auto& x : c) x = d(rng);
        if (c[0] % 5 == 0) c[0] += 1;
        PAdic x = F.from_coeffs(c);
        CHECK((x / x).eq_to_prec(F.one()));
        CHECK((x.inv().inv() - x).is_zero_to_precision());
    }
    // tame roots of unity come from the residue field of order 25
    CHECK(F.roots_of_unity_order() == 24);
    PAdic g = F.teichmuller_generator();
    CHECK(g.pow(24).eq_to_prec(F.one()));
    CHECK(!g.pow(12).eq_to_prec(F.one()));
    // tame Hilbert symbol against the uniformizer detects units
    PAdic s = F.hilbert_symbol_tame(F.pi(), g, 24);
    CHECK(!s.eq_to_prec(F.one()));
}

TEST_CASE("roots of unity over Q_2 are exactly {1, -1}") {
    Field F({.p = 2, .precision = 30});
    long n = 0;
    auto mu = F.roots_of_unity(&n);
    CHECK(n == 2);
    bool has_minus1 = false;
    for (const auto& z : mu)
        if (z.eq_to_prec(-F.one())) has_minus1 = true;
    CHECK(has_minus1);
    CHECK(F.p_power_roots_exponent() == 1);
}
