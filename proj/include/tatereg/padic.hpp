#pragma once

#include <gmpxx.h>

#include <iosfwd>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "tatereg/errors.hpp"

namespace tatereg {

class Field;
class PAdic;

// "Infinite" precision / order sentinel, safely additive.
inline constexpr long kInfPrec = 1L << 48;

// Textual description of a finite extension K/Q_p.  The extension is a
// tower of at most two levels over Q_p: an unramified level cut out by a
// monic integer polynomial that stays irreducible mod p, and a totally
// ramified level cut out by a monic Eisenstein polynomial.  Either level
// may be absent.
struct FieldDesc {
    long p = 0;
    std::vector<long> unramified; // monic, coeffs c0..c_f, irreducible mod p
    std::vector<long> eisenstein; // monic, coeffs c0..c_e, Eisenstein at p
    long precision = 40;          // default relative precision in pi-digits

    bool operator==(const FieldDesc&) const = default;
};

// A finite extension K of Q_p with normalized valuation ord_K(pi) = 1.
// Immutable after construction; elements hold a pointer back to their
// field, so a Field must outlive its elements.
class Field {
public:
    explicit Field(const FieldDesc& desc);

    Field(const Field&) = delete;
    Field& operator=(const Field&) = delete;

    long p() const { return p_; }
    long e() const { return e_; }          // ramification index
    long f() const { return f_; }          // residue degree
    long degree() const { return e_ * f_; }
    long precision() const { return prec_; }
    const FieldDesc& desc() const { return desc_; }
    const mpz_class& residue_card() const { return qres_; } // p^f

    // --- element factories ---------------------------------------------
    PAdic zero() const;                    // exact zero
    PAdic one() const;
    PAdic from_integer(const mpz_class& n) const;
    PAdic from_integer(long n) const;
    PAdic pi() const;                      // the uniformizer
    // x given as integer coefficients over the w^i pi^j basis.
    PAdic from_coeffs(const std::vector<mpz_class>& coeffs) const;
    // O(pi^m): zero to precision m, no digits known.
    PAdic unknown_zero(long m) const;

    // Teichmueller lift of a residue-field generator; its powers give the
    // full prime-to-p group of roots of unity.
    PAdic teichmuller_generator() const;

    // Primitive n-th root of unity raised to `index`, for n | p^f - 1.
    PAdic zeta(long order, long index = 1) const;

    // All roots of unity of K: the prime-to-p part via Teichmueller lifts
    // plus any p-power part detected by root-finding on cyclotomic
    // polynomials.  Returns the list and its cardinality n.
    std::vector<PAdic> roots_of_unity(long* cardinality = nullptr) const;
    long roots_of_unity_order() const;
    // Largest k with a primitive p^k-th root of unity in K.
    long p_power_roots_exponent() const;

    // Tame Hilbert symbol (a,b)_n for n | p^f - 1; returns an n-th root of
    // unity.  Wild n (p | n) raises unsupported_error.
    PAdic hilbert_symbol_tame(const PAdic& a, const PAdic& b, long n) const;

    // Orders of the three cyclic summands of the torsion of K_1 of the
    // Tate curve with period q: [n, n, n / #(q, K*)_n].  Requires a tame
    // root-of-unity group (p not dividing n).
    std::vector<long> torsion_of_k1(const PAdic& q) const;

    std::string describe() const;

private:
    friend class PAdic;
    using Vec = std::vector<mpz_class>;

    FieldDesc desc_;
    long p_ = 0, e_ = 1, f_ = 1, prec_ = 0;
    mpz_class pz_;     // p as mpz
    mpz_class qres_;   // p^f
    Vec unram_;        // coeffs of g(w), size f_+1 (monic)
    Vec eis_;          // coeffs of E(pi), size e_+1 (monic)
    Vec pi_inv_pre_;   // pi^{e-1} * U^{-1} with pi^e = p*U; empty if e == 1
    long max_mexp_ = 0;

    // --- raw kernel: vectors of length e*f over Z/p^m, basis w^i pi^j ---
    long mexp_for(long rel) const { return (rel + e_ - 1) / e_ + 1; }
    mpz_class pmod(long mexp) const;
    Vec raw_zero() const { return Vec(degree()); }
    void raw_reduce(Vec& v, long mexp) const;
    Vec raw_add(const Vec& a, const Vec& b, long mexp) const;
    Vec raw_sub(const Vec& a, const Vec& b, long mexp) const;
    Vec raw_mul(const Vec& a, const Vec& b, long mexp) const;
    Vec raw_pow(Vec a, mpz_class k, long mexp) const;
    Vec raw_mul_pi(const Vec& a, long mexp) const;
    Vec raw_div_pi(const Vec& a, long mexp) const;
    // pi-adic valuation of v as certified mod p^mexp; nullopt if v is zero
    // to that precision.
    std::optional<long> raw_ord(const Vec& v, long mexp) const;
    // Inverse of a unit vector (raw_ord == 0).
    Vec raw_inv_unit(const Vec& a, long mexp) const;
    // Residue of v in F_{p^f} as integer poly coeffs in w, reduced mod p.
    Vec residue(const Vec& v) const;
    bool residue_is_zero(const Vec& v) const;
    Vec residue_inv(const Vec& r) const; // inverse in F_p[w]/(g)
    Vec lift_residue(const Vec& r) const;

    std::vector<PAdic> p_power_roots() const;
    void check_same_field(const PAdic& x) const;
};

// An element of K with tracked valuation and certified relative precision.
//
// Canonical form is one of:
//   * exact zero (the exact-zero sentinel, distinct from any O(pi^m));
//   * rel > 0: x = pi^val * u with the unit u certified mod pi^rel and
//     u a unit (nonzero residue);
//   * rel == 0: x = O(pi^val), zero to precision val with no digit known.
class PAdic {
public:
    PAdic() = default;

    const Field& field() const { return *F_; }
    const Field* field_ptr() const { return F_; }
    bool is_exact_zero() const { return F_ == nullptr || exact_zero_; }
    bool is_unknown_zero() const { return !is_exact_zero() && rel_ == 0; }
    // True if the element certifies at least one nonzero digit.
    bool is_certainly_nonzero() const { return !is_exact_zero() && rel_ > 0; }
    bool is_zero_to_precision() const { return !is_certainly_nonzero(); }

    // Normalized valuation; errors on exact zero and on O(pi^m).
    long ord() const;
    long rel_prec() const { return rel_; }
    // Absolute precision val+rel; huge sentinel for exact zero.
    long abs_prec() const;
    bool is_unit() const { return is_certainly_nonzero() && val_ == 0; }

    PAdic operator-() const;
    PAdic operator+(const PAdic& o) const;
    PAdic operator-(const PAdic& o) const;
    PAdic operator*(const PAdic& o) const;
    PAdic operator/(const PAdic& o) const;
    PAdic inv() const;
    PAdic pow(long k) const;
    PAdic pow(const mpz_class& k) const;

    // Multiply by pi^k (exact shift).
    PAdic shift(long k) const;
    // Restrict to absolute precision m (forgets digits; never adds).
    PAdic cap_abs_prec(long m) const;

    // Teichmueller lift of a unit: the unique (p^f - 1)-th root of unity
    // congruent to it mod pi.
    PAdic teichmuller() const;

    // ord(*this - o) certified lower bound; huge for exact equality.
    long match_order(const PAdic& o) const;
    // Equal up to the joint certified precision.
    bool eq_to_prec(const PAdic& o) const;
    // Depth of the 1-unit part: ord(x/ (pi^val * teichmuller) - 1).
    long one_unit_depth() const;

    // pi-adic digits, little-endian; each digit is the canonical integer
    // lift of a residue-field element (f integers per digit, one if f=1).
    std::vector<std::vector<long>> digits(long count) const;
    std::string str() const;

    // Exact rounding to a rational integer: the balanced integer congruent
    // to x within its precision, certified to satisfy |n| <= bound.
    // Errors if x is not within precision of such an integer.
    mpz_class to_integer(const mpz_class& bound) const;

private:
    friend class Field;
    using Vec = Field::Vec;

    PAdic(const Field* F, bool exact_zero, long val, long rel, Vec unit)
        : F_(F), exact_zero_(exact_zero), val_(val), rel_(rel),
          unit_(std::move(unit)) {}

    // Build from a raw vector certified mod pi^certified at valuation
    // offset base_val: represents pi^base_val * (vec), vec known mod
    // p^mexp_for(certified).
    static PAdic make(const Field* F, long base_val, Vec v, long certified);

    const Field* F_ = nullptr;
    bool exact_zero_ = true;
    long val_ = 0;
    long rel_ = 0;
    Vec unit_;
};

std::ostream& operator<<(std::ostream& os, const PAdic& x);

} // namespace tatereg
