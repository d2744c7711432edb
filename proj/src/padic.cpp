#include "tatereg/padic.hpp"

#include <algorithm>
#include <cassert>
#include <climits>
#include <numeric>
#include <ostream>
#include <sstream>

namespace tatereg {

namespace {

bool is_prime_small(long n) {
    if (n < 2) return false;
    for (long d = 2; d * d <= n; ++d)
        if (n % d == 0) return false;
    return true;
}

long ord_p_mpz(const mpz_class& v, long p, long cap) {
    if (v == 0) return cap;
    mpz_class t = v;
    long k = 0;
    while (k < cap && mpz_divisible_ui_p(t.get_mpz_t(), p)) {
        mpz_divexact_ui(t.get_mpz_t(), t.get_mpz_t(), p);
        ++k;
    }
    return k;
}

// --- tiny polynomial helpers over F_p (coeffs as longs in [0,p)) --------

using FpPoly = std::vector<long>;

FpPoly fp_trim(FpPoly a) {
    while (!a.empty() && a.back() == 0) a.pop_back();
    return a;
}

FpPoly fp_mul(const FpPoly& a, const FpPoly& b, long p) {
    if (a.empty() || b.empty()) return {};
    FpPoly c(a.size() + b.size() - 1, 0);
    for (size_t i = 0; i < a.size(); ++i)
        for (size_t j = 0; j < b.size(); ++j)
            c[i + j] = (c[i + j] + a[i] * b[j]) % p;
    return fp_trim(c);
}

FpPoly fp_mod(FpPoly a, const FpPoly& m, long p) {
    a = fp_trim(std::move(a));
    while (a.size() >= m.size()) {
        long c = a.back();
        size_t off = a.size() - m.size();
        for (size_t i = 0; i < m.size(); ++i)
            a[off + i] = (((a[off + i] - c * m[i]) % p) + p) % p;
        a = fp_trim(std::move(a));
    }
    return a;
}

FpPoly fp_powmod(FpPoly base, mpz_class k, const FpPoly& m, long p) {
    FpPoly r = {1};
    base = fp_mod(std::move(base), m, p);
    while (k > 0) {
        if (mpz_odd_p(k.get_mpz_t()))
            r = fp_mod(fp_mul(r, base, p), m, p);
        base = fp_mod(fp_mul(base, base, p), m, p);
        k >>= 1;
    }
    return r;
}

long fp_inv_scalar(long a, long p) {
    long t = 0, nt = 1, r = p, nr = ((a % p) + p) % p;
    while (nr != 0) {
        long q = r / nr;
        long tmp = t - q * nt; t = nt; nt = tmp;
        tmp = r - q * nr; r = nr; nr = tmp;
    }
    return ((t % p) + p) % p;
}

// quotient-free polynomial division step helpers for the inverse
void fp_divmod(const FpPoly& num, const FpPoly& den, long p, FpPoly* q,
               FpPoly* r) {
    FpPoly rem = num;
    long li = fp_inv_scalar(den.back(), p);
    FpPoly quot(num.size() >= den.size() ? num.size() - den.size() + 1 : 0, 0);
    while (rem.size() >= den.size() && !rem.empty()) {
        long c = (rem.back() * li) % p;
        size_t off = rem.size() - den.size();
        quot[off] = c;
        for (size_t i = 0; i < den.size(); ++i)
            rem[off + i] = (((rem[off + i] - c * den[i]) % p) + p) % p;
        rem = fp_trim(std::move(rem));
    }
    *q = fp_trim(std::move(quot));
    *r = rem;
}

FpPoly fp_inv_mod(FpPoly a, FpPoly m, long p) {
    FpPoly r0 = fp_trim(std::move(m)), r1 = fp_mod(std::move(a), r0, p);
    FpPoly s0 = {}, s1 = {1};
    while (!r1.empty()) {
        FpPoly q, r2;
        fp_divmod(r0, r1, p, &q, &r2);
        FpPoly s2 = s0;
        FpPoly qs = fp_mul(q, s1, p);
        if (s2.size() < qs.size()) s2.resize(qs.size(), 0);
        for (size_t i = 0; i < qs.size(); ++i)
            s2[i] = (((s2[i] - qs[i]) % p) + p) % p;
        s2 = fp_trim(std::move(s2));
        r0 = r1; r1 = r2;
        s0 = s1; s1 = s2;
    }
    if (r0.size() != 1)
        throw math_error("residue inversion: element not invertible");
    long c = fp_inv_scalar(r0[0], p);
    for (auto& x : s0) x = (x * c) % p;
    return fp_trim(std::move(s0));
}

std::vector<long> factor_distinct(long n) {
    std::vector<long> out;
    for (long d = 2; d * d <= n; ++d) {
        if (n % d == 0) {
            out.push_back(d);
            while (n % d == 0) n /= d;
        }
    }
    if (n > 1) out.push_back(n);
    return out;
}

long ipow(long b, long k) {
    long r = 1;
    while (k-- > 0) r *= b;
    return r;
}

} // namespace

// ------------------------------------------------------------------------
// Field construction
// ------------------------------------------------------------------------

Field::Field(const FieldDesc& desc) : desc_(desc) {
    p_ = desc.p;
    prec_ = desc.precision;
    if (!is_prime_small(p_))
        throw math_error("field: p must be a (small) prime, got " +
                         std::to_string(p_));
    if (prec_ < 4 || prec_ > 100000)
        throw math_error("field: precision out of range");
    pz_ = p_;

    if (!desc.unramified.empty()) {
        if (desc.unramified.size() < 3)
            throw math_error("unramified polynomial must have degree >= 2");
        if (desc.unramified.back() != 1)
            throw math_error("unramified polynomial must be monic");
        f_ = static_cast<long>(desc.unramified.size()) - 1;
        unram_.assign(desc.unramified.begin(), desc.unramified.end());
        FpPoly g(desc.unramified.size());
        for (size_t i = 0; i < desc.unramified.size(); ++i)
            g[i] = ((desc.unramified[i] % p_) + p_) % p_;
        auto frob_fixes = [&](long d) {
            mpz_class pd = 1;
            for (long i = 0; i < d; ++i) pd *= p_;
            FpPoly xq = fp_powmod({0, 1}, pd, g, p_);
            if (xq.size() < 2) xq.resize(2, 0);
            xq[1] = ((xq[1] - 1) % p_ + p_) % p_;
            return fp_trim(std::move(xq)).empty();
        };
        if (!frob_fixes(f_))
            throw math_error("unramified polynomial is not irreducible mod p");
        for (long d = 1; d < f_; ++d)
            if (f_ % d == 0 && frob_fixes(d))
                throw math_error("unramified polynomial factors mod p");
    } else {
        unram_ = {mpz_class(0), mpz_class(1)};
    }

    if (!desc.eisenstein.empty()) {
        if (desc.eisenstein.size() < 3)
            throw math_error("eisenstein polynomial must have degree >= 2");
        if (desc.eisenstein.back() != 1)
            throw math_error("eisenstein polynomial must be monic");
        e_ = static_cast<long>(desc.eisenstein.size()) - 1;
        eis_.assign(desc.eisenstein.begin(), desc.eisenstein.end());
        if (ord_p_mpz(eis_[0], p_, 3) != 1)
            throw math_error("eisenstein: constant term must have ord_p = 1");
        for (long i = 1; i < e_; ++i)
            if (ord_p_mpz(eis_[i], p_, 2) < 1)
                throw math_error(
                    "eisenstein: middle coefficients must be divisible by p");
    }

    qres_ = 1;
    for (long i = 0; i < f_; ++i) qres_ *= p_;
    max_mexp_ = mexp_for(prec_) + 4;

    if (e_ > 1) {
        // pi^e = p*U; precompute pi^{e-1} * U^{-1} so that division by pi
        // becomes one multiplication plus an exact division by p.
        Vec U = raw_zero();
        for (long k = 0; k < e_; ++k) {
            mpz_class c = -eis_[k];
            mpz_divexact_ui(c.get_mpz_t(), c.get_mpz_t(), p_);
            U[0 + f_ * k] = c;
        }
        raw_reduce(U, max_mexp_);
        Vec Uinv = raw_inv_unit(U, max_mexp_);
        Vec pre = raw_zero();
        pre[0 + f_ * (e_ - 1)] = 1;
        pi_inv_pre_ = raw_mul(pre, Uinv, max_mexp_);
    }
}

std::string Field::describe() const {
    std::ostringstream os;
    os << "Q_" << p_;
    auto poly = [](const Vec& c, const char* var) {
        std::ostringstream s;
        bool first = true;
        for (long i = static_cast<long>(c.size()) - 1; i >= 0; --i) {
            if (c[i] == 0) continue;
            if (!first) s << (c[i] > 0 ? " + " : " - ");
            else if (c[i] < 0) s << "-";
            mpz_class a = abs(c[i]);
            if (a != 1 || i == 0) s << a.get_str();
            if (i >= 1) {
                if (a != 1) s << "*";
                s << var;
                if (i > 1) s << "^" << i;
            }
            first = false;
        }
        return s.str();
    };
    if (f_ > 1) os << "[w]/(" << poly(unram_, "w") << ")";
    if (e_ > 1) os << "[pi]/(" << poly(eis_, "pi") << ")";
    return os.str();
}

// ------------------------------------------------------------------------
// Raw kernel
// ------------------------------------------------------------------------

mpz_class Field::pmod(long mexp) const {
    mpz_class m;
    mpz_ui_pow_ui(m.get_mpz_t(), p_,
                  static_cast<unsigned long>(std::max(1L, mexp)));
    return m;
}

void Field::raw_reduce(Vec& v, long mexp) const {
    mpz_class m = pmod(mexp);
    for (auto& c : v) {
        c %= m;
        if (c < 0) c += m;
    }
}

Field::Vec Field::raw_add(const Vec& a, const Vec& b, long mexp) const {
    Vec c(degree());
    for (long i = 0; i < degree(); ++i) c[i] = a[i] + b[i];
    raw_reduce(c, mexp);
    return c;
}

Field::Vec Field::raw_sub(const Vec& a, const Vec& b, long mexp) const {
    Vec c(degree());
    for (long i = 0; i < degree(); ++i) c[i] = a[i] - b[i];
    raw_reduce(c, mexp);
    return c;
}

Field::Vec Field::raw_mul(const Vec& a, const Vec& b, long mexp) const {
    const long e = e_, f = f_;
    mpz_class m = pmod(mexp);
    std::vector<std::vector<mpz_class>> P(
        2 * e - 1, std::vector<mpz_class>(2 * f - 1));
    for (long j1 = 0; j1 < e; ++j1)
        for (long j2 = 0; j2 < e; ++j2) {
            auto& row = P[j1 + j2];
            for (long i1 = 0; i1 < f; ++i1) {
                const mpz_class& x = a[i1 + f * j1];
                if (x == 0) continue;
                for (long i2 = 0; i2 < f; ++i2) {
                    const mpz_class& y = b[i2 + f * j2];
                    if (y == 0) continue;
                    row[i1 + i2] += x * y;
                }
            }
        }
    for (auto& row : P)
        for (auto& c : row) { c %= m; if (c < 0) c += m; }
    if (f > 1) {
        for (auto& row : P)
            for (long d = 2 * f - 2; d >= f; --d) {
                if (row[d] == 0) continue;
                mpz_class c = row[d];
                row[d] = 0;
                for (long i = 0; i < f; ++i) {
                    row[d - f + i] -= c * unram_[i];
                    row[d - f + i] %= m;
                    if (row[d - f + i] < 0) row[d - f + i] += m;
                }
            }
    }
    if (e > 1) {
        for (long d = 2 * e - 2; d >= e; --d)
            for (long i = 0; i < f; ++i) {
                if (P[d][i] == 0) continue;
                mpz_class c = P[d][i];
                P[d][i] = 0;
                for (long k = 0; k < e; ++k) {
                    P[d - e + k][i] -= c * eis_[k];
                    P[d - e + k][i] %= m;
                    if (P[d - e + k][i] < 0) P[d - e + k][i] += m;
                }
            }
    }
    Vec out(degree());
    for (long j = 0; j < e; ++j)
        for (long i = 0; i < f; ++i) out[i + f * j] = P[j][i];
    return out;
}

Field::Vec Field::raw_pow(Vec a, mpz_class k, long mexp) const {
    if (k < 0) throw math_error("raw_pow: negative exponent");
    Vec r = raw_zero();
    r[0] = 1;
    while (k > 0) {
        if (mpz_odd_p(k.get_mpz_t())) r = raw_mul(r, a, mexp);
        a = raw_mul(a, a, mexp);
        k >>= 1;
    }
    return r;
}

Field::Vec Field::raw_mul_pi(const Vec& a, long mexp) const {
    const long e = e_, f = f_;
    if (e == 1) {
        Vec c = a;
        for (auto& x : c) x *= p_;
        raw_reduce(c, mexp);
        return c;
    }
    Vec c(degree());
    for (long j = e - 1; j >= 1; --j)
        for (long i = 0; i < f; ++i) c[i + f * j] = a[i + f * (j - 1)];
    for (long i = 0; i < f; ++i) {
        const mpz_class& t = a[i + f * (e - 1)];
        if (t == 0) continue;
        for (long k = 0; k < e; ++k) c[i + f * k] -= t * eis_[k];
    }
    raw_reduce(c, mexp);
    return c;
}

Field::Vec Field::raw_div_pi(const Vec& a, long mexp) const {
    Vec t = (e_ == 1) ? a : raw_mul(a, pi_inv_pre_, mexp + 1);
    for (auto& c : t) {
        if (!mpz_divisible_ui_p(c.get_mpz_t(), p_))
            throw precision_error("division by pi of an element of ord 0");
        mpz_divexact_ui(c.get_mpz_t(), c.get_mpz_t(), p_);
    }
    raw_reduce(t, mexp);
    return t;
}

std::optional<long> Field::raw_ord(const Vec& v, long mexp) const {
    long best = kInfPrec;
    for (long j = 0; j < e_; ++j) {
        long tj = mexp;
        for (long i = 0; i < f_; ++i)
            tj = std::min(tj, ord_p_mpz(v[i + f_ * j], p_, mexp));
        best = std::min(best, e_ * tj + j);
    }
    if (best >= e_ * mexp) return std::nullopt;
    return best;
}

Field::Vec Field::residue(const Vec& v) const {
    Vec r(f_);
    for (long i = 0; i < f_; ++i) {
        r[i] = v[i] % p_;
        if (r[i] < 0) r[i] += p_;
    }
    return r;
}

bool Field::residue_is_zero(const Vec& v) const {
    for (const auto& c : residue(v))
        if (c != 0) return false;
    return true;
}

Field::Vec Field::residue_inv(const Vec& r) const {
    if (f_ == 1) {
        long a = mpz_class(r[0] % p_).get_si();
        return {mpz_class(fp_inv_scalar(a, p_))};
    }
    FpPoly a(f_), g(f_ + 1);
    for (long i = 0; i < f_; ++i) a[i] = mpz_class(r[i] % p_).get_si();
    for (long i = 0; i <= f_; ++i)
        g[i] = ((mpz_class(unram_[i] % p_).get_si()) + p_) % p_;
    FpPoly inv = fp_inv_mod(a, g, p_);
    Vec out(f_);
    for (size_t i = 0; i < inv.size(); ++i) out[i] = inv[i];
    return out;
}

Field::Vec Field::lift_residue(const Vec& r) const {
    Vec out = raw_zero();
    for (size_t i = 0; i < r.size() && i < static_cast<size_t>(f_); ++i)
        out[i] = r[i];
    return out;
}

Field::Vec Field::raw_inv_unit(const Vec& a, long mexp) const {
    if (residue_is_zero(a))
        throw math_error("raw_inv_unit: not a unit");
    Vec y = lift_residue(residue_inv(residue(a)));
    long correct = 1;
    const long target = e_ * mexp;
    Vec two = raw_zero();
    two[0] = 2;
    while (correct < target) {
        Vec corr = raw_sub(two, raw_mul(a, y, mexp), mexp);
        y = raw_mul(y, corr, mexp);
        correct *= 2;
    }
    Vec check = raw_mul(a, y, mexp);
    check[0] -= 1;
    raw_reduce(check, mexp);
    if (raw_ord(check, mexp).has_value())
        throw precision_error("unit inversion failed to converge");
    return y;
}

// ------------------------------------------------------------------------
// Element factories
// ------------------------------------------------------------------------

PAdic PAdic::make(const Field* F, long base_val, Vec v, long certified) {
    if (certified <= 0)
        return F->unknown_zero(base_val + std::max(0L, certified));
    long mexp = F->mexp_for(certified);
    F->raw_reduce(v, mexp);
    auto t = F->raw_ord(v, mexp);
    if (!t.has_value() || *t >= certified)
        return F->unknown_zero(base_val + certified);
    for (long i = 0; i < *t; ++i) v = F->raw_div_pi(v, mexp);
    long rel = certified - *t;
    F->raw_reduce(v, F->mexp_for(rel));
    return PAdic(F, false, base_val + *t, rel, std::move(v));
}

PAdic Field::zero() const { return PAdic(this, true, 0, 0, {}); }

PAdic Field::unknown_zero(long m) const { return PAdic(this, false, m, 0, {}); }

PAdic Field::one() const { return from_integer(1); }

PAdic Field::from_integer(const mpz_class& n) const {
    if (n == 0) return zero();
    Vec v = raw_zero();
    v[0] = n;
    long vp = ord_p_mpz(n, p_, mexp_for(prec_) + prec_ + 2);
    return PAdic::make(this, 0, std::move(v), e_ * vp + prec_);
}

PAdic Field::from_integer(long n) const { return from_integer(mpz_class(n)); }

PAdic Field::pi() const {
    if (e_ == 1) return from_integer(p_);
    Vec u = raw_zero();
    u[0] = 1;
    return PAdic(this, false, 1, prec_, std::move(u));
}

PAdic Field::from_coeffs(const std::vector<mpz_class>& coeffs) const {
    if (coeffs.size() > static_cast<size_t>(degree()))
        throw math_error("from_coeffs: too many coefficients");
    Vec v = raw_zero();
    bool nonzero = false;
    for (size_t i = 0; i < coeffs.size(); ++i) {
        v[i] = coeffs[i];
        if (coeffs[i] != 0) nonzero = true;
    }
    if (!nonzero) return zero();
    return PAdic::make(this, 0, std::move(v), prec_ + 2 * e_);
}

void Field::check_same_field(const PAdic& x) const {
    if (x.field_ptr() != this)
        throw math_error("mixed-field operands");
}

// ------------------------------------------------------------------------
// PAdic arithmetic
// ------------------------------------------------------------------------

long PAdic::ord() const {
    if (is_exact_zero()) throw math_error("ord of exact zero");
    if (rel_ == 0)
        throw precision_error("ord: element is zero to precision O(pi^" +
                              std::to_string(val_) + ")");
    return val_;
}

long PAdic::abs_prec() const {
    if (is_exact_zero()) return kInfPrec;
    return val_ + rel_;
}

PAdic PAdic::operator-() const {
    if (is_exact_zero() || rel_ == 0) return *this;
    Vec v = unit_;
    long mexp = F_->mexp_for(rel_);
    mpz_class m = F_->pmod(mexp);
    for (auto& c : v) {
        c = -c;
        c %= m;
        if (c < 0) c += m;
    }
    return PAdic(F_, false, val_, rel_, std::move(v));
}

PAdic PAdic::operator+(const PAdic& o) const {
    if (is_exact_zero()) return o;
    if (o.is_exact_zero()) return *this;
    F_->check_same_field(o);
    long absp = std::min(abs_prec(), o.abs_prec());
    long base = std::min(val_, o.val_);
    long cert = absp - base;
    if (cert <= 0) return F_->unknown_zero(absp);
    long mexp = F_->mexp_for(cert);
    auto shifted = [&](const PAdic& x) {
        Vec v = (x.rel_ == 0) ? F_->raw_zero() : x.unit_;
        if (x.rel_ != 0) {
            v.resize(F_->degree());
            for (long i = 0; i < x.val_ - base; ++i)
                v = F_->raw_mul_pi(v, mexp);
        }
        return v;
    };
    Vec s = F_->raw_add(shifted(*this), shifted(o), mexp);
    return make(F_, base, std::move(s), cert);
}

PAdic PAdic::operator-(const PAdic& o) const { return *this + (-o); }

PAdic PAdic::operator*(const PAdic& o) const {
    if (is_exact_zero() || o.is_exact_zero())
        return F_ ? F_->zero() : (o.F_ ? o.F_->zero() : PAdic());
    F_->check_same_field(o);
    if (rel_ == 0 || o.rel_ == 0)
        return F_->unknown_zero(val_ + o.val_);
    long rel = std::min(rel_, o.rel_);
    Vec v = F_->raw_mul(unit_, o.unit_, F_->mexp_for(rel));
    return PAdic(F_, false, val_ + o.val_, rel, std::move(v));
}

PAdic PAdic::inv() const {
    if (is_exact_zero()) throw math_error("division by exact zero");
    if (rel_ == 0)
        throw precision_error(
            "cannot invert: divisor is zero to precision O(pi^" +
            std::to_string(val_) + ")");
    Vec v = F_->raw_inv_unit(unit_, F_->mexp_for(rel_));
    return PAdic(F_, false, -val_, rel_, std::move(v));
}

PAdic PAdic::operator/(const PAdic& o) const { return *this * o.inv(); }

PAdic PAdic::pow(long k) const { return pow(mpz_class(k)); }

PAdic PAdic::pow(const mpz_class& k) const {
    if (!F_) throw math_error("pow on uninitialized element");
    if (k == 0) return F_->one();
    if (is_exact_zero()) {
        if (k < 0) throw math_error("negative power of exact zero");
        return F_->zero();
    }
    if (rel_ == 0) {
        if (k < 0) throw precision_error("negative power of imprecise zero");
        mpz_class m = k * val_;
        if (m > kInfPrec) m = kInfPrec;
        return F_->unknown_zero(m.get_si());
    }
    bool neg = k < 0;
    mpz_class ka = abs(k);
    Vec v = F_->raw_pow(unit_, ka, F_->mexp_for(rel_));
    mpz_class nv = ka * val_;
    if (abs(nv) > kInfPrec) throw math_error("pow: valuation overflow");
    PAdic r(F_, false, nv.get_si(), rel_, std::move(v));
    return neg ? r.inv() : r;
}

PAdic PAdic::shift(long k) const {
    if (is_exact_zero()) return *this;
    PAdic r = *this;
    r.val_ += k;
    return r;
}

PAdic PAdic::cap_abs_prec(long m) const {
    if (is_exact_zero()) return F_ ? F_->unknown_zero(m) : *this;
    if (m >= abs_prec()) return *this;
    long rel = m - val_;
    if (rel <= 0) return F_->unknown_zero(m);
    PAdic r = *this;
    r.rel_ = rel;
    F_->raw_reduce(r.unit_, F_->mexp_for(rel));
    return r;
}

PAdic PAdic::teichmuller() const {
    if (!is_unit()) throw math_error("teichmuller: input must be a unit");
    long mexp = F_->mexp_for(rel_);
    Vec y = unit_;
    long limit = 2 * F_->e() * mexp + 8;
    for (long it = 0; it < limit; ++it) {
        Vec yq = F_->raw_pow(y, F_->residue_card(), mexp);
        if (yq == y) break;
        y = std::move(yq);
    }
    Vec check = F_->raw_pow(y, F_->residue_card(), mexp);
    if (check != y)
        throw precision_error("teichmuller iteration did not converge");
    return PAdic(F_, false, 0, rel_, std::move(y));
}

long PAdic::match_order(const PAdic& o) const {
    PAdic d = *this - o;
    if (d.is_exact_zero()) return kInfPrec;
    return d.val_;
}

bool PAdic::eq_to_prec(const PAdic& o) const {
    return (*this - o).is_zero_to_precision();
}

long PAdic::one_unit_depth() const {
    if (!is_unit()) throw math_error("one_unit_depth: not a unit");
    PAdic d = *this / teichmuller() - F_->one();
    if (d.is_exact_zero()) return kInfPrec;
    return d.val_;
}

std::vector<std::vector<long>> PAdic::digits(long count) const {
    std::vector<std::vector<long>> out;
    if (is_exact_zero() || rel_ == 0) return out;
    const Field& F = *F_;
    long mexp = F.mexp_for(rel_);
    Vec cur = unit_;
    long n = std::min(count, rel_);
    for (long k = 0; k < n; ++k) {
        Vec r = F.residue(cur);
        std::vector<long> digit(F.f());
        for (long i = 0; i < F.f(); ++i) digit[i] = r[i].get_si();
        out.push_back(digit);
        cur = F.raw_sub(cur, F.lift_residue(r), mexp);
        cur = F.raw_div_pi(cur, mexp);
    }
    return out;
}

std::string PAdic::str() const {
    if (is_exact_zero()) return "0 (exact)";
    std::ostringstream os;
    if (rel_ == 0) {
        os << "O(pi^" << val_ << ")";
        return os.str();
    }
    auto ds = digits(std::min<long>(rel_, 24));
    os << "pi^" << val_ << "*[";
    for (size_t i = 0; i < ds.size(); ++i) {
        if (i) os << ",";
        if (F_->f() == 1) {
            os << ds[i][0];
        } else {
            os << "(";
            for (size_t j = 0; j < ds[i].size(); ++j) {
                if (j) os << ",";
                os << ds[i][j];
            }
            os << ")";
        }
    }
    if (static_cast<long>(ds.size()) < rel_) os << ",..";
    os << "] + O(pi^" << (val_ + rel_) << ")";
    return os.str();
}

mpz_class PAdic::to_integer(const mpz_class& bound) const {
    if (is_exact_zero()) return 0;
    const Field& F = *F_;
    if (rel_ == 0) {
        mpz_class pv;
        mpz_ui_pow_ui(pv.get_mpz_t(), F.p(),
                      static_cast<unsigned long>(std::max(0L, val_ / F.e())));
        if (pv <= 2 * bound)
            throw precision_error("to_integer: precision too low");
        return 0;
    }
    if (val_ < 0) throw math_error("to_integer: negative valuation");
    if (val_ % F.e() != 0)
        throw math_error("to_integer: fractional p-valuation");
    long mexp = F.mexp_for(rel_);
    mpz_class m = F.pmod(mexp);
    if (m <= 2 * bound)
        throw precision_error("to_integer: precision too low for bound");
    mpz_class z = unit_.empty() ? mpz_class(0) : unit_[0];
    mpz_class pw;
    mpz_ui_pow_ui(pw.get_mpz_t(), F.p(),
                  static_cast<unsigned long>(val_ / F.e()));
    z = (z * pw) % m;
    mpz_class bal = z;
    if (bal > m / 2) bal -= m;
    if (abs(bal) > bound)
        throw math_error("to_integer: no integer within bound (got " +
                         bal.get_str() + ")");
    if (!(*this - F.from_integer(bal)).is_zero_to_precision())
        throw math_error("to_integer: not an integer to precision");
    return bal;
}

std::ostream& operator<<(std::ostream& os, const PAdic& x) {
    return os << x.str();
}

// ------------------------------------------------------------------------
// Roots of unity and Hilbert symbols
// ------------------------------------------------------------------------

PAdic Field::teichmuller_generator() const {
    mpz_class order = qres_ - 1;
    if (order == 1) return one(); // residue field F_2: trivial unit group
    std::vector<long> primes = factor_distinct(order.get_si());
    long total = qres_.get_si();
    FpPoly g(f_ + 1);
    for (long i = 0; i <= f_; ++i)
        g[i] = ((mpz_class(unram_[i] % p_).get_si()) + p_) % p_;
    for (long code = 2; code < total; ++code) {
        Vec r(f_);
        long c = code;
        for (long i = 0; i < f_; ++i) {
            r[i] = c % p_;
            c /= p_;
        }
        bool generates = true;
        for (long ell : primes) {
            FpPoly a(f_);
            for (long i = 0; i < f_; ++i) a[i] = r[i].get_si();
            FpPoly powed = fp_powmod(fp_trim(a), order / ell, g, p_);
            if (powed == FpPoly{1}) {
                generates = false;
                break;
            }
        }
        if (generates) {
            PAdic lift = PAdic::make(this, 0, lift_residue(r), prec_);
            return lift.teichmuller();
        }
    }
    throw math_error("no residue field generator found");
}

PAdic Field::zeta(long order, long index) const {
    if (order <= 0) throw math_error("zeta: order must be positive");
    mpz_class grp = qres_ - 1;
    if (grp % order != 0)
        throw unsupported_error("zeta: order " + std::to_string(order) +
                                " does not divide p^f - 1 = " + grp.get_str());
    return teichmuller_generator().pow((grp / order) * index);
}

namespace {

// One root of a polynomial with PAdic coefficients, searched over residue
// discs with bounded refinement; returns false when no root is found.  A
// candidate is accepted once the value vanishes to accept_prec digits; the
// caller must certify the root independently.
bool find_padic_root(const Field& F, std::vector<PAdic> poly, PAdic* out,
                     int depth_budget, long accept_prec) {
    auto eval = [&](const std::vector<PAdic>& P, const PAdic& x) {
        PAdic v = F.zero();
        for (long i = static_cast<long>(P.size()) - 1; i >= 0; --i)
            v = v * x + P[i];
        return v;
    };
    auto deval = [&](const std::vector<PAdic>& P, const PAdic& x) {
        PAdic v = F.zero();
        for (long i = static_cast<long>(P.size()) - 1; i >= 1; --i)
            v = v * x + P[i] * F.from_integer(i);
        return v;
    };
    struct Item {
        std::vector<PAdic> poly;
        PAdic offset; // accumulated center
        PAdic scale;  // accumulated pi-power scale
        int depth;
    };
    std::vector<Item> work{{std::move(poly), F.zero(), F.one(), 0}};
    long total = F.residue_card().get_si();
    while (!work.empty()) {
        Item it = std::move(work.back());
        work.pop_back();
        for (long code = 0; code < total; ++code) {
            std::vector<mpz_class> r(F.f());
            long c = code;
            for (long i = 0; i < F.f(); ++i) {
                r[i] = c % F.p();
                c /= F.p();
            }
            PAdic z0 = (code == 0) ? F.zero() : F.from_coeffs(r);
            PAdic fz = eval(it.poly, z0);
            if (fz.is_certainly_nonzero() && fz.ord() == 0) continue;
            PAdic dz = deval(it.poly, z0);
            bool newton_ok =
                dz.is_certainly_nonzero() &&
                (fz.is_zero_to_precision() || fz.ord() > 2 * dz.ord());
            if (newton_ok) {
                PAdic z = z0;
                for (int k = 0; k < 64; ++k) {
                    PAdic v = eval(it.poly, z);
                    if (v.is_zero_to_precision() && v.abs_prec() >= accept_prec)
                        break;
                    PAdic d = deval(it.poly, z);
                    if (!d.is_certainly_nonzero()) break;
                    z = z - v / d;
                }
                PAdic v = eval(it.poly, z);
                if (v.is_zero_to_precision() && v.abs_prec() >= accept_prec) {
                    *out = it.offset + it.scale * z;
                    return true;
                }
            } else if (it.depth < depth_budget) {
                // refine the disc: z = z0 + pi*z', Taylor shift then rescale
                size_t n = it.poly.size();
                std::vector<std::vector<mpz_class>> C(
                    n, std::vector<mpz_class>(n, 0));
                for (size_t i = 0; i < n; ++i) {
                    C[i][0] = 1;
                    for (size_t j = 1; j <= i; ++j)
                        C[i][j] = C[i - 1][j - 1] +
                                  (j <= i - 1 ? C[i - 1][j] : mpz_class(0));
                }
                std::vector<PAdic> T(n, F.zero());
                for (size_t j = 0; j < n; ++j) {
                    PAdic acc = F.zero();
                    PAdic z0p = F.one();
                    for (size_t i = j; i < n; ++i) {
                        acc = acc + it.poly[i] * F.from_integer(C[i][j]) * z0p;
                        z0p = z0p * z0;
                    }
                    T[j] = acc;
                }
                PAdic pp = F.one();
                for (size_t j = 0; j < n; ++j) {
                    T[j] = T[j] * pp;
                    pp = pp * F.pi();
                }
                long mo = kInfPrec;
                for (const auto& cc : T)
                    if (cc.is_certainly_nonzero()) mo = std::min(mo, cc.ord());
                if (mo >= kInfPrec / 2) continue;
                for (auto& cc : T) cc = cc.shift(-mo);
                work.push_back({std::move(T), it.offset + it.scale * z0,
                                it.scale * F.pi(), it.depth + 1});
            }
        }
    }
    return false;
}

} // namespace

std::vector<PAdic> Field::p_power_roots() const {
    long k = 0;
    PAdic primitive = one();
    while (true) {
        long m = (p_ - 1) * ipow(p_, k); // phi(p^{k+1})
        if (e_ % m != 0) break;
        long s = e_ / m;
        // H(z) = Phi_{p^{k+1}}(1 + pi^s z)
        long pk = ipow(p_, k);
        auto poly_mul = [&](const std::vector<PAdic>& A,
                            const std::vector<PAdic>& B) {
            std::vector<PAdic> C(A.size() + B.size() - 1, zero());
            for (size_t i = 0; i < A.size(); ++i)
                for (size_t j = 0; j < B.size(); ++j)
                    C[i + j] = C[i + j] + A[i] * B[j];
            return C;
        };
        std::vector<PAdic> base = {one(), pi().pow(s)};
        std::vector<PAdic> step = {one()};
        for (long i = 0; i < pk; ++i) step = poly_mul(step, base);
        std::vector<PAdic> H = {zero()}, xp = {one()};
        for (long i = 0; i < p_; ++i) {
            if (H.size() < xp.size()) H.resize(xp.size(), zero());
            for (size_t j = 0; j < xp.size(); ++j) H[j] = H[j] + xp[j];
            if (i + 1 < p_) xp = poly_mul(xp, step);
        }
        long mo = kInfPrec;
        for (const auto& c : H)
            if (c.is_certainly_nonzero()) mo = std::min(mo, c.ord());
        for (auto& c : H) c = c.shift(-mo);
        PAdic root = zero();
        if (!find_padic_root(*this, H, &root, 6, 8)) break;
        PAdic cand = one() + pi().pow(s) * root;
        // certify: cand^(p^{k+1}) = 1 and cand^(p^k) != 1
        PAdic pw = cand.pow(ipow(p_, k + 1));
        if (!pw.eq_to_prec(one())) break;
        if (cand.pow(pk).eq_to_prec(one())) break;
        primitive = cand;
        ++k;
    }
    if (k == 0) return {};
    long n = ipow(p_, k);
    std::vector<PAdic> out;
    PAdic z = one();
    for (long i = 0; i < n; ++i) {
        out.push_back(z);
        z = z * primitive;
    }
    return out;
}

long Field::p_power_roots_exponent() const {
    size_t c = p_power_roots().size();
    long k = 0;
    while (c > 1) {
        c /= p_;
        ++k;
    }
    return k;
}

std::vector<PAdic> Field::roots_of_unity(long* cardinality) const {
    PAdic g = teichmuller_generator();
    long tame = mpz_class(qres_ - 1).get_si();
    std::vector<PAdic> tame_part;
    PAdic z = one();
    for (long i = 0; i < tame; ++i) {
        tame_part.push_back(z);
        z = z * g;
    }
    std::vector<PAdic> pp = p_power_roots();
    std::vector<PAdic> out;
    if (pp.empty()) {
        out = std::move(tame_part);
    } else {
        for (const auto& a : tame_part)
            for (const auto& b : pp) out.push_back(a * b);
    }
    if (cardinality) *cardinality = static_cast<long>(out.size());
    return out;
}

long Field::roots_of_unity_order() const {
    long n = 0;
    roots_of_unity(&n);
    return n;
}

PAdic Field::hilbert_symbol_tame(const PAdic& a, const PAdic& b, long n) const {
    check_same_field(a);
    check_same_field(b);
    if (n <= 0) throw math_error("hilbert symbol: n must be positive");
    mpz_class grp = qres_ - 1;
    if (grp % n != 0) {
        if (n % p_ == 0)
            throw unsupported_error(
                "wild Hilbert symbol (p | n) is not supported");
        throw unsupported_error("hilbert symbol: n does not divide p^f - 1");
    }
    long va = a.ord(), vb = b.ord();
    PAdic c = b.pow(va) / a.pow(vb);
    if ((va % 2 != 0) && (vb % 2 != 0)) c = -c;
    return c.teichmuller().pow(grp / n);
}

std::vector<long> Field::torsion_of_k1(const PAdic& q) const {
    check_same_field(q);
    if (q.ord() <= 0)
        throw math_error("torsion_of_k1: ord(q) must be positive");
    long n = roots_of_unity_order();
    if (n % p_ == 0)
        throw unsupported_error(
            "torsion_of_k1: p-power roots of unity present; the wild part "
            "of the torsion is not computed");
    PAdic zn = zeta(n);
    auto dlog = [&](const PAdic& w) {
        PAdic acc = one();
        for (long k = 0; k < n; ++k) {
            if (w.eq_to_prec(acc)) return k;
            acc = acc * zn;
        }
        throw math_error("torsion_of_k1: value is not an n-th root of unity");
    };
    std::vector<PAdic> gens = {pi(), teichmuller_generator()};
    for (long i = 1; i <= std::min(2 * e_, 6L); ++i)
        for (long t = 0; t < f_; ++t) {
            std::vector<mpz_class> c(t + 1, 0);
            c[t] = 1;
            gens.push_back(one() + from_coeffs(c).shift(i));
        }
    long d = n;
    for (const auto& x : gens)
        d = std::gcd(d, dlog(hilbert_symbol_tame(q, x, n)));
    if (d == 0) d = n;
    return {n, n, d};
}

} // namespace tatereg
