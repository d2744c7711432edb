#include "tatereg/laurent.hpp"

#include <algorithm>
#include <cstdlib>
#include <sstream>

namespace tatereg {

namespace {

long min_slope_pair(long n1, long d1, long n2, long d2, long* den_out) {
    if (n1 * d2 <= n2 * d1) {
        *den_out = d1;
        return n1;
    }
    *den_out = d2;
    return n2;
}

Tail combine_tails(const Tail& a, const Tail& b, long bound_at_1) {
    if (a.infinite && b.infinite) return Tail::exact();
    long num, den;
    if (a.infinite) {
        num = b.slope_num;
        den = b.slope_den;
    } else if (b.infinite) {
        num = a.slope_num;
        den = a.slope_den;
    } else {
        num = min_slope_pair(a.slope_num, a.slope_den, b.slope_num,
                             b.slope_den, &den);
    }
    return Tail::linear(bound_at_1, num, den < 1 ? 1 : den);
}

} // namespace

Laurent::Laurent(const Field* F, long lo, long hi) : F_(F), lo_(lo), hi_(hi) {
    if (hi < lo) throw math_error("laurent: empty window");
    c_.assign(hi - lo + 1, F->zero());
}

Laurent Laurent::constant(const PAdic& c) { return monomial(c, 0); }

Laurent Laurent::monomial(const PAdic& c, long n) {
    Laurent r(c.field_ptr(), n, n);
    r.c_[0] = c;
    return r;
}

const PAdic& Laurent::coeff(long n) const {
    if (!in_window(n))
        throw math_error("laurent: coefficient outside window");
    return c_[n - lo_];
}

void Laurent::set_coeff(long n, PAdic c) {
    if (!in_window(n))
        throw math_error("laurent: coefficient outside window");
    if (!c.is_exact_zero() && c.field_ptr() != F_)
        throw math_error("laurent: mixed-field coefficient");
    if (c.is_exact_zero()) c = F_->zero();
    c_[n - lo_] = std::move(c);
}

long Laurent::ord_bound(long n) const {
    if (n < lo_) return tlo_.bound(lo_ - n);
    if (n > hi_) return thi_.bound(n - hi_);
    const PAdic& x = c_[n - lo_];
    if (x.is_exact_zero()) return kInfPrec;
    if (x.is_zero_to_precision()) return x.abs_prec();
    return x.ord();
}

long Laurent::global_floor() const {
    long m = std::min(tlo_.bound(1), thi_.bound(1));
    for (long n = lo_; n <= hi_; ++n) m = std::min(m, ord_bound(n));
    return m;
}

Laurent Laurent::operator-() const {
    Laurent r = *this;
    for (auto& x : r.c_) x = -x;
    return r;
}

Laurent Laurent::operator+(const Laurent& o) const {
    if (F_ != o.F_) throw math_error("laurent: mixed fields");
    long rlo = std::min(lo_, o.lo_), rhi = std::max(hi_, o.hi_);
    Laurent r(F_, rlo, rhi);
    for (long n = rlo; n <= rhi; ++n) {
        auto piece = [&](const Laurent& s) -> PAdic {
            if (s.in_window(n)) return s.coeff(n);
            long b = s.ord_bound(n);
            return b >= kInfPrec ? F_->zero() : F_->unknown_zero(b);
        };
        r.set_coeff(n, piece(*this) + piece(o));
    }
    long blo = std::min(ord_bound(rlo - 1), o.ord_bound(rlo - 1));
    long bhi = std::min(ord_bound(rhi + 1), o.ord_bound(rhi + 1));
    r.tlo_ =
        (blo >= kInfPrec) ? Tail::exact() : combine_tails(tlo_, o.tlo_, blo);
    r.thi_ =
        (bhi >= kInfPrec) ? Tail::exact() : combine_tails(thi_, o.thi_, bhi);
    return r;
}

Laurent Laurent::operator-(const Laurent& o) const { return *this + (-o); }

Laurent Laurent::operator*(const Laurent& o) const {
    if (F_ != o.F_) throw math_error("laurent: mixed fields");
    // the two tail pairings of a convolution must not jointly decay, or
    // the beyond-scan error bound would be unbounded below
    auto paired_ok = [](const Tail& a, const Tail& b) {
        if (a.infinite || b.infinite) return true;
        return a.slope_num * b.slope_den + b.slope_num * a.slope_den >= 0;
    };
    if (!paired_ok(thi_, o.tlo_) || !paired_ok(tlo_, o.thi_))
        throw math_error("laurent: tail slopes jointly decay; cannot certify "
                         "the product");
    long rlo = lo_ + o.lo_, rhi = hi_ + o.hi_;

    // certified floor on the error at output index n over every coefficient
    // pair that is not fully stored; beyond the scan range both tail
    // distances grow monotonically, so the scan edge dominates.
    auto excluded_bound = [&](long n) {
        long A = std::min(lo_, n - o.hi_) - 1;
        long B = std::max(hi_, n - o.lo_) + 1;
        long best = kInfPrec;
        for (long i = A; i <= B; ++i) {
            long j = n - i;
            if (in_window(i) && o.in_window(j)) continue;
            long b1 = ord_bound(i), b2 = o.ord_bound(j);
            if (b1 >= kInfPrec || b2 >= kInfPrec) continue;
            best = std::min(best, b1 + b2);
        }
        return best;
    };

    Laurent r(F_, rlo, rhi);
    for (long n = rlo; n <= rhi; ++n) {
        PAdic acc = F_->zero();
        long i0 = std::max(lo_, n - o.hi_), i1 = std::min(hi_, n - o.lo_);
        for (long i = i0; i <= i1; ++i)
            acc = acc + c_[i - lo_] * o.c_[n - i - o.lo_];
        long err = excluded_bound(n);
        if (err < kInfPrec)
            acc = acc.cap_abs_prec(std::min(acc.abs_prec(), err));
        r.set_coeff(n, std::move(acc));
    }
    long blo = excluded_bound(rlo - 1);
    long bhi = excluded_bound(rhi + 1);
    r.tlo_ =
        (blo >= kInfPrec) ? Tail::exact() : combine_tails(tlo_, o.tlo_, blo);
    r.thi_ =
        (bhi >= kInfPrec) ? Tail::exact() : combine_tails(thi_, o.thi_, bhi);
    return r;
}

Laurent Laurent::scaled(const PAdic& c) const {
    if (c.is_exact_zero()) return Laurent(F_, lo_, hi_);
    Laurent r = *this;
    long v = c.is_certainly_nonzero() ? c.ord() : c.abs_prec();
    for (auto& x : r.c_) x = x * c;
    auto adjust = [&](Tail t) {
        if (!t.infinite) t.base += v;
        return t;
    };
    r.tlo_ = adjust(r.tlo_);
    r.thi_ = adjust(r.thi_);
    return r;
}

Laurent Laurent::shifted(long k) const {
    Laurent r = *this;
    r.lo_ += k;
    r.hi_ += k;
    return r;
}

Laurent Laurent::scale_arg(const PAdic& g) const {
    if (!g.is_certainly_nonzero())
        throw math_error("scale_arg: scaling point must be nonzero");
    long v = g.ord();
    Laurent r(F_, lo_, hi_);
    for (long n = lo_; n <= hi_; ++n) r.set_coeff(n, c_[n - lo_] * g.pow(n));
    auto adjust = [&](const Tail& t, long edge, int dir) {
        // new bound at distance d: old(d) + (edge + dir*d)*v
        if (t.infinite) return t;
        Tail nt;
        nt.infinite = false;
        nt.base = t.base + (edge + dir) * v;
        nt.slope_num = t.slope_num + dir * v * t.slope_den;
        nt.slope_den = t.slope_den;
        return nt;
    };
    r.tlo_ = adjust(tlo_, lo_, -1);
    r.thi_ = adjust(thi_, hi_, +1);
    return r;
}

Laurent Laurent::flipped() const {
    Laurent r(F_, -hi_, -lo_);
    for (long n = lo_; n <= hi_; ++n) r.set_coeff(-n, c_[n - lo_]);
    r.tlo_ = thi_;
    r.thi_ = tlo_;
    return r;
}

Laurent Laurent::derivative() const {
    Laurent r(F_, lo_ - 1, hi_ - 1);
    for (long n = lo_; n <= hi_; ++n)
        r.set_coeff(n - 1, F_->from_integer(n) * c_[n - lo_]);
    r.tlo_ = tlo_;
    r.thi_ = thi_;
    return r;
}

Laurent Laurent::truncated(long lo, long hi) const {
    Laurent r(F_, lo, hi);
    for (long n = lo; n <= hi; ++n) {
        if (in_window(n)) {
            r.set_coeff(n, c_[n - lo_]);
        } else {
            long b = ord_bound(n);
            r.set_coeff(n, b >= kInfPrec ? F_->zero() : F_->unknown_zero(b));
        }
    }
    if (lo <= lo_) {
        if (tlo_.infinite) {
            r.tlo_ = Tail::exact();
        } else {
            Tail t = tlo_;
            t.base = tlo_.bound(lo_ - lo + 1);
            r.tlo_ = t;
        }
    } else {
        long b = tlo_.bound(1);
        for (long n = lo_; n < lo; ++n) b = std::min(b, ord_bound(n));
        r.tlo_ = b >= kInfPrec ? Tail::exact() : Tail::flat(b);
    }
    if (hi >= hi_) {
        if (thi_.infinite) {
            r.thi_ = Tail::exact();
        } else {
            Tail t = thi_;
            t.base = thi_.bound(hi - hi_ + 1);
            r.thi_ = t;
        }
    } else {
        long b = thi_.bound(1);
        for (long n = hi + 1; n <= hi_; ++n) b = std::min(b, ord_bound(n));
        r.thi_ = b >= kInfPrec ? Tail::exact() : Tail::flat(b);
    }
    return r;
}

Laurent Laurent::cap_coeff_prec(long abs_prec) const {
    Laurent r = *this;
    for (auto& x : r.c_) x = x.cap_abs_prec(abs_prec);
    auto capt = [&](const Tail& t) {
        return Tail::flat(std::min(t.bound(1), abs_prec));
    };
    r.tlo_ = capt(tlo_);
    r.thi_ = capt(thi_);
    return r;
}

bool Laurent::unit_flag() const {
    if (!in_window(0)) return false;
    if (!c_[-lo_].is_unit()) return false;
    for (long n = lo_; n <= hi_; ++n) {
        if (n == 0) continue;
        if (ord_bound(n) < 1) return false;
    }
    return tlo_.bound(1) >= 1 && thi_.bound(1) >= 1;
}

Laurent Laurent::invert_unit(long lo, long hi, long target_prec) const {
    if (!unit_flag())
        throw math_error("invert_unit: unit flag condition fails");
    if (target_prec < 1)
        throw precision_error(
            "invert_unit: window underflow, no certifiable digits requested");
    const PAdic c0 = coeff(0);
    PAdic c0i = c0.inv();
    Laurent one = Laurent::constant(F_->one());
    Laurent s = one - scaled(c0i);
    long delta = std::min(s.lo_tail().bound(1), s.hi_tail().bound(1));
    for (long n = s.lo(); n <= s.hi(); ++n) {
        if (n == 0) continue;
        delta = std::min(delta, s.ord_bound(n));
    }
    if (delta < 1)
        throw math_error("invert_unit: no positive-order bound on the "
                         "nonconstant part");
    if (delta >= kInfPrec) {
        Laurent r(F_, lo, hi);
        if (lo <= 0 && 0 <= hi) r.set_coeff(0, c0i);
        return r;
    }
    long cutoff = target_prec / delta + 1;
    Laurent acc = one.truncated(lo, hi);
    Laurent res = acc;
    long cut_err = delta;
    for (long k = 1; k <= cutoff; ++k) {
        acc = (acc * s).truncated(lo, hi);
        res = res + acc;
        // residual sum_{j>k} s^j has ord >= floor(s^k) + delta
        cut_err = std::max((k + 1) * delta, acc.global_floor() + delta);
        if (acc.global_floor() >= target_prec) break;
    }
    res = res.scaled(c0i).truncated(lo, hi);
    Laurent out(F_, lo, hi);
    for (long n = lo; n <= hi; ++n)
        out.set_coeff(n, res.coeff(n).cap_abs_prec(
                             std::min(res.coeff(n).abs_prec(), cut_err)));
    out.set_lo_tail(Tail::flat(std::min(delta, cut_err)));
    out.set_hi_tail(Tail::flat(std::min(delta, cut_err)));
    return out;
}

Laurent Laurent::invert_power_series(long hi, long target_prec) const {
    long m = lo_;
    while (m <= hi_ && !c_[m - lo_].is_certainly_nonzero()) {
        if (!c_[m - lo_].is_exact_zero() &&
            c_[m - lo_].abs_prec() < target_prec)
            throw math_error("invert_power_series: uncertain low coefficient");
        ++m;
    }
    if (m > hi_ || !tlo_.infinite)
        throw math_error("invert_power_series: no unit low coefficient");
    const PAdic g0 = c_[m - lo_];
    if (!g0.is_unit())
        throw math_error(
            "invert_power_series: lowest coefficient is not a unit");
    if (global_floor() < 0)
        throw math_error("invert_power_series: series is not integral");
    PAdic g0i = g0.inv();
    long K = hi + m;
    if (K < 0)
        throw math_error("invert_power_series: requested window too low");
    std::vector<PAdic> h(K + 1, F_->zero());
    h[0] = g0i;
    for (long k = 1; k <= K; ++k) {
        PAdic acc = F_->zero();
        for (long j = 1; j <= k; ++j) {
            long idx = m + j;
            PAdic gj;
            if (idx <= hi_) {
                gj = c_[idx - lo_];
            } else {
                long b = thi_.bound(idx - hi_);
                if (b >= kInfPrec) continue;
                gj = F_->unknown_zero(b);
            }
            acc = acc + gj * h[k - j];
        }
        h[k] = -(g0i * acc);
    }
    Laurent r(F_, -m, hi);
    for (long k = 0; k <= K; ++k) r.set_coeff(k - m, h[k]);
    r.set_lo_tail(Tail::exact());
    r.set_hi_tail(Tail::flat(0));
    return r;
}

long Laurent::zero_margin(long a, long b) const {
    long m = kInfPrec;
    for (long n = a; n <= b; ++n) {
        if (in_window(n)) {
            const PAdic& x = c_[n - lo_];
            if (x.is_certainly_nonzero()) return -1;
            m = std::min(m, x.is_exact_zero() ? kInfPrec : x.abs_prec());
        } else {
            m = std::min(m, ord_bound(n));
        }
    }
    return m;
}

std::string Laurent::str(long max_terms) const {
    std::ostringstream os;
    os << "[" << lo_ << "," << hi_ << "] ";
    long shown = 0;
    for (long n = lo_; n <= hi_ && shown < max_terms; ++n) {
        if (c_[n - lo_].is_exact_zero()) continue;
        os << "u^" << n << ":(" << c_[n - lo_].str() << ") ";
        ++shown;
    }
    if (!tlo_.infinite) os << " lo_tail>=" << tlo_.base;
    if (!thi_.infinite) os << " hi_tail>=" << thi_.base;
    return os.str();
}

// ------------------------------------------------------------------------
// residue of dlog
// ------------------------------------------------------------------------

namespace {

PAdic dlog_residue_value(const Laurent& f) {
    const Field& F = f.field();
    Laurent df = f.derivative();
    Laurent fi;
    if (f.unit_flag()) {
        long H = std::max(std::abs(f.lo()), std::abs(f.hi())) + 1;
        fi = f.invert_unit(-H, H, F.precision());
    } else {
        long top = std::max(0L, -f.lo() + 1);
        fi = f.invert_power_series(top, F.precision());
    }
    Laurent prod = df * fi;
    if (!prod.in_window(-1)) {
        long b = prod.ord_bound(-1);
        return b >= kInfPrec ? F.zero() : F.unknown_zero(b);
    }
    return prod.coeff(-1);
}

} // namespace

long residue_dlog(long u_exponent, const FactoredUnit& unit, long modulus) {
    if (modulus < 1) throw math_error("residue_dlog: modulus must be >= 1");
    long total = u_exponent;
    for (const auto& [f, exp] : unit.factors) {
        PAdic r = dlog_residue_value(f);
        long span = f.hi() - f.lo() + 4;
        mpz_class ri = r.to_integer(span);
        total += exp * ri.get_si();
    }
    return ((total % modulus) + modulus) % modulus;
}

long residue_dlog(long u_exponent, const Laurent& unit, long modulus) {
    FactoredUnit fu;
    fu.factors.push_back({unit, 1});
    return residue_dlog(u_exponent, fu, modulus);
}

// ------------------------------------------------------------------------
// p^nu-th power thresholds and roots
// ------------------------------------------------------------------------

long power_reduction_threshold(const Field& F, long nu) {
    long e = F.e();
    return nu * e + (e + F.p() - 2) / (F.p() - 1) + 1;
}

long pnu_power_depth(const Field& F, long nu) {
    long e = F.e();
    return nu * e + e / (F.p() - 1) + 1;
}

PAdic pnu_root_one_unit(const PAdic& u, long nu) {
    const Field& F = u.field();
    if (nu == 0) return u;
    PAdic x = u - F.one();
    if (x.is_exact_zero()) return F.one();
    long depth = x.is_certainly_nonzero() ? x.ord() : x.abs_prec();
    if (depth * (F.p() - 1) <= nu * F.e() * (F.p() - 1) + F.e())
        throw math_error("pnu_root_one_unit: 1-unit too shallow for the "
                         "binomial series");
    mpz_class pnu = 1;
    for (long i = 0; i < nu; ++i) pnu *= F.p();
    PAdic lambda = F.one() / F.from_integer(pnu);
    PAdic res = F.one(), coef = F.one(), xpow = F.one();
    long target = u.abs_prec();
    // term k has ord >= k*gamma, gamma = depth - (nu*e + ceil(e/(p-1))) >= 1
    long gamma = depth - nu * F.e() - (F.e() + F.p() - 2) / (F.p() - 1);
    if (gamma < 1) gamma = 1;
    long last = target / gamma + 1;
    for (long k = 1; k <= last; ++k) {
        coef = coef * (lambda - F.from_integer(k - 1)) / F.from_integer(k);
        xpow = xpow * x;
        res = res + coef * xpow;
    }
    res = res.cap_abs_prec(std::min(res.abs_prec(), (last + 1) * gamma));
    PAdic check = res.pow(pnu) - u;
    if (!check.is_zero_to_precision())
        throw precision_error("pnu_root_one_unit: verification failed");
    return res;
}

Laurent pnu_root_one_plus(const Laurent& s, long nu, long lo, long hi) {
    const Field& F = s.field();
    Laurent one = Laurent::constant(F.one());
    if (nu == 0) return (one + s).truncated(lo, hi);
    long depth = s.global_floor();
    if (depth * (F.p() - 1) <= nu * F.e() * (F.p() - 1) + F.e())
        throw math_error("pnu_root_one_plus: series too shallow");
    mpz_class pnu = 1;
    for (long i = 0; i < nu; ++i) pnu *= F.p();
    PAdic lambda = F.one() / F.from_integer(pnu);
    lo = std::min(lo, std::min(0L, s.lo()));
    hi = std::max(hi, std::max(0L, s.hi()));
    Laurent res = one.truncated(lo, hi);
    Laurent xpow = res;
    PAdic coef = F.one();
    long target = F.precision();
    long gamma = depth - nu * F.e() - (F.e() + F.p() - 2) / (F.p() - 1);
    if (gamma < 1) gamma = 1;
    long last = target / gamma + 1;
    for (long k = 1; k <= last; ++k) {
        coef = coef * (lambda - F.from_integer(k - 1)) / F.from_integer(k);
        xpow = (xpow * s).truncated(lo, hi);
        res = res + xpow.scaled(coef);
    }
    return res.cap_coeff_prec((last + 1) * gamma);
}

ReduceResult reduce_mod_power(const FactoredUnit& f, long nu) {
    if (f.factors.empty()) return {f, 0, 0};
    const Field& F = f.factors.front().first.field();
    long T = power_reduction_threshold(F, nu);
    ReduceResult out;
    out.threshold = T;
    for (const auto& fac : f.factors) {
        const Laurent& L = fac.first;
        bool droppable = true;
        if (!L.in_window(0)) {
            droppable = false;
        } else {
            PAdic d0 = L.coeff(0) - F.one();
            long b0 = d0.is_exact_zero()
                          ? kInfPrec
                          : (d0.is_certainly_nonzero() ? d0.ord()
                                                       : d0.abs_prec());
            if (b0 <= T) droppable = false;
            for (long n = L.lo(); droppable && n <= L.hi(); ++n) {
                if (n == 0) continue;
                if (L.ord_bound(n) <= T) droppable = false;
            }
            if (L.lo_tail().bound(1) <= T || L.hi_tail().bound(1) <= T)
                droppable = false;
        }
        if (droppable)
            ++out.dropped_count;
        else
            out.kept.factors.push_back(fac);
    }
    return out;
}

} // namespace tatereg
