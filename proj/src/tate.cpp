#include "tatereg/tate.hpp"

#include <algorithm>
#include <cstdlib>
#include <sstream>

namespace tatereg {

TateCurve::TateCurve(const Field* F, PAdic q) : F_(F), q_(std::move(q)) {
    if (q_.field_ptr() != F_)
        throw math_error("tate curve: q from a different field");
    if (!q_.is_certainly_nonzero())
        throw math_error("tate curve: q must be certified nonzero");
    nq_ = q_.ord();
    if (nq_ <= 0) throw math_error("tate curve: ord(q) must be positive");
}

std::optional<long> TateCurve::q_power_class(const PAdic& alpha) const {
    if (!alpha.is_certainly_nonzero())
        throw math_error("q_power_class: alpha must be certified nonzero");
    long v = alpha.ord();
    if (v % nq_ != 0) return std::nullopt;
    long k = v / nq_;
    PAdic t = alpha * q_.pow(-k);
    if ((t - F_->one()).is_zero_to_precision()) return k;
    return std::nullopt;
}

std::pair<PAdic, long> TateCurve::normalize_to_fundamental(
    const PAdic& alpha) const {
    long v = alpha.ord();
    long k = v >= 0 ? v / nq_ : -((-v + nq_ - 1) / nq_);
    return {alpha * q_.pow(-k), k};
}

Laurent TateCurve::theta_series(long window, long k_max) const {
    auto [front, rest] = theta_series_split(window, k_max);
    return (front * rest).truncated(-window, window);
}

std::pair<Laurent, Laurent> TateCurve::theta_series_split(long window,
                                                          long k_max) const {
    if (k_max < 1) throw math_error("theta_series: k_max must be >= 1");
    long cap = (k_max + 1) * nq_;
    Laurent front(F_, 0, 1);
    front.set_coeff(0, F_->one());
    front.set_coeff(1, -F_->one());
    Laurent rest = Laurent::constant(F_->one());
    PAdic qk = F_->one();
    for (long k = 1; k <= k_max; ++k) {
        qk = qk * q_;
        Laurent a(F_, 0, 1);
        a.set_coeff(0, F_->one());
        a.set_coeff(1, -qk);
        Laurent b(F_, -1, 0);
        b.set_coeff(0, F_->one());
        b.set_coeff(-1, -qk);
        rest = rest * a * b;
    }
    rest = rest.truncated(-window, window).cap_coeff_prec(cap);
    return {front, rest};
}

std::pair<Laurent, Laurent> TateCurve::theta_series_shifted_split(
    const PAdic& gamma, long window, long k_max) const {
    if (!gamma.is_certainly_nonzero())
        throw math_error("theta_series_shifted: gamma must be nonzero");
    long vg = gamma.ord();
    if (vg <= -nq_ || vg >= nq_)
        throw math_error("theta_series_shifted: |ord(gamma)| must be < ord(q)");
    long cap = (k_max + 1) * nq_ - std::abs(vg);
    if (cap < 1) throw math_error("theta_series_shifted: k_max too small");
    Laurent front(F_, 0, 1);
    front.set_coeff(0, F_->one());
    front.set_coeff(1, -gamma);
    Laurent rest = Laurent::constant(F_->one());
    PAdic gi = gamma.inv();
    PAdic qk = F_->one();
    for (long k = 1; k <= k_max; ++k) {
        qk = qk * q_;
        Laurent a(F_, 0, 1);
        a.set_coeff(0, F_->one());
        a.set_coeff(1, -(qk * gamma));
        Laurent b(F_, -1, 0);
        b.set_coeff(0, F_->one());
        b.set_coeff(-1, -(qk * gi));
        rest = rest * a * b;
    }
    rest = rest.truncated(-window, window).cap_coeff_prec(cap);
    return {front, rest};
}

PAdic TateCurve::theta_eval(const PAdic& alpha) const {
    if (!alpha.is_certainly_nonzero())
        throw math_error("theta_eval: alpha must be certified nonzero");
    if (q_power_class(alpha).has_value()) return F_->zero();
    auto [a, k] = normalize_to_fundamental(alpha);
    long v = a.ord(); // 0 <= v < nq_
    // theta(q^k w) = (-1)^k q^{-k(k-1)/2} w^{-k} theta(w)
    PAdic corr = F_->one();
    if (k != 0) {
        corr = q_.pow(-(k * (k - 1)) / 2) * a.pow(-k);
        if (k % 2 != 0) corr = -corr;
    }
    long target = F_->precision();
    PAdic res = F_->one() - a;
    PAdic ai = a.inv();
    PAdic qn = F_->one();
    long k_lim = (target + v) / nq_ + 1;
    for (long n = 1; n <= k_lim; ++n) {
        qn = qn * q_;
        res = res * (F_->one() - qn * a) * (F_->one() - qn * ai);
    }
    long drop = std::min((k_lim + 1) * nq_ + v, (k_lim + 1) * nq_ - v);
    res = res.cap_abs_prec(res.ord() + drop);
    return corr * res;
}

PAdic TateCurve::theta_deriv_unit() const {
    long target = F_->precision();
    PAdic res = F_->one(), qn = F_->one();
    long k_lim = target / nq_ + 1;
    for (long n = 1; n <= k_lim; ++n) {
        qn = qn * q_;
        PAdic t = F_->one() - qn;
        res = res * t * t;
    }
    return res.cap_abs_prec((k_lim + 1) * nq_);
}

std::pair<PAdic, PAdic> TateCurve::curve_coefficients() const {
    long target = F_->precision();
    long n_lim = target / nq_ + 1;
    PAdic a4 = F_->zero(), a6 = F_->zero(), qn = F_->one();
    for (long n = 1; n <= n_lim; ++n) {
        qn = qn * q_;
        PAdic base = qn / (F_->one() - qn);
        mpz_class n3 = mpz_class(n) * n * n;
        mpz_class n5 = n3 * mpz_class(n) * n;
        a4 = a4 + F_->from_integer(n3) * base;
        mpz_class c6 = 5 * n3 + 7 * n5; // always divisible by 12
        mpz_divexact_ui(c6.get_mpz_t(), c6.get_mpz_t(), 12);
        a6 = a6 + F_->from_integer(c6) * base;
    }
    a4 = (-F_->from_integer(5) * a4).cap_abs_prec((n_lim + 1) * nq_);
    a6 = (-a6).cap_abs_prec((n_lim + 1) * nq_);
    return {a4, a6};
}

std::pair<Laurent, Laurent> TateCurve::xy_series(long B) const {
    long target = F_->precision();
    Laurent X(F_, -B, B), Y(F_, -B, B);
    PAdic one = F_->one();
    for (long m = 1; m <= B; ++m) {
        PAdic qm = q_.pow(m);
        PAdic g = (one - qm).inv();
        X.set_coeff(m, F_->from_integer(m) * g);
        X.set_coeff(-m, F_->from_integer(m) * qm * g);
        mpz_class m2 = mpz_class(m) * (m - 1) / 2;
        mpz_class m3 = mpz_class(m) * (m + 1) / 2;
        if (m >= 2) Y.set_coeff(m, F_->from_integer(m2) * g);
        Y.set_coeff(-m, -F_->from_integer(m3) * qm * g);
    }
    long n_lim = target / nq_ + 1;
    PAdic s = F_->zero(), qn = one;
    for (long n = 1; n <= n_lim; ++n) {
        qn = qn * q_;
        s = s + F_->from_integer(n) * qn / (one - qn);
    }
    s = s.cap_abs_prec((n_lim + 1) * nq_);
    X.set_coeff(0, -F_->from_integer(2) * s);
    Y.set_coeff(0, s);
    Tail lowt = Tail::linear((B + 1) * nq_, nq_, 1);
    X.set_lo_tail(lowt);
    Y.set_lo_tail(lowt);
    X.set_hi_tail(Tail::flat(0));
    Y.set_hi_tail(Tail::flat(0));
    return {X, Y};
}

TateCurve::Point TateCurve::point_eval(const PAdic& u0) const {
    if (!u0.is_certainly_nonzero())
        throw math_error("point_eval: u0 must be certified nonzero");
    if (q_power_class(u0).has_value()) return Point{};
    auto norm = normalize_to_fundamental(u0);
    const PAdic& u = norm.first;
    long v = u.ord();
    long target = F_->precision();
    PAdic one = F_->one();
    long k_lim = (target + v) / nq_ + 2;

    PAdic d = one - u;
    PAdic d2 = d * d;
    PAdic x = u / d2;
    PAdic y = u * u / (d2 * d);
    PAdic qk = one, ui = u.inv();
    for (long k = 1; k <= k_lim; ++k) {
        qk = qk * q_;
        PAdic a = qk * u;
        PAdic da = one - a;
        PAdic da2 = da * da;
        x = x + a / da2;
        y = y + a * a / (da2 * da);
        PAdic b = qk * ui;
        PAdic db = one - b;
        PAdic db2 = db * db;
        x = x + b / db2;
        y = y - b / (db2 * db);
    }
    long n_lim = target / nq_ + 1;
    PAdic s = F_->zero(), qn = one;
    for (long n = 1; n <= n_lim; ++n) {
        qn = qn * q_;
        s = s + F_->from_integer(n) * qn / (one - qn);
    }
    x = x - F_->from_integer(2) * s;
    y = y + s;
    long drop = std::min((k_lim + 1) * nq_ + v, (k_lim + 1) * nq_ - v);
    drop = std::min(drop, (n_lim + 1) * nq_);
    Point P;
    P.infinity = false;
    P.x = x.cap_abs_prec(std::min(x.abs_prec(), drop));
    P.y = y.cap_abs_prec(std::min(y.abs_prec(), drop));
    return P;
}

TateCurve::Point TateCurve::negate_point(const Point& P) const {
    if (P.infinity) return P;
    Point R;
    R.infinity = false;
    R.x = P.x;
    R.y = -P.y - P.x;
    return R;
}

TateCurve::Point TateCurve::add_points(const Point& P, const Point& Q) const {
    if (P.infinity) return Q;
    if (Q.infinity) return P;
    auto [a4, a6] = curve_coefficients();
    (void)a6;
    PAdic one = F_->one();
    bool same_x = (P.x - Q.x).is_zero_to_precision();
    if (same_x && (Q.y + P.y + P.x).is_zero_to_precision()) return Point{};
    PAdic lambda = same_x ? (F_->from_integer(3) * P.x * P.x + a4 - P.y) /
                                (F_->from_integer(2) * P.y + P.x)
                          : (Q.y - P.y) / (Q.x - P.x);
    PAdic nu = P.y - lambda * P.x;
    Point R;
    R.infinity = false;
    R.x = lambda * lambda + lambda - P.x - Q.x;
    R.y = -(lambda + one) * R.x - nu;
    return R;
}

PAdic TateCurve::curve_equation_residual(const Point& P) const {
    if (P.infinity) return F_->zero();
    auto [a4, a6] = curve_coefficients();
    return P.y * P.y + P.x * P.y - P.x * P.x * P.x - a4 * P.x - a6;
}

PAdic TateCurve::s_value(const PAdic& alpha, long nu) const {
    if (!alpha.is_certainly_nonzero())
        throw math_error("s_value: alpha must be certified nonzero");
    long v = alpha.ord();
    if (v <= -nq_ || v >= nq_)
        throw math_error("s_value: |ord(alpha)| must be < ord(q)");
    PAdic one = F_->one();
    if ((alpha - one).is_zero_to_precision() ||
        (alpha + one).is_zero_to_precision())
        return one; // termwise cancellation, exact
    long T = power_reduction_threshold(*F_, nu);
    PAdic ai = alpha.inv();
    PAdic res = one, qk = one;
    for (long k = 1;; ++k) {
        qk = qk * q_;
        long o1 = v + k * nq_, o2 = -v + k * nq_;
        if (o1 > T && o2 > T) break;
        PAdic term = (one - alpha * qk) / (one - ai * qk);
        res = res * term.pow(k);
        if (k > 4 * F_->precision() + 16)
            throw precision_error("s_value: truncation did not terminate");
    }
    return res;
}

// ------------------------------------------------------------------------
// ThetaProduct
// ------------------------------------------------------------------------

ThetaProduct::ThetaProduct(const TateCurve* E) : E_(E), c_(E->field().one()) {}

ThetaProduct ThetaProduct::constant(const TateCurve* E, const PAdic& c) {
    ThetaProduct f(E);
    f.mul_constant(c);
    return f;
}

ThetaProduct& ThetaProduct::mul_constant(const PAdic& c) {
    if (!c.is_certainly_nonzero())
        throw math_error("theta product: constants must be certified nonzero");
    c_ = c_ * c;
    return *this;
}

ThetaProduct& ThetaProduct::mul_upower(long k) {
    e_ += k;
    return *this;
}

ThetaProduct& ThetaProduct::mul_theta(const PAdic& shift, long exponent) {
    if (exponent == 0) return *this;
    auto [a, k] = E_->normalize_to_fundamental(shift);
    if (k != 0) {
        // theta(q^k w) = (-1)^k q^{-k(k-1)/2} w^{-k} theta(w), w = a*u
        PAdic corr = E_->q().pow(-(k * (k - 1)) / 2) * a.pow(-k);
        if (k % 2 != 0) corr = -corr;
        c_ = c_ * corr.pow(exponent);
        e_ += -k * exponent;
    }
    for (auto it = factors_.begin(); it != factors_.end(); ++it) {
        if ((it->shift - a).is_zero_to_precision()) {
            it->exponent += exponent;
            if (it->exponent == 0) factors_.erase(it);
            return *this;
        }
    }
    factors_.push_back({a, exponent});
    return *this;
}

ThetaProduct ThetaProduct::operator*(const ThetaProduct& o) const {
    ThetaProduct r = *this;
    r.mul_constant(o.c_);
    r.mul_upower(o.e_);
    for (const auto& f : o.factors_) r.mul_theta(f.shift, f.exponent);
    return r;
}

ThetaProduct ThetaProduct::pow(long k) const {
    ThetaProduct r(E_);
    if (k == 0) return r;
    r.c_ = c_.pow(k);
    r.e_ = e_ * k;
    r.factors_ = factors_;
    for (auto& f : r.factors_) f.exponent *= k;
    return r;
}

ThetaProduct ThetaProduct::inverse() const { return pow(-1); }

bool ThetaProduct::q_periodic() const {
    long total = 0;
    for (const auto& f : factors_) total += f.exponent;
    if (total != 0) return false;
    PAdic prod = E_->field().one();
    for (const auto& f : factors_) prod = prod * f.shift.pow(f.exponent);
    return (prod - E_->q().pow(e_)).is_zero_to_precision();
}

long ThetaProduct::order_at_class(const PAdic& alpha) const {
    long m = 0;
    for (const auto& f : factors_)
        if (E_->q_power_class(f.shift * alpha).has_value()) m += f.exponent;
    return m;
}

PAdic ThetaProduct::eval(const PAdic& u0) const {
    PAdic res = c_ * u0.pow(e_);
    for (const auto& f : factors_) {
        PAdic t = E_->theta_eval(f.shift * u0);
        if (t.is_exact_zero())
            throw math_error("theta product: evaluation at a divisor point");
        res = res * t.pow(f.exponent);
    }
    return res;
}

PAdic ThetaProduct::leading_value_at_class(const PAdic& alpha) const {
    PAdic A = E_->theta_deriv_unit();
    PAdic res = c_ * alpha.pow(e_);
    for (const auto& f : factors_) {
        auto k = E_->q_power_class(f.shift * alpha);
        if (k.has_value()) {
            // theta(shift*u)/(u-alpha) -> (-1)^{k+1} alpha^{-1}
            //                             q^{-k(k-1)/2} A   at u = alpha
            PAdic lim = alpha.inv() * E_->q().pow(-(*k * (*k - 1)) / 2) * A;
            if ((*k + 1) % 2 != 0) lim = -lim;
            res = res * lim.pow(f.exponent);
        } else {
            res = res * E_->theta_eval(f.shift * alpha).pow(f.exponent);
        }
    }
    return res;
}

std::string ThetaProduct::str() const {
    std::ostringstream os;
    os << "(" << c_.str() << ") * u^" << e_;
    for (const auto& f : factors_)
        os << " * theta[" << f.shift.str() << "]^" << f.exponent;
    return os.str();
}

ThetaProduct function_from_divisor(
    const TateCurve* E, const PAdic& c,
    const std::vector<std::pair<PAdic, PAdic>>& pairs) {
    const Field& F = E->field();
    PAdic prod = F.one();
    for (const auto& [a, b] : pairs) prod = prod * (a / b);
    if (!(prod - F.one()).is_zero_to_precision())
        throw math_error("function_from_divisor: q-periodicity condition "
                         "prod a_i/b_i = 1 fails");
    ThetaProduct f = ThetaProduct::constant(E, c);
    for (const auto& [a, b] : pairs) {
        f.mul_theta(a, 1);
        f.mul_theta(b, -1);
    }
    if (!f.q_periodic())
        throw math_error("function_from_divisor: result is not q-periodic");
    return f;
}

} // namespace tatereg
