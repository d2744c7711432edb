#include "tatereg/cyclotomic.hpp"

#include <algorithm>
#include <map>
#include <mutex>
#include <numbers>
#include <numeric>
#include <sstream>

namespace tatereg {

long euler_phi(long n) {
    long r = n;
    for (long p = 2; p * p <= n; ++p) {
        if (n % p == 0) {
            r -= r / p;
            while (n % p == 0) n /= p;
        }
    }
    if (n > 1) r -= r / n;
    return r;
}

namespace {

using ZPoly = std::vector<mpz_class>;

// exact division of integer polynomials; the remainder must vanish
ZPoly zpoly_div(const ZPoly& num, const ZPoly& den) {
    ZPoly rem = num,
          q(num.size() >= den.size() ? num.size() - den.size() + 1 : 0);
    while (rem.size() >= den.size()) {
        mpz_class c = rem.back();
        if (den.back() != 1) {
            if (!mpz_divisible_p(c.get_mpz_t(), den.back().get_mpz_t()))
                throw math_error("cyclotomic: non-exact polynomial division");
            c /= den.back();
        }
        size_t off = rem.size() - den.size();
        q[off] = c;
        for (size_t i = 0; i < den.size(); ++i) rem[off + i] -= c * den[i];
        while (!rem.empty() && rem.back() == 0) rem.pop_back();
        if (rem.size() < den.size()) break;
    }
    for (const auto& c : rem)
        if (c != 0) throw math_error("cyclotomic: nonzero remainder");
    while (!q.empty() && q.back() == 0) q.pop_back();
    return q;
}

} // namespace

const std::vector<mpz_class>& Cyclo::cyclotomic_polynomial(long n) {
    static std::map<long, ZPoly> cache;
    static std::mutex mu;
    std::lock_guard<std::mutex> lock(mu);
    if (n < 1 || n > 4096) throw math_error("cyclotomic: conductor range");
    // fill the cache bottom-up over divisors
    for (long d = 1; d <= n; ++d) {
        if (n % d != 0 || cache.count(d)) continue;
        ZPoly numd(d + 1);
        numd[0] = -1;
        numd[d] = 1;
        for (long e = 1; e < d; ++e)
            if (d % e == 0) numd = zpoly_div(numd, cache.at(e));
        cache[d] = std::move(numd);
    }
    return cache.at(n);
}

Cyclo Cyclo::zero(long n) {
    if (n < 1) throw math_error("cyclotomic: conductor must be positive");
    return Cyclo(n, std::vector<mpq_class>(euler_phi(n)));
}

Cyclo Cyclo::one(long n) { return from_rational(n, 1); }

Cyclo Cyclo::from_rational(long n, const mpq_class& r) {
    Cyclo c = zero(n);
    c.c_[0] = r;
    return c;
}

Cyclo Cyclo::zeta(long n, long e) {
    e %= n;
    if (e < 0) e += n;
    Cyclo c = zero(n);
    long phi = euler_phi(n);
    if (e < phi) {
        c.c_[e] = 1;
        return c;
    }
    const ZPoly& phi_n = cyclotomic_polynomial(n);
    std::vector<mpq_class> poly(e + 1);
    poly[e] = 1;
    for (long d = e; d >= phi; --d) {
        mpq_class lead = poly[d];
        if (lead == 0) continue;
        poly[d] = 0;
        for (long i = 0; i < phi; ++i)
            poly[d - phi + i] -= lead * mpq_class(phi_n[i]);
    }
    for (long i = 0; i < phi; ++i) c.c_[i] = poly[i];
    c.reduce();
    return c;
}

void Cyclo::reduce() {
    for (auto& x : c_) x.canonicalize();
}

bool Cyclo::is_zero() const {
    for (const auto& x : c_)
        if (x != 0) return false;
    return true;
}

bool Cyclo::is_one() const {
    if (c_.empty() || c_[0] != 1) return false;
    for (size_t i = 1; i < c_.size(); ++i)
        if (c_[i] != 0) return false;
    return true;
}

bool Cyclo::is_rational(mpq_class* value) const {
    for (size_t i = 1; i < c_.size(); ++i)
        if (c_[i] != 0) return false;
    if (value) *value = c_.empty() ? mpq_class(0) : c_[0];
    return true;
}

bool Cyclo::operator==(const Cyclo& o) const {
    if (n_ != o.n_) {
        long m = std::lcm(n_, o.n_);
        return to_conductor(m) == o.to_conductor(m);
    }
    return c_ == o.c_;
}

int Cyclo::compare(const Cyclo& a, const Cyclo& b) {
    if (a.n_ != b.n_) return a.n_ < b.n_ ? -1 : 1;
    for (size_t i = 0; i < a.c_.size(); ++i) {
        int c = cmp(a.c_[i], b.c_[i]);
        if (c != 0) return c;
    }
    return 0;
}

Cyclo Cyclo::operator-() const {
    Cyclo r = *this;
    for (auto& x : r.c_) x = -x;
    return r;
}

Cyclo Cyclo::operator+(const Cyclo& o) const {
    if (n_ != o.n_) {
        long m = std::lcm(n_, o.n_);
        return to_conductor(m) + o.to_conductor(m);
    }
    Cyclo r = *this;
    for (size_t i = 0; i < c_.size(); ++i) r.c_[i] += o.c_[i];
    r.reduce();
    return r;
}

Cyclo Cyclo::operator-(const Cyclo& o) const { return *this + (-o); }

Cyclo Cyclo::operator*(const Cyclo& o) const {
    if (n_ != o.n_) {
        long m = std::lcm(n_, o.n_);
        return to_conductor(m) * o.to_conductor(m);
    }
    long phi = static_cast<long>(c_.size());
    std::vector<mpq_class> prod(2 * phi - 1);
    for (long i = 0; i < phi; ++i) {
        if (c_[i] == 0) continue;
        for (long j = 0; j < phi; ++j) {
            if (o.c_[j] == 0) continue;
            prod[i + j] += c_[i] * o.c_[j];
        }
    }
    const ZPoly& phi_n = cyclotomic_polynomial(n_);
    for (long d = 2 * phi - 2; d >= phi; --d) {
        mpq_class lead = prod[d];
        if (lead == 0) continue;
        prod[d] = 0;
        for (long i = 0; i < phi; ++i)
            prod[d - phi + i] -= lead * mpq_class(phi_n[i]);
    }
    Cyclo r = zero(n_);
    for (long i = 0; i < phi; ++i) r.c_[i] = prod[i];
    r.reduce();
    return r;
}

Cyclo Cyclo::inv() const {
    if (is_zero()) throw math_error("cyclotomic: division by zero");
    using QPoly = std::vector<mpq_class>;
    long phi = static_cast<long>(c_.size());
    QPoly r0(phi + 1), r1 = c_;
    const ZPoly& phi_n = cyclotomic_polynomial(n_);
    for (long i = 0; i <= phi; ++i) r0[i] = mpq_class(phi_n[i]);
    auto trim = [](QPoly& p) {
        while (!p.empty() && p.back() == 0) p.pop_back();
    };
    trim(r1);
    QPoly s0 = {}, s1 = {1};
    while (!r1.empty()) {
        QPoly q(r0.size() >= r1.size() ? r0.size() - r1.size() + 1 : 0),
            rem = r0;
        while (rem.size() >= r1.size() && !rem.empty()) {
            mpq_class c = rem.back() / r1.back();
            size_t off = rem.size() - r1.size();
            q[off] = c;
            for (size_t i = 0; i < r1.size(); ++i) rem[off + i] -= c * r1[i];
            trim(rem);
        }
        QPoly s2 = s0;
        if (!q.empty() && !s1.empty()) {
            QPoly qs(q.size() + s1.size() - 1);
            for (size_t i = 0; i < q.size(); ++i)
                for (size_t j = 0; j < s1.size(); ++j)
                    qs[i + j] += q[i] * s1[j];
            if (s2.size() < qs.size()) s2.resize(qs.size());
            for (size_t i = 0; i < qs.size(); ++i) s2[i] -= qs[i];
        }
        trim(s2);
        r0 = r1;
        r1 = rem;
        s0 = s1;
        s1 = s2;
    }
    if (r0.size() != 1)
        throw math_error("cyclotomic: inverse failed (gcd not constant)");
    mpq_class lead = r0[0];
    Cyclo out = zero(n_);
    for (size_t i = 0; i < s0.size() && i < out.c_.size(); ++i)
        out.c_[i] = s0[i] / lead;
    out.reduce();
    return out;
}

Cyclo Cyclo::operator/(const Cyclo& o) const {
    if (n_ != o.n_) {
        long m = std::lcm(n_, o.n_);
        return to_conductor(m) / o.to_conductor(m);
    }
    return *this * o.inv();
}

Cyclo Cyclo::pow(long k) const {
    if (k == 0) return one(n_);
    Cyclo base = k < 0 ? inv() : *this;
    long e = std::abs(k);
    Cyclo r = one(n_);
    while (e > 0) {
        if (e & 1) r = r * base;
        base = base * base;
        e >>= 1;
    }
    return r;
}

Cyclo Cyclo::galois(long s) const {
    s %= n_;
    if (s < 0) s += n_;
    if (std::gcd(s, n_) != 1)
        throw math_error("cyclotomic: galois exponent not coprime");
    Cyclo out = zero(n_);
    for (size_t i = 0; i < c_.size(); ++i) {
        if (c_[i] == 0) continue;
        Cyclo t = zeta(n_, (static_cast<long>(i) * s) % n_);
        for (size_t j = 0; j < out.c_.size(); ++j)
            out.c_[j] += c_[i] * t.c_[j];
    }
    out.reduce();
    return out;
}

Cyclo Cyclo::to_conductor(long m) const {
    if (m == n_) return *this;
    if (m % n_ != 0)
        throw math_error("cyclotomic: target conductor not a multiple");
    long step = m / n_;
    Cyclo out = zero(m);
    for (size_t i = 0; i < c_.size(); ++i) {
        if (c_[i] == 0) continue;
        Cyclo t = zeta(m, static_cast<long>(i) * step);
        for (size_t j = 0; j < out.c_.size(); ++j)
            out.c_[j] += c_[i] * t.c_[j];
    }
    out.reduce();
    return out;
}

std::complex<double> Cyclo::embed(long k) const {
    std::complex<double> z = std::polar(1.0, 2.0 * std::numbers::pi * k / n_);
    std::complex<double> acc = 0.0;
    for (size_t i = c_.size(); i-- > 0;) acc = acc * z + c_[i].get_d();
    return acc;
}

bool Cyclo::root_of_unity_exponent(long* t) const {
    for (long e = 0; e < n_; ++e) {
        if (*this == zeta(n_, e)) {
            if (t) *t = e;
            return true;
        }
    }
    return false;
}

std::string Cyclo::str() const {
    std::ostringstream os;
    bool first = true;
    for (size_t i = 0; i < c_.size(); ++i) {
        if (c_[i] == 0) continue;
        if (!first) os << " + ";
        os << c_[i].get_str();
        if (i >= 1) os << "*z" << n_ << "^" << i;
        first = false;
    }
    if (first) os << "0";
    return os.str();
}

} // namespace tatereg
