#include "tatereg/bloch.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <sstream>

namespace tatereg {

// ------------------------------------------------------------------------
// Bloch-Wigner function
// ------------------------------------------------------------------------

namespace {

const std::vector<mpq_class>& bernoulli_numbers() {
    static std::vector<mpq_class> B = [] {
        const int N = 72;
        std::vector<mpq_class> b(N + 1);
        std::vector<std::vector<mpz_class>> C(
            N + 2, std::vector<mpz_class>(N + 2));
        for (int i = 0; i <= N + 1; ++i) {
            C[i][0] = 1;
            for (int j = 1; j <= i; ++j)
                C[i][j] = C[i - 1][j - 1] +
                          (j <= i - 1 ? C[i - 1][j] : mpz_class(0));
        }
        b[0] = 1;
        for (int k = 1; k <= N; ++k) {
            mpq_class s = 0;
            for (int j = 0; j < k; ++j) s += mpq_class(C[k + 1][j]) * b[j];
            b[k] = -s / mpq_class(C[k + 1][k]);
        }
        return b;
    }();
    return B;
}

std::complex<double> li2_log_series(std::complex<double> z) {
    // Li2(z) = sum_k B_k u^{k+1}/(k+1)!, u = -log(1-z); |u| < 2 pi
    const auto& B = bernoulli_numbers();
    std::complex<double> u = -std::log(1.0 - z);
    std::complex<double> term = u; // u^{k+1}/(k+1)! at k = 0
    std::complex<double> acc = 0.0;
    for (size_t k = 0; k + 1 < B.size(); ++k) {
        acc += B[k].get_d() * term;
        term *= u / double(k + 2);
        if (std::abs(term) < 1e-19 * (1.0 + std::abs(acc)) && k > 4) break;
    }
    return acc;
}

} // namespace

double bloch_wigner(std::complex<double> z) {
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag()))
        throw math_error("bloch_wigner: non-finite argument");
    if (z.imag() == 0.0) return 0.0; // vanishes on the real line
    double sign = 1.0;
    if (std::abs(z) > 1.0) {
        z = 1.0 / z;
        sign = -sign;
    }
    if (z.real() > 0.5) {
        z = 1.0 - z;
        sign = -sign;
    }
    if (z == std::complex<double>(0.0, 0.0)) return 0.0;
    std::complex<double> li2 = li2_log_series(z);
    double d = li2.imag() + std::arg(1.0 - z) * std::log(std::abs(z));
    return sign * d;
}

// ------------------------------------------------------------------------
// PreBloch normal form
// ------------------------------------------------------------------------

// configured ceiling: every instance exercised here has conductor <= 84
constexpr long kMaxConductor = 120;

PreBloch::PreBloch(long conductor) : n_(conductor) {
    if (conductor < 1 || conductor > kMaxConductor)
        throw math_error("prebloch: conductor above the configured cap " +
                         std::to_string(kMaxConductor));
}

PreBloch& PreBloch::add(const Cyclo& x0, const mpq_class& coeff) {
    if (coeff == 0) return *this;
    Cyclo x = x0.conductor() == n_ ? x0 : x0.to_conductor(n_);
    if (x.is_zero()) throw math_error("prebloch: [0] is undefined");
    if (x.is_one()) return *this; // [1] = 0
    Cyclo canon = x;
    mpq_class c = coeff;
    long t = 0;
    if (x.root_of_unity_exponent(&t)) {
        if (2 * t == n_) return *this; // [-1] = 0 rationally
        if (2 * t > n_) {
            canon = Cyclo::zeta(n_, n_ - t);
            c = -c;
        }
    } else {
        Cyclo xi = x.inv();
        int cmp = Cyclo::compare(x, xi);
        if (cmp == 0) return *this; // x = x^{-1} means x = -1
        if (cmp > 0) {
            canon = xi;
            c = -c;
        }
    }
    auto it = std::lower_bound(
        t_.begin(), t_.end(), canon,
        [](const std::pair<Cyclo, mpq_class>& a, const Cyclo& b) {
            return Cyclo::compare(a.first, b) < 0;
        });
    if (it != t_.end() && Cyclo::compare(it->first, canon) == 0) {
        it->second += c;
        if (it->second == 0) t_.erase(it);
    } else {
        t_.insert(it, {canon, c});
    }
    return *this;
}

PreBloch PreBloch::combined(const PreBloch& o, const mpq_class& scalar) const {
    long m = std::lcm(n_, o.n_);
    PreBloch r(m);
    for (const auto& [x, c] : t_) r.add(x, c);
    if (scalar != 0)
        for (const auto& [x, c] : o.t_) r.add(x, c * scalar);
    return r;
}

bool PreBloch::operator==(const PreBloch& o) const {
    return combined(o, -1).is_zero();
}

std::vector<std::tuple<Cyclo, Cyclo, mpq_class>> PreBloch::wedge_terms()
    const {
    std::vector<std::tuple<Cyclo, Cyclo, mpq_class>> out;
    for (const auto& [x, c] : t_)
        out.push_back({x, Cyclo::one(n_) - x, c});
    return out;
}

std::string PreBloch::str() const {
    if (t_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [x, c] : t_) {
        if (!first) os << " + ";
        os << c.get_str() << "*[" << x.str() << "]";
        first = false;
    }
    return os.str();
}

// ------------------------------------------------------------------------
// relation elements
// ------------------------------------------------------------------------

PreBloch five_term(const Cyclo& x, const Cyclo& y) {
    long n = std::lcm(x.conductor(), y.conductor());
    Cyclo X = x.to_conductor(n), Y = y.to_conductor(n);
    Cyclo one = Cyclo::one(n);
    if (X == Y) throw math_error("five_term: x = y is degenerate");
    auto guard = [](const Cyclo& v, const char* what) {
        if (v.is_zero() || v.is_one())
            throw math_error(std::string("five_term: degenerate argument ") +
                             what);
        return v;
    };
    guard(X, "x");
    guard(Y, "y");
    Cyclo yx = guard(Y / X, "y/x");
    Cyclo mid = guard((one - X.inv()) / (one - Y.inv()), "(1-1/x)/(1-1/y)");
    Cyclo last = guard((one - X) / (one - Y), "(1-x)/(1-y)");
    PreBloch e(n);
    e.add(X, 1);
    e.add(Y, -1);
    e.add(yx, 1);
    e.add(mid, -1);
    e.add(last, 1);
    return e;
}

PreBloch distribution_relation(const Cyclo& x, long m) {
    if (m < 1) throw math_error("distribution: m must be positive");
    long n = std::lcm(x.conductor(), m);
    Cyclo X = x.to_conductor(n);
    PreBloch e(n);
    Cyclo zm = Cyclo::zeta(n, n / m);
    for (long i = 1; i <= m; ++i) {
        Cyclo arg = zm.pow(i) * X;
        if (arg.is_zero() || arg.is_one())
            throw math_error("distribution: degenerate term");
        e.add(arg, m);
    }
    Cyclo xp = X.pow(m);
    if (xp.is_zero() || xp.is_one())
        throw math_error("distribution: x^m degenerate");
    e.add(xp, -1);
    return e;
}

std::vector<long> embedding_list(long n) {
    std::vector<long> out;
    for (long k = 1; 2 * k < n; ++k)
        if (std::gcd(k, n) == 1) out.push_back(k);
    if (out.empty()) out.push_back(1);
    return out;
}

double borel_value(const PreBloch& e, long embedding) {
    double acc = 0.0;
    for (const auto& [x, c] : e.terms())
        acc += c.get_d() * bloch_wigner(x.embed(embedding));
    return acc;
}

std::vector<double> regulator_vector(const PreBloch& e) {
    std::vector<double> out;
    for (long k : embedding_list(e.conductor()))
        out.push_back(borel_value(e, k));
    return out;
}

// ------------------------------------------------------------------------
// nodal symbols and delta-bar
// ------------------------------------------------------------------------

namespace {

struct CycloOps {
    long n;
    Cyclo one() const { return Cyclo::one(n); }
    Cyclo add(const Cyclo& a, const Cyclo& b) const { return a + b; }
    Cyclo mul(const Cyclo& a, const Cyclo& b) const { return a * b; }
    Cyclo inv(const Cyclo& a) const { return a.inv(); }
    Cyclo neg(const Cyclo& a) const { return -a; }
    Cyclo pow(const Cyclo& a, long k) const { return a.pow(k); }
    bool eq(const Cyclo& a, const Cyclo& b) const { return a == b; }
    bool is_zero(const Cyclo& a) const { return a.is_zero(); }
};

FactoredRational<Cyclo> nodal_to_rational(const NodalFunction& f, long n) {
    // (1 - s^{-1} t)^m = (-s^{-1})^m (t - s)^m
    FactoredRational<Cyclo> r;
    r.constant = f.constant.to_conductor(n);
    r.t_power = 0;
    for (const auto& [s, m] : f.factors) {
        Cyclo sn = s.to_conductor(n);
        if (sn.is_zero()) throw math_error("nodal: zero shift");
        r.constant = r.constant * (-sn.inv()).pow(m);
        bool merged = false;
        for (auto& [z, d] : r.zeros)
            if (z == sn) {
                d += m;
                merged = true;
                break;
            }
        if (!merged) r.zeros.push_back({sn, m});
    }
    std::erase_if(r.zeros,
                  [](const std::pair<Cyclo, long>& z) { return z.second == 0; });
    return r;
}

long symbol_conductor(const NodalSymbol& sym) {
    long n = 1;
    for (const auto& t : sym.terms) {
        n = std::lcm(n, t.f.constant.conductor());
        n = std::lcm(n, t.g.constant.conductor());
        for (const auto& [s, m] : t.f.factors) n = std::lcm(n, s.conductor());
        for (const auto& [s, m] : t.g.factors) n = std::lcm(n, s.conductor());
    }
    return n;
}

} // namespace

NodalSymbol nodal_pair_symbol(const Cyclo& z1, long m1, const Cyclo& z2,
                              long m2) {
    long n = std::lcm(z1.conductor(), z2.conductor());
    Cyclo a = z1.to_conductor(n), b = z2.to_conductor(n);
    Cyclo one = Cyclo::one(n);
    if (a == b) throw math_error("nodal pair: equal roots of unity");
    if (a.is_one() || b.is_one())
        throw math_error("nodal pair: z = 1 is degenerate");
    NodalFunction f, g;
    f.constant = ((one - a.inv() * b) / (one - b)).pow(-m1);
    f.factors = {{a, m1}, {one, -m1}};
    g.constant = ((one - b.inv() * a) / (one - a)).pow(-m2);
    g.factors = {{b, m2}, {one, -m2}};
    NodalSymbol sym;
    sym.terms.push_back({f, g, 1});
    return sym;
}

PreBloch delta_bar(const NodalSymbol& sym) {
    long n = symbol_conductor(sym);
    Cyclo one = Cyclo::one(n);
    // node compatibility: values at 0 and infinity agree per slot
    for (const auto& t : sym.terms) {
        for (const NodalFunction* h : {&t.f, &t.g}) {
            long total = 0;
            Cyclo prod = one;
            for (const auto& [s, m] : h->factors) {
                total += m;
                prod = prod * s.to_conductor(n).pow(m);
            }
            if (total != 0 || !(prod == one))
                throw math_error("delta_bar: slot violates the node "
                                 "compatibility prod s^m = 1");
        }
    }
    // tame triviality away from the node
    TameEngine<Cyclo, CycloOps> eng(CycloOps{n});
    std::vector<Cyclo> points;
    auto visit = [&](const Cyclo& z) {
        for (const auto& p : points)
            if (p == z) return;
        points.push_back(z);
    };
    std::vector<std::pair<FactoredRational<Cyclo>, FactoredRational<Cyclo>>>
        rats;
    for (const auto& t : sym.terms) {
        rats.push_back({nodal_to_rational(t.f, n), nodal_to_rational(t.g, n)});
        for (const auto& [z, d] : rats.back().first.zeros) visit(z);
        for (const auto& [z, d] : rats.back().second.zeros) visit(z);
    }
    for (const auto& z : points) {
        Cyclo total = one;
        for (size_t i = 0; i < rats.size(); ++i)
            total = total *
                    eng.tame_at(rats[i].first, rats[i].second, z)
                        .pow(sym.terms[i].mult);
        if (!(total == one))
            throw math_error("delta_bar: nontrivial tame symbol away from "
                             "the node at " + z.str());
    }
    // the double-sum boundary formula
    PreBloch out(n);
    for (const auto& t : sym.terms) {
        for (const auto& [s, m] : t.f.factors) {
            Cyclo si = s.to_conductor(n).inv();
            for (const auto& [w, k] : t.g.factors) {
                Cyclo wn = w.to_conductor(n);
                mpq_class c = mpq_class(m) * k * t.mult;
                // [s, w] = [s^{-1} w] - [s^{-1}] - [w]
                Cyclo arg = si * wn;
                if (!arg.is_one()) out.add(arg, c);
                if (!si.is_one()) out.add(si, -c);
                if (!wn.is_one()) out.add(wn, -c);
            }
        }
    }
    return out;
}

// ------------------------------------------------------------------------
// contour regulator
// ------------------------------------------------------------------------

ComplexRational embed_nodal(const NodalFunction& f, long embedding) {
    ComplexRational out;
    long n = f.constant.conductor();
    for (const auto& [s, m] : f.factors) n = std::lcm(n, s.conductor());
    out.constant = f.constant.to_conductor(n).embed(embedding);
    for (const auto& [s, m] : f.factors) {
        std::complex<double> z = s.to_conductor(n).embed(embedding);
        out.constant *= std::pow(-1.0 / z, static_cast<double>(m));
        bool merged = false;
        for (auto& [w, d] : out.zeros)
            if (std::abs(w - z) < 1e-12) {
                d += m;
                merged = true;
                break;
            }
        if (!merged) out.zeros.push_back({z, m});
    }
    return out;
}

namespace {

struct RayIntegrand {
    const ComplexRational* f;
    const ComplexRational* g;
    std::complex<double> eia;

    static std::complex<double> dlog(const ComplexRational& h,
                                     std::complex<double> z) {
        std::complex<double> acc = 0.0;
        for (const auto& [w, d] : h.zeros) acc += double(d) / (z - w);
        return acc;
    }
    static std::complex<double> value(const ComplexRational& h,
                                      std::complex<double> z) {
        std::complex<double> acc = h.constant;
        for (const auto& [w, d] : h.zeros)
            acc *= std::pow(z - w, double(d));
        return acc;
    }
    static std::complex<double> moment(const ComplexRational& h) {
        std::complex<double> acc = 0.0;
        for (const auto& [w, d] : h.zeros) acc += double(d) * w;
        return acc;
    }

    double operator()(double t) const {
        if (t >= 1.0) {
            // limit at infinity: dlog(h) gamma' -> conj(e^{ia}) * moment(h)
            double lf = std::log(std::abs(f->constant));
            double lg = std::log(std::abs(g->constant));
            std::complex<double> cia = std::conj(eia);
            return lf * (cia * moment(*g)).imag() -
                   lg * (cia * moment(*f)).imag();
        }
        std::complex<double> z = eia * (t / (1.0 - t));
        std::complex<double> gp = eia / ((1.0 - t) * (1.0 - t));
        double lf = std::log(std::abs(value(*f, z)));
        double lg = std::log(std::abs(value(*g, z)));
        return lf * (dlog(*g, z) * gp).imag() - lg * (dlog(*f, z) * gp).imag();
    }
};

double adaptive_simpson(const RayIntegrand& F, double a, double b, double fa,
                        double fm, double fb, double whole, double tol,
                        int depth) {
    double m = 0.5 * (a + b);
    double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    double flm = F(lm), frm = F(rm);
    double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    double delta = left + right - whole;
    if (depth <= 0) return left + right + delta / 15.0;
    if (std::abs(delta) <= 15.0 * tol)
        return left + right + delta / 15.0;
    return adaptive_simpson(F, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
           adaptive_simpson(F, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

} // namespace

std::vector<double> ray_angles(const ComplexRational& f,
                               const ComplexRational& g) {
    std::vector<double> args;
    for (const auto& [z, d] : f.zeros) args.push_back(std::arg(z));
    for (const auto& [z, d] : g.zeros) args.push_back(std::arg(z));
    std::sort(args.begin(), args.end());
    args.erase(std::unique(args.begin(), args.end(),
                           [](double a, double b) {
                               return std::abs(a - b) < 1e-12;
                           }),
               args.end());
    std::vector<std::pair<double, double>> cands; // (margin, angle)
    size_t k = args.size();
    for (size_t i = 0; i < k; ++i) {
        double a = args[i];
        double b = (i + 1 < k) ? args[i + 1] : args[0] + 2 * std::numbers::pi;
        double mid = 0.5 * (a + b);
        cands.push_back({0.5 * (b - a), mid});
    }
    if (cands.empty()) cands.push_back({std::numbers::pi, 0.5});
    std::sort(cands.begin(), cands.end(),
              [](const auto& a, const auto& b) { return a.first > b.first; });
    std::vector<double> out;
    for (const auto& [m, a] : cands) out.push_back(a);
    return out;
}

ContourResult contour_regulator(const ComplexRational& f,
                                const ComplexRational& g, double angle,
                                double margin, double tol) {
    auto wrap = [](double x) {
        while (x > std::numbers::pi) x -= 2 * std::numbers::pi;
        while (x < -std::numbers::pi) x += 2 * std::numbers::pi;
        return std::abs(x);
    };
    for (const auto& h : {&f, &g})
        for (const auto& [z, d] : h->zeros) {
            if (std::abs(z) < 1e-14)
                throw math_error("contour: zero at the node");
            if (wrap(std::arg(z) - angle) < margin)
                throw math_error("contour: ray passes a zero/pole within "
                                 "the margin");
        }
    // node compatibility keeps the integrand bounded at both ends
    long degf = 0, degg = 0;
    for (const auto& [z, d] : f.zeros) degf += d;
    for (const auto& [z, d] : g.zeros) degg += d;
    if (degf != 0 || degg != 0)
        throw math_error("contour: slots must have degree zero");
    RayIntegrand F{&f, &g, std::polar(1.0, angle)};
    double a = 0.0, b = 1.0;
    double fa = F(a), fb = F(b), fm = F(0.5 * (a + b));
    double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    ContourResult out;
    out.angle = angle;
    out.value = adaptive_simpson(F, a, b, fa, fm, fb, whole, tol, 36);
    out.est_error = tol;
    return out;
}

// ------------------------------------------------------------------------
// Galois identities
// ------------------------------------------------------------------------

namespace {

int legendre(long i, long l) {
    long r = 1, b = i % l, e = (l - 1) / 2;
    while (e > 0) {
        if (e & 1) r = (r * b) % l;
        b = (b * b) % l;
        e >>= 1;
    }
    return r == 1 ? 1 : -1;
}

long primitive_root(long l) {
    std::vector<long> primes;
    long m = l - 1;
    for (long d = 2; d * d <= m; ++d)
        if (m % d == 0) {
            primes.push_back(d);
            while (m % d == 0) m /= d;
        }
    if (m > 1) primes.push_back(m);
    for (long r = 2; r < l; ++r) {
        bool ok = true;
        for (long pr : primes) {
            long e = (l - 1) / pr, b = r, acc = 1;
            while (e > 0) {
                if (e & 1) acc = (acc * b) % l;
                b = (b * b) % l;
                e >>= 1;
            }
            if (acc == 1) {
                ok = false;
                break;
            }
        }
        if (ok) return r;
    }
    throw math_error("no primitive root");
}

} // namespace

GaloisBetaReport galois_beta_check(long l, long m) {
    if (l < 3 || l % 4 != 3)
        throw math_error("galois beta: need a prime l = 3 mod 4");
    for (long d = 2; d * d <= l; ++d)
        if (l % d == 0) throw math_error("galois beta: l must be prime");
    if (std::gcd(l, m) != 1)
        throw math_error("galois beta: l and m must be coprime");
    const long N = l * m;
    // beta_1(k) = sum_i [zeta_l^i zeta_m^k], beta_2 weights by (i/l)
    auto beta = [&](long k, bool weighted, long lscale, long mscale) {
        PreBloch e(N);
        for (long i = 1; i < l; ++i) {
            long expo = ((m * ((i * lscale) % l)) % N +
                         (l * (((k * mscale) % m + m) % m)) % N) %
                        N;
            e.add(Cyclo::zeta(N, expo),
                  weighted ? mpq_class(legendre(i, l)) : mpq_class(1));
        }
        return e;
    };
    std::vector<long> ks;
    for (long k = 1; k < m; ++k)
        if (std::gcd(k, m) == 1) ks.push_back(k);
    if (ks.empty()) ks.push_back(0);

    long r = primitive_root(l);
    long s_square = (r * r) % l; // a nontrivial square when l > 3, else 1
    GaloisBetaReport rep;
    rep.basic_relations = true;
    rep.sigma_b1 = rep.sigma_b2 = rep.tau_b1 = rep.tau_b2 = true;
    rep.tau_acts_by_square = true;
    rep.tau_nonsquare_fails = false;
    double worst = 0.0;
    auto numeric = [&](const PreBloch& diff) {
        for (double v : regulator_vector(diff))
            worst = std::max(worst, std::abs(v));
    };
    for (long k : ks) {
        PreBloch b1 = beta(k, false, 1, 1), b2 = beta(k, true, 1, 1);
        PreBloch b1m = beta(k, false, 1, -1), b2m = beta(k, true, 1, -1);
        // basic relations beta1(-k) = -beta1(k), beta2(-k) = beta2(k)
        if (!(b1m.combined(b1, 1).is_zero())) rep.basic_relations = false;
        if (!(b2m == b2)) rep.basic_relations = false;
        // sigma: zeta_l -> zeta_l^r, zeta_m fixed
        PreBloch sb1 = beta(k, false, r, 1), sb2 = beta(k, true, r, 1);
        if (!(sb1 == b1)) rep.sigma_b1 = false;
        if (!(sb2.combined(b2, 1).is_zero())) rep.sigma_b2 = false;
        numeric(sb1.combined(b1, -1));
        numeric(sb2.combined(b2, 1));
        // tau by a square: zeta_l -> zeta_l^{s}, zeta_m -> zeta_m^{-1}
        PreBloch tb1 = beta(k, false, s_square, -1);
        PreBloch tb2 = beta(k, true, s_square, -1);
        if (!(tb1.combined(b1, 1).is_zero())) rep.tau_b1 = false;
        if (!(tb2 == b2)) rep.tau_b2 = false;
        numeric(tb1.combined(b1, 1));
        numeric(tb2.combined(b2, -1));
        // the non-square candidate must flip the beta_2 identity
        PreBloch ub2 = beta(k, true, r, -1);
        if (!(ub2 == b2)) rep.tau_nonsquare_fails = true;
    }
    rep.exact_all =
        rep.basic_relations && rep.sigma_b1 && rep.sigma_b2 && rep.tau_b1 &&
        rep.tau_b2;
    rep.max_numeric_residual = worst;
    return rep;
}

} // namespace tatereg
