#include "tatereg/k2.hpp"

#include <algorithm>
#include <cstdlib>
#include <sstream>

namespace tatereg {

namespace {

PadicTame engine(const Field& F) { return PadicTame(PAdicOps{&F}); }

void add_zero(PadicRational& r, const PAdic& z, long d) {
    if (d == 0) return;
    for (auto& [zz, dd] : r.zeros) {
        if (zz.eq_to_prec(z)) {
            dd += d;
            return;
        }
    }
    r.zeros.push_back({z, d});
}

void prune_zeros(PadicRational& r) {
    std::erase_if(r.zeros,
                  [](const std::pair<PAdic, long>& z) { return z.second == 0; });
}

} // namespace

PadicRational make_rational(const Field& F, const PAdic& constant, long t_power,
                            const std::vector<std::pair<PAdic, long>>& zeros) {
    (void)F;
    PadicRational r;
    r.constant = constant;
    r.t_power = t_power;
    for (const auto& [z, d] : zeros) add_zero(r, z, d);
    prune_zeros(r);
    return r;
}

// ------------------------------------------------------------------------
// curve-mode tame symbols and membership
// ------------------------------------------------------------------------

PAdic tame_symbol(const MilnorSymbol& sym, const PAdic& alpha) {
    if (!sym.E) throw math_error("tame_symbol: empty symbol");
    const Field& F = sym.E->field();
    PAdic total = F.one();
    for (const auto& t : sym.terms) {
        long m = t.f.order_at_class(alpha);
        long n = t.g.order_at_class(alpha);
        PAdic v;
        if (m == 0 && n == 0) {
            v = F.one();
        } else {
            PAdic Lf = t.f.leading_value_at_class(alpha);
            PAdic Lg = t.g.leading_value_at_class(alpha);
            v = Lf.pow(n) * Lg.pow(-m);
            if ((m % 2 != 0) && (n % 2 != 0)) v = -v;
        }
        total = total * v.pow(t.mult);
    }
    return total;
}

PAdic tame_symbol_rational(const Field& F, const PadicRational& f,
                           const PadicRational& g, const PAdic& z0) {
    return engine(F).tame_at(f, g, z0);
}

PAdic tame_symbol_rational_at_zero(const Field& F, const PadicRational& f,
                                   const PadicRational& g) {
    return engine(F).tame_at_zero(f, g);
}

MembershipReport check_membership(const MilnorSymbol& sym) {
    MembershipReport rep;
    rep.min_margin = kInfPrec;
    if (!sym.E) return rep;
    const TateCurve& E = *sym.E;
    const Field& F = E.field();
    std::vector<PAdic> classes;
    auto visit = [&](const PAdic& shift) {
        PAdic rep_pt = E.normalize_to_fundamental(shift.inv()).first;
        for (const auto& c : classes)
            if (c.eq_to_prec(rep_pt)) return;
        classes.push_back(rep_pt);
    };
    for (const auto& t : sym.terms) {
        for (const auto& fac : t.f.factors()) visit(fac.shift);
        for (const auto& fac : t.g.factors()) visit(fac.shift);
    }
    for (const auto& c : classes) {
        PAdic v = tame_symbol(sym, c);
        PAdic d = v - F.one();
        if (d.is_zero_to_precision()) {
            rep.min_margin = std::min(
                rep.min_margin, d.is_exact_zero() ? kInfPrec : d.abs_prec());
        } else {
            rep.ok = false;
            std::ostringstream os;
            os << "tame symbol at class " << c.str() << " equals " << v.str();
            rep.failures.push_back(os.str());
        }
    }
    return rep;
}

// ------------------------------------------------------------------------
// reduction and the region sum
// ------------------------------------------------------------------------

PadicRational reduce_theta_product(const ThetaProduct& f, long nu) {
    const TateCurve& E = f.curve();
    const Field& F = E.field();
    long T = power_reduction_threshold(F, nu);
    PadicRational r;
    r.constant = f.constant_part();
    r.t_power = f.u_power();
    for (const auto& fac : f.factors()) {
        const PAdic& beta = fac.shift; // 0 <= ord(beta) < ord(q)
        long m = fac.exponent;
        long vb = beta.ord();
        // front factor (1 - beta u) = (-beta)(u - beta^{-1})
        if (vb <= T) {
            r.constant = r.constant * (-beta).pow(m);
            add_zero(r, beta.inv(), m);
        }
        PAdic qk = F.one();
        for (long k = 1;; ++k) {
            qk = qk * E.q();
            long o_up = k * E.n_period() + vb; // ord(q^k beta)
            long o_dn = k * E.n_period() - vb; // ord(q^k beta^{-1})
            if (o_up > T && o_dn > T) break;
            if (o_up <= T) {
                PAdic a = qk * beta; // (1 - a u) = (-a)(u - a^{-1})
                r.constant = r.constant * (-a).pow(m);
                add_zero(r, a.inv(), m);
            }
            if (o_dn <= T) {
                PAdic b = qk * beta.inv(); // (1 - b u^{-1}) = (u - b)/u
                r.t_power -= m;
                add_zero(r, b, m);
            }
        }
    }
    prune_zeros(r);
    return r;
}

PAdic tau_hat_rational(const TateCurve& E, const PadicRational& f,
                       const PadicRational& g) {
    const Field& F = E.field();
    PadicTame eng = engine(F);
    PAdic total = eng.tame_at_zero(f, g);
    std::vector<PAdic> seen;
    auto visit = [&](const PAdic& z) {
        if (!z.is_certainly_nonzero() || z.ord() <= 0) return;
        for (const auto& s : seen)
            if (s.eq_to_prec(z)) return;
        seen.push_back(z);
        total = total * eng.tame_at(f, g, z);
    };
    for (const auto& [z, d] : f.zeros) visit(z);
    for (const auto& [z, d] : g.zeros) visit(z);
    return total;
}

PAdic tau_infty(const MilnorSymbol& sym, long nu) {
    if (!sym.E) throw math_error("tau_infty: empty symbol");
    const TateCurve& E = *sym.E;
    const Field& F = E.field();
    bool all_periodic = true;
    for (const auto& t : sym.terms)
        if (!t.f.q_periodic() || !t.g.q_periodic()) all_periodic = false;
    if (all_periodic) {
        MembershipReport rep = check_membership(sym);
        if (!rep.ok) {
            std::ostringstream os;
            os << "tau_infty: symbol is not in H^0(E, K_2):";
            for (const auto& s : rep.failures) os << " [" << s << "]";
            throw math_error(os.str());
        }
    }
    PAdic total = F.one();
    for (const auto& t : sym.terms) {
        PadicRational rf = reduce_theta_product(t.f, nu);
        PadicRational rg = reduce_theta_product(t.g, nu);
        total = total * tau_hat_rational(E, rf, rg).pow(t.mult);
    }
    return total;
}

long boundary_integer(const MilnorSymbol& sym, long nu) {
    long o1 = tau_infty(sym, nu).ord();
    long o2 = tau_infty(sym, nu + 1).ord();
    if (o1 != o2)
        throw math_error("boundary integer is not stable across nu: " +
                         std::to_string(o1) + " vs " + std::to_string(o2));
    return o1;
}

// ------------------------------------------------------------------------
// p^nu-th power certificate
// ------------------------------------------------------------------------

PowerCertificate pnu_power_certificate(const PAdic& w, long nu) {
    const Field& F = w.field();
    PowerCertificate c;
    c.required = pnu_power_depth(F, nu);
    if (!w.is_certainly_nonzero())
        throw precision_error("pnu certificate: value not certified nonzero");
    c.ord = w.ord();
    long pnu = 1;
    for (long i = 0; i < nu; ++i) pnu *= F.p();
    if (c.ord % pnu != 0) {
        c.ok = false;
        c.detail = "ord " + std::to_string(c.ord) + " not divisible by p^nu";
        return c;
    }
    // the Teichmueller part is always a p^nu-th power (p coprime to q-1)
    PAdic u = w.shift(-c.ord);
    PAdic u1 = u / u.teichmuller();
    PAdic d = u1 - F.one();
    if (d.is_exact_zero()) {
        c.depth = kInfPrec;
        c.ok = true;
        return c;
    }
    if (d.is_zero_to_precision()) {
        c.depth = d.abs_prec();
        if (c.depth < c.required)
            throw precision_error(
                "pnu certificate: precision below the required depth");
        c.ok = true;
        return c;
    }
    c.depth = d.ord();
    c.ok = c.depth >= c.required;
    if (!c.ok)
        c.detail = "1-unit depth " + std::to_string(c.depth) +
                   " below required " + std::to_string(c.required);
    return c;
}

// ------------------------------------------------------------------------
// named symbols
// ------------------------------------------------------------------------

MilnorSymbol build_xi_symbol(const TateCurve* E, const PAdic& pi0, long a,
                             long b, long r) {
    const Field& F = E->field();
    if (!(0 < a && a < b && b < r))
        throw math_error("xi symbol: need 0 < a < b < r");
    if (!(pi0.pow(r) - E->q()).is_zero_to_precision())
        throw math_error("xi symbol: pi0^r != q");
    auto slot = [&](long s) {
        ThetaProduct h(E);
        if (s % 2 != 0) h.mul_constant(-F.one());
        h.mul_upower(s);
        h.mul_theta(pi0.pow(s), r);
        h.mul_theta(F.one(), -r);
        return h;
    };
    ThetaProduct f = slot(a), g = slot(b);
    PAdic fv = f.eval(pi0.pow(-b));
    PAdic gv = g.eval(pi0.pow(-a));
    f.mul_constant(fv.inv());
    g.mul_constant(gv.inv());
    MilnorSymbol sym;
    sym.E = E;
    sym.terms.push_back({f, g, 1});
    return sym;
}

PairCheck check_xi_symbol(const TateCurve& E, const PAdic& pi0, long a, long b,
                          long r, long nu) {
    MilnorSymbol sym = build_xi_symbol(&E, pi0, a, b, r);
    PairCheck out;
    out.lhs = tau_infty(sym, nu);
    out.ord_lhs = out.lhs.ord();
    PAdic th = E.theta_eval(pi0.pow(b)).pow(b) /
               (E.theta_eval(pi0.pow(b - a)).pow(b - a) *
                E.theta_eval(pi0.pow(a)).pow(a));
    PAdic sv = E.s_value(pi0.pow(b), nu) /
               (E.s_value(pi0.pow(b - a), nu) * E.s_value(pi0.pow(a), nu));
    out.rhs = pi0.pow(a * (b - a) * (b - r)) * th.pow(r) * sv.pow(r * r);
    if ((a * (r - b)) % 2 != 0) out.rhs = -out.rhs;
    out.cert = pnu_power_certificate(out.lhs / out.rhs, nu);
    out.match = out.cert.ok;
    return out;
}

PairCheck check_unit_pair_symbol(const TateCurve& E, const PAdic& z1, long m1,
                                 const PAdic& z2, long m2, long nu) {
    const Field& F = E.field();
    if (!(z1.pow(m1) - F.one()).is_zero_to_precision())
        throw math_error("unit pair: z1^m1 != 1");
    if (!(z2.pow(m2) - F.one()).is_zero_to_precision())
        throw math_error("unit pair: z2^m2 != 1");
    if ((z1 - z2).is_zero_to_precision())
        throw math_error("unit pair: z1 = z2 is degenerate");
    if ((z1 - F.one()).is_zero_to_precision() ||
        (z2 - F.one()).is_zero_to_precision())
        throw math_error("unit pair: z = 1 gives the trivial function");
    auto slot = [&](const PAdic& z, long m) {
        ThetaProduct h(&E);
        h.mul_theta(z.inv(), m);
        h.mul_theta(F.one(), -m);
        return h;
    };
    ThetaProduct f = slot(z1, m1), g = slot(z2, m2);
    f.mul_constant(f.eval(z2).inv());
    g.mul_constant(g.eval(z1).inv());
    MilnorSymbol sym;
    sym.E = &E;
    sym.terms.push_back({f, g, 1});
    PairCheck out;
    out.lhs = tau_infty(sym, nu);
    out.ord_lhs = out.lhs.ord();
    out.rhs = (E.s_value(z1.inv() * z2, nu) /
               (E.s_value(z1.inv(), nu) * E.s_value(z2, nu)))
                  .pow(m1 * m2);
    out.cert = pnu_power_certificate(out.lhs / out.rhs, nu);
    out.match = out.cert.ok;
    return out;
}

TripleCheck check_mixed_symbol(const TateCurve& E, const PAdic& q0, long a,
                               long b, const PAdic& zeta, long m, long nu) {
    const Field& F = E.field();
    if (!(1 <= b && b < a)) throw math_error("mixed symbol: need 1 <= b < a");
    if (!(q0.pow(a) - E.q()).is_zero_to_precision())
        throw math_error("mixed symbol: q0^a != q");
    if (!(zeta.pow(m) - F.one()).is_zero_to_precision())
        throw math_error("mixed symbol: zeta^m != 1");
    if ((zeta - F.one()).is_zero_to_precision())
        throw math_error("mixed symbol: zeta = 1 gives the trivial function");
    ThetaProduct f(&E);
    f.mul_theta(q0.pow(-b), a);
    f.mul_theta(F.one(), -(a - 1));
    f.mul_theta(E.q().pow(-b), -1);
    ThetaProduct g(&E);
    g.mul_theta(zeta.inv(), m);
    g.mul_theta(F.one(), -m);
    f.mul_constant(f.eval(zeta).inv());
    g.mul_constant(g.eval(q0.pow(b)).inv());
    MilnorSymbol sym;
    sym.E = &E;
    sym.terms.push_back({f, g, 1});

    TripleCheck out;
    out.lhs = tau_infty(sym, nu);
    out.rhs1 = (E.s_value(q0.pow(-b) * zeta, nu) /
                (E.s_value(zeta, nu) * E.s_value(q0.pow(-b), nu)))
                   .pow(m * a) *
               (E.theta_eval(q0.pow(b)) / E.theta_eval(q0.pow(b) * zeta.inv()))
                   .pow(m * b);
    long T = power_reduction_threshold(F, nu);
    long o0 = q0.ord();
    PAdic prod = ((F.one() - q0.pow(b)) / (F.one() - zeta.inv() * q0.pow(b)))
                     .pow(b);
    PAdic qk = F.one();
    for (long k = 1;; ++k) {
        qk = qk * E.q();
        long up = (b + k * a) * o0; // ord(q0^b q^k)
        long dn = (k * a - b) * o0; // ord(q0^{-b} q^k)
        if (up > T && dn > T) break;
        PAdic t1 = (F.one() - q0.pow(b) * qk) /
                   (F.one() - zeta.inv() * q0.pow(b) * qk);
        PAdic t2 = (F.one() - zeta * q0.pow(-b) * qk) /
                   (F.one() - q0.pow(-b) * qk);
        prod = prod * t1.pow(a * k + b) * t2.pow(a * k - b);
    }
    out.rhs2 = (E.s_value(zeta, nu).pow(-a) * prod).pow(m);
    out.cert_rhs1_rhs2 = pnu_power_certificate(out.rhs1 / out.rhs2, nu);
    out.match_forms = out.cert_rhs1_rhs2.ok;
    out.cert_lhs_rhs1 = pnu_power_certificate(out.lhs / out.rhs1, nu);
    out.match_lhs = out.cert_lhs_rhs1.ok;
    return out;
}

bool weil_reciprocity_check(const Field& F, const PadicRational& f,
                            const PadicRational& g) {
    PAdic total = engine(F).weil_product(f, g);
    return (total - F.one()).is_zero_to_precision();
}

} // namespace tatereg
