#pragma once

#include <vector>

#include "tatereg/errors.hpp"

namespace tatereg {

// A nonzero rational function in factored linear form:
//   C * t^E * prod_i (t - z_i)^{d_i},  z_i != 0 and pairwise distinct.
// Works over any field type T with an operations adapter Ops providing:
//   T one(); T mul(a,b); T inv(a); T neg(a); T pow(a,k);
//   bool eq(a,b); bool is_zero(a);
template <class T>
struct FactoredRational {
    T constant;
    long t_power = 0;
    std::vector<std::pair<T, long>> zeros;
};

template <class T, class Ops>
class TameEngine {
public:
    using Fn = FactoredRational<T>;
    explicit TameEngine(Ops ops) : ops_(std::move(ops)) {}

    long ord_at(const Fn& f, const T& z0) const {
        for (const auto& [z, d] : f.zeros)
            if (ops_.eq(z, z0)) return d;
        return 0;
    }
    long ord_at_zero(const Fn& f) const { return f.t_power; }
    long ord_at_infinity(const Fn& f) const {
        long deg = f.t_power;
        for (const auto& [z, d] : f.zeros) deg += d;
        return -deg;
    }

    // value of f/(t-z0)^{ord} at z0
    T leading_at(const Fn& f, const T& z0) const {
        T v = ops_.mul(f.constant, ops_.pow(z0, f.t_power));
        for (const auto& [z, d] : f.zeros) {
            if (ops_.eq(z, z0)) continue;
            v = ops_.mul(v, ops_.pow(sub(z0, z), d));
        }
        return v;
    }
    T leading_at_zero(const Fn& f) const {
        T v = f.constant;
        for (const auto& [z, d] : f.zeros)
            v = ops_.mul(v, ops_.pow(ops_.neg(z), d));
        return v;
    }
    T leading_at_infinity(const Fn& f) const { return f.constant; }

    // (-1)^{mn} Lf^n Lg^{-m} with the leading values at the given place
    T tame_at(const Fn& f, const Fn& g, const T& z0) const {
        return tame_value(ord_at(f, z0), ord_at(g, z0), leading_at(f, z0),
                          leading_at(g, z0));
    }
    T tame_at_zero(const Fn& f, const Fn& g) const {
        return tame_value(ord_at_zero(f), ord_at_zero(g), leading_at_zero(f),
                          leading_at_zero(g));
    }
    T tame_at_infinity(const Fn& f, const Fn& g) const {
        return tame_value(ord_at_infinity(f), ord_at_infinity(g),
                          leading_at_infinity(f), leading_at_infinity(g));
    }

    // product of tame symbols over every zero/pole, 0 and infinity
    T weil_product(const Fn& f, const Fn& g) const {
        T total = ops_.mul(tame_at_zero(f, g), tame_at_infinity(f, g));
        std::vector<T> seen;
        auto visit = [&](const T& z) {
            for (const auto& s : seen)
                if (ops_.eq(s, z)) return;
            seen.push_back(z);
            total = ops_.mul(total, tame_at(f, g, z));
        };
        for (const auto& [z, d] : f.zeros) visit(z);
        for (const auto& [z, d] : g.zeros) visit(z);
        return total;
    }

    const Ops& ops() const { return ops_; }

private:
    T sub(const T& a, const T& b) const {
        // a - b expressed through the adapter
        return addlike(a, ops_.neg(b));
    }
    T addlike(const T& a, const T& b) const { return ops_.add(a, b); }

    T tame_value(long m, long n, const T& Lf, const T& Lg) const {
        T v = ops_.mul(ops_.pow(Lf, n), ops_.pow(Lg, -m));
        if ((m % 2 != 0) && (n % 2 != 0)) v = ops_.neg(v);
        return v;
    }

    Ops ops_;
};

} // namespace tatereg
