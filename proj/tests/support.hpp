#pragma once

// Shared generators and independent oracles for the test binaries.

#include <cstdint>
#include <random>
#include <vector>

#include "mckay/mckay.hpp"

namespace testsupport {

using mckay::Integer;
using mckay::MotivicExpr;
using mckay::MotivicTerm;
using mckay::Rational;

/// Random expression with exponents in (1/grain)Z, grain in {1, 2, 3, 6}.
inline MotivicExpr random_expr(std::mt19937& rng) {
    std::uniform_int_distribution<int> grain_pick(0, 3), nterms(0, 4), exp(-12, 12), coeff(-5, 5), nfac(0, 2),
        nu(1, 4);
    const std::int64_t grains[] = {1, 2, 3, 6};
    const std::int64_t grain = grains[grain_pick(rng)];
    std::vector<MotivicTerm> terms;
    const int n = nterms(rng);
    for (int i = 0; i < n; ++i) {
        MotivicTerm t;
        t.coeff = coeff(rng);
        t.exponent = Rational(exp(rng), grain);
        t.exponent.canonicalize();
        const int k = nfac(rng);
        for (int j = 0; j < k; ++j) t.factors.push_back(nu(rng));
        terms.push_back(t);
    }
    return MotivicExpr(terms, grain);
}

/// Evaluates x at L = base^6 term by term, exactly. Exponents must lie in
/// (1/6)Z.
inline Rational eval_at_sixth_power(const MotivicExpr& x, long base) {
    const Rational L = mckay::rational_pow(Rational(base), 6);
    Rational total = 0;
    for (const auto& t : x.terms()) {
        const Rational six_a = t.exponent * 6;
        Rational v = t.coeff * mckay::rational_pow(Rational(base), mckay::to_int64(six_a));
        for (int nu : t.factors) v *= (L - 1) / (mckay::rational_pow(L, nu) - 1);
        total += v;
    }
    return total;
}

/// L -> 1 limit computed term by term.
inline Rational eval_at_one(const MotivicExpr& x) {
    Rational total = 0;
    for (const auto& t : x.terms()) {
        Rational v = t.coeff;
        for (int nu : t.factors) v /= nu;
        total += v;
    }
    return total;
}

struct LiftedArc {
    std::int64_t e;
    mckay::Jet u, v, w;
};

namespace detail {

inline mckay::Jet series_mul(const mckay::Jet& a, const mckay::Jet& b, std::size_t level) {
    mckay::Jet out(level + 1, Rational(0));
    for (std::size_t i = 0; i < a.size() && i <= level; ++i)
        for (std::size_t j = 0; j < b.size() && i + j <= level; ++j) out[i + j] += a[i] * b[j];
    return out;
}

inline mckay::Jet shift(const mckay::Jet& a, std::size_t k, std::size_t level) {
    mckay::Jet out(level + 1, Rational(0));
    for (std::size_t i = 0; i + k <= level && i < a.size(); ++i) out[i + k] = a[i];
    return out;
}

}  // namespace detail

/// Builds x = t^(e/d + k1) phi1, y = t^((d-e)/d + k2) phi2 with random
/// units phi1, phi2 and pushes it to u = x^d, v = y^d, w = xy, truncated at
/// `level`. The class of the arc is e.
inline LiftedArc random_lifted_arc(std::mt19937& rng, std::int64_t d, std::size_t level) {
    std::uniform_int_distribution<std::int64_t> epick(1, d);
    std::uniform_int_distribution<int> shift_pick(0, 2), coeff(-4, 4), unit(1, 4);
    const std::int64_t e = epick(rng);
    auto unit_series = [&] {
        mckay::Jet phi(level + 1, Rational(0));
        phi[0] = Rational(unit(rng)) * (coeff(rng) < 0 ? -1 : 1);
        for (std::size_t k = 1; k <= level; ++k) phi[k] = coeff(rng);
        return phi;
    };
    const mckay::Jet phi1 = unit_series(), phi2 = unit_series();
    // u = t^(e + d k1) phi1^d, v = t^(d - e + d k2) phi2^d, w = t^(1 + k1 + k2) phi1 phi2
    // (for e = d, v would not vanish at 0, so k2 >= 1 there).
    const auto k1 = static_cast<std::size_t>(shift_pick(rng));
    const auto k2 = static_cast<std::size_t>(shift_pick(rng)) + (e == d ? 1 : 0);
    mckay::Jet p1 = {Rational(1)}, p2 = {Rational(1)};
    for (std::int64_t i = 0; i < d; ++i) {
        p1 = detail::series_mul(p1, phi1, level);
        p2 = detail::series_mul(p2, phi2, level);
    }
    const auto du = static_cast<std::size_t>(e) + static_cast<std::size_t>(d) * k1;
    const auto dv = static_cast<std::size_t>(d - e) + static_cast<std::size_t>(d) * k2;
    LiftedArc arc;
    arc.e = e;
    arc.u = detail::shift(p1, du, level);
    arc.v = detail::shift(p2, dv, level);
    arc.w = detail::shift(detail::series_mul(phi1, phi2, level), 1 + k1 + k2, level);
    return arc;
}

/// ord_t(u) of a lifted arc: the level needed to see its class.
inline std::size_t visible_order(const LiftedArc& arc) {
    for (std::size_t k = 0; k < arc.u.size(); ++k) {
        if (arc.u[k] != 0) return k;
    }
    return arc.u.size();
}

}  // namespace testsupport
