#pragma once

// Group-theoretic side of the motivic McKay correspondence: sums of
// L^(-w) over conjugacy classes, arc classification for A^2 / Z_d, and the
// report combining them with the realizations.

#include <algorithm>
#include <bit>
#include <cstdint>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "mckay/cyclotomic.hpp"
#include "mckay/error.hpp"
#include "mckay/group.hpp"
#include "mckay/motivic.hpp"
#include "mckay/rational.hpp"

namespace mckay {

/// L^(-w(gamma)).
inline MotivicExpr per_class_measure(const Group& g, const CycMatrix& gamma) {
    const std::size_t i = g.require_index(gamma);
    return MotivicExpr::lpow(-weight(g, i));
}

/// sum over classes of L^(shift - w). Terms are left unmerged, one per class.
inline MotivicExpr class_sum(const Group& g, const std::vector<ConjClass>& classes, const Rational& shift) {
    std::vector<MotivicTerm> terms;
    terms.reserve(classes.size());
    for (const auto& c : classes) terms.push_back({Rational(1), shift - c.weight, {}});
    const std::int64_t grain = g.mode() == GroupMode::GL ? static_cast<std::int64_t>(g.order()) : 1;
    return MotivicExpr(std::move(terms), grain);
}

/// sum_[gamma] L^(-w(gamma)); the Gorenstein (SL) or orbifold (GL) measure
/// of the arcs at the origin.
inline MotivicExpr orbifold_sum(const Group& g) { return class_sum(g, conjugacy_classes(g), 0); }

/// sum_[gamma] L^(n - w(gamma)).
inline MotivicExpr fiber_sum(const Group& g) {
    return class_sum(g, conjugacy_classes(g), Rational(static_cast<long>(g.dimension())));
}

// ---------------------------------------------------------------------------
// Arc classification on X = A^2 / Z_d, Z_d acting by (xi, xi^(d-1)), with
// invariants u = x^d, v = y^d, w = xy satisfying uv = w^d.

/// Truncated power series: coefficient of t^k at index k.
using Jet = std::vector<Rational>;

/// e in [1, d], or nullopt when the truncation does not determine the class.
using ArcClass = std::optional<std::int64_t>;

namespace detail {

inline Rational reduce_mod(const Rational& x, const std::optional<std::int64_t>& p) {
    if (!p) return x;
    const Integer mod(*p);
    Integer den_inv;
    if (mpz_invert(den_inv.get_mpz_t(), x.get_den().get_mpz_t(), mod.get_mpz_t()) == 0) {
        throw input_error("jet coefficient " + x.get_str() + " has a denominator divisible by " + mod.get_str());
    }
    Integer r = (x.get_num() * den_inv) % mod;
    if (r < 0) r += mod;
    return Rational(r);
}

inline Rational coeff(const Jet& j, std::size_t k) { return k < j.size() ? j[k] : Rational(0); }

// Coefficients 0..level of a*b.
inline Jet truncated_product(const Jet& a, const Jet& b, std::size_t level) {
    Jet out(level + 1, Rational(0));
    for (std::size_t i = 0; i < a.size() && i <= level; ++i) {
        if (a[i] == 0) continue;
        for (std::size_t j = 0; j < b.size() && i + j <= level; ++j) out[i + j] += a[i] * b[j];
    }
    return out;
}

inline Jet truncated_power(const Jet& a, std::int64_t e, std::size_t level) {
    Jet out(level + 1, Rational(0));
    out[0] = 1;
    for (std::int64_t i = 0; i < e; ++i) out = truncated_product(out, a, level);
    return out;
}

}  // namespace detail

/// Reads the conjugacy class of the arc with invariants (u, v, w) from
/// ord_t(u) mod d. Coefficients are taken modulo `modulus` when given.
inline ArcClass classify_arc_cyclic(std::int64_t d, const Jet& u, const Jet& v, const Jet& w, std::size_t level,
                                    std::optional<std::int64_t> modulus = std::nullopt) {
    if (d < 2) throw input_error("classify_arc_cyclic: d must be >= 2");
    auto reduce = [&](const Jet& j) {
        Jet out(level + 1, Rational(0));
        for (std::size_t k = 0; k <= level; ++k) out[k] = detail::reduce_mod(detail::coeff(j, k), modulus);
        return out;
    };
    const Jet ru = reduce(u), rv = reduce(v), rw = reduce(w);
    if (ru[0] != 0 || rv[0] != 0 || rw[0] != 0) {
        throw input_error("classify_arc_cyclic: jet does not pass through the origin");
    }
    const Jet lhs = detail::truncated_product(ru, rv, level);
    const Jet rhs = detail::truncated_power(rw, d, level);
    for (std::size_t k = 0; k <= level; ++k) {
        if (detail::reduce_mod(lhs[k] - rhs[k], modulus) != 0) {
            throw input_error("classify_arc_cyclic: jet violates uv = w^d at order t^" + std::to_string(k));
        }
    }
    for (std::size_t k = 1; k <= level; ++k) {
        if (ru[k] != 0) {
            const auto r = static_cast<std::int64_t>(k) % d;
            return r == 0 ? d : r;
        }
    }
    return std::nullopt;
}

/// Order in t of the dx_1 ^ ... ^ dx_n component of the pullback of
/// dx_1 ^ ... ^ dx_n under x_i -> t^(a_i) x_i, computed by expanding the
/// wedge product term by term.
inline Rational volume_form_pullback_order(const std::vector<Rational>& powers) {
    struct Form {
        Rational coeff;
        Rational t_power;
        std::uint64_t mask;  // bit 0: dt, bit i: dx_i
    };
    const std::size_t n = powers.size();
    if (n >= 63) throw input_error("volume_form_pullback_order: too many coordinates");
    std::vector<Form> acc{{Rational(1), Rational(0), 0}};
    for (std::size_t i = 0; i < n; ++i) {
        // d(t^a x_i) = t^a dx_i + a t^(a-1) x_i dt
        const std::vector<Form> piece{{Rational(1), powers[i], std::uint64_t{1} << (i + 1)},
                                      {powers[i], powers[i] - 1, std::uint64_t{1}}};
        std::vector<Form> next;
        for (const auto& f : acc) {
            for (const auto& p : piece) {
                if (p.coeff == 0 || (f.mask & p.mask)) continue;
                // sign of moving the new 1-form past the higher-indexed ones in f
                const int swaps = std::popcount(f.mask & ~((p.mask << 1) - 1));
                next.push_back({(swaps % 2 ? -1 : 1) * f.coeff * p.coeff, f.t_power + p.t_power, f.mask | p.mask});
            }
        }
        acc = std::move(next);
    }
    const std::uint64_t volume = ((std::uint64_t{1} << (n + 1)) - 1) & ~std::uint64_t{1};
    std::optional<Rational> order;
    Rational total = 0;
    for (const auto& f : acc) {
        if (f.mask != volume) continue;
        total += f.coeff;
        order = order ? std::min(*order, f.t_power) : f.t_power;
    }
    if (!order || total == 0) throw internal_error("volume_form_pullback_order: volume component vanished");
    return *order;
}

// ---------------------------------------------------------------------------

struct McKayRow {
    std::string representative;
    std::size_t size = 0;
    std::vector<std::int64_t> exponents;
    Rational weight;
};

struct McKayReport {
    std::size_t order = 0;
    std::size_t dimension = 0;
    GroupMode mode = GroupMode::SL;
    std::vector<McKayRow> rows;
    MotivicExpr measure_sum;  ///< one raw term per class
    MotivicExpr fiber_sum;
    Rational euler;
    std::string hodge;
};

inline McKayReport analyze_group(const Group& g) {
    const auto classes = conjugacy_classes(g);
    McKayReport r;
    r.order = g.order();
    r.dimension = g.dimension();
    r.mode = g.mode();
    for (const auto& c : classes) r.rows.push_back({c.matrix.to_string(), c.size, c.exponents, c.weight});
    r.measure_sum = class_sum(g, classes, 0);
    r.fiber_sum = class_sum(g, classes, Rational(static_cast<long>(g.dimension())));
    r.euler = euler_realize(r.fiber_sum);
    r.hodge = hodge_realize(r.fiber_sum).to_string();
    return r;
}

inline std::string to_text(const McKayReport& r) {
    std::ostringstream os;
    os << "group: order " << r.order << ", dimension " << r.dimension << ", mode " << to_string(r.mode) << ", "
       << r.rows.size() << " conjugacy classes\n";
    std::size_t rep_width = 14;
    for (const auto& row : r.rows) rep_width = std::max(rep_width, row.representative.size());
    auto pad = [](std::string s, std::size_t w) {
        s.resize(std::max(s.size(), w), ' ');
        return s;
    };
    os << pad("class", 6) << pad("size", 6) << pad("weight", 8) << pad("exponents", 14) << "representative\n";
    for (std::size_t i = 0; i < r.rows.size(); ++i) {
        const auto& row = r.rows[i];
        std::string exps;
        for (auto e : row.exponents) exps += (exps.empty() ? "" : ",") + std::to_string(e);
        os << pad(std::to_string(i), 6) << pad(std::to_string(row.size), 6) << pad(row.weight.get_str(), 8)
           << pad("{" + exps + "}", 14) << row.representative << "\n";
    }
    os << "orbifold sum: " << r.measure_sum.to_string() << "\n";
    os << "fiber sum:    " << r.fiber_sum.to_string() << "\n";
    return os.str();
}

inline nlohmann::json to_json(const McKayReport& r) {
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& row : r.rows) {
        rows.push_back({{"representative", row.representative},
                        {"size", row.size},
                        {"exponents", row.exponents},
                        {"weight", row.weight.get_str()}});
    }
    return {{"group", {{"order", r.order}, {"dimension", r.dimension}, {"mode", to_string(r.mode)}, {"classes", r.rows.size()}}},
            {"rows", rows},
            {"measure_sum", to_json(r.measure_sum)},
            {"measure_sum_text", r.measure_sum.to_string()},
            {"fiber_sum", to_json(r.fiber_sum)},
            {"fiber_sum_text", r.fiber_sum.to_string()},
            {"euler", r.euler.get_str()},
            {"hodge", r.hodge}};
}

}  // namespace mckay
