#pragma once

// Finite matrix groups over Q(xi_d): closure from generators, conjugacy
// classes, centralizers, eigenvalue exponents and weights.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <deque>
#include <numeric>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "json.hpp"
#include "mckay/cyclotomic.hpp"
#include "mckay/error.hpp"
#include "mckay/rational.hpp"

namespace mckay {

inline constexpr std::size_t kDefaultGroupCap = 10000;

struct GroupSpec {
    std::size_t n = 0;
    std::int64_t root_order = 1;  ///< every entry lives in Q(xi_root_order)
    std::vector<CycMatrix> generators;
};

enum class GroupMode { SL, GL };

inline const char* to_string(GroupMode m) { return m == GroupMode::SL ? "SL" : "GL"; }

class Group {
public:
    /// Takes an element list already closed under products; element 0 must be
    /// the identity.
    Group(std::size_t n, std::int64_t conductor, std::vector<CycMatrix> elements)
        : n_(n), conductor_(conductor), elements_(std::move(elements)) {
        index_.reserve(elements_.size());
        for (std::size_t i = 0; i < elements_.size(); ++i) {
            elements_[i] = elements_[i].embed(conductor_);
            index_.emplace(elements_[i].key(), i);
        }
        if (elements_.empty() || !(elements_[0] == CycMatrix::identity(n_, conductor_))) {
            throw internal_error("Group: element 0 must be the identity");
        }
        mode_ = GroupMode::SL;
        const CycNum one(conductor_, Rational(1));
        for (const auto& g : elements_) {
            if (!(g.determinant() == one)) {
                mode_ = GroupMode::GL;
                break;
            }
        }
    }

    std::size_t dimension() const noexcept { return n_; }
    std::int64_t conductor() const noexcept { return conductor_; }
    std::size_t order() const noexcept { return elements_.size(); }
    GroupMode mode() const noexcept { return mode_; }
    const std::vector<CycMatrix>& elements() const noexcept { return elements_; }
    const CycMatrix& element(std::size_t i) const { return elements_.at(i); }

    std::optional<std::size_t> index_of(const CycMatrix& m) const {
        if (m.rows() != n_ || m.cols() != n_) return std::nullopt;
        const std::int64_t c = m.conductor();
        if (conductor_ % c != 0) {
            // Entries outside Q(xi_conductor) can still be rational multiples
            // after reduction; try restricting each entry.
            CycMatrix r(n_, n_, conductor_);
            for (std::size_t i = 0; i < n_; ++i) {
                for (std::size_t j = 0; j < n_; ++j) {
                    const std::int64_t big = lcm64(conductor_, m(i, j).conductor());
                    auto sub = m(i, j).embed(big).restrict_to(conductor_);
                    if (!sub) return std::nullopt;
                    r(i, j) = *sub;
                }
            }
            return index_of(r);
        }
        auto it = index_.find(m.embed(conductor_).key());
        if (it == index_.end()) return std::nullopt;
        return it->second;
    }

    bool contains(const CycMatrix& m) const { return index_of(m).has_value(); }

    std::size_t require_index(const CycMatrix& m) const {
        auto i = index_of(m);
        if (!i) throw input_error("element " + m.to_string() + " is not in the group");
        return *i;
    }

    std::size_t product(std::size_t a, std::size_t b) const {
        return require_index(elements_[a] * elements_[b]);
    }

    std::size_t inverse(std::size_t a) const {
        // In a finite group the inverse is a power of the element.
        std::size_t prev = 0;
        std::size_t cur = a;
        while (cur != 0) {
            prev = cur;
            cur = product(cur, a);
        }
        return a == 0 ? 0 : prev;
    }

    std::size_t element_order(std::size_t a) const {
        std::size_t k = 1;
        std::size_t cur = a;
        while (cur != 0) {
            cur = product(cur, a);
            ++k;
        }
        return k;
    }

    /// Least common multiple of the element orders.
    std::int64_t exponent() const {
        std::int64_t e = 1;
        for (std::size_t i = 0; i < order(); ++i) e = lcm64(e, static_cast<std::int64_t>(element_order(i)));
        return e;
    }

private:
    std::size_t n_;
    std::int64_t conductor_;
    std::vector<CycMatrix> elements_;
    std::unordered_map<std::string, std::size_t> index_;
    GroupMode mode_ = GroupMode::GL;
};

/// Breadth-first closure of the generators under multiplication.
inline Group generate_group(const GroupSpec& spec, std::size_t cap = kDefaultGroupCap) {
    if (spec.n == 0) throw input_error("GroupSpec: dimension must be positive");
    if (spec.root_order < 1) throw input_error("GroupSpec: root_order must be positive");
    std::vector<CycMatrix> gens;
    for (const auto& g : spec.generators) {
        if (g.rows() != spec.n || g.cols() != spec.n) throw input_error("GroupSpec: generator has wrong shape");
        if (spec.root_order % g.conductor() != 0) {
            throw input_error("GroupSpec: generator entries need conductor " + std::to_string(g.conductor()) +
                              ", which does not divide root_order " + std::to_string(spec.root_order));
        }
        const CycMatrix e = g.embed(spec.root_order);
        if (e.determinant().is_zero()) throw input_error("GroupSpec: generator " + e.to_string() + " is not invertible");
        gens.push_back(e);
    }
    std::vector<CycMatrix> elements{CycMatrix::identity(spec.n, spec.root_order)};
    std::unordered_map<std::string, std::size_t> seen{{elements[0].key(), 0}};
    std::deque<std::size_t> queue{0};
    while (!queue.empty()) {
        const std::size_t cur = queue.front();
        queue.pop_front();
        for (const auto& g : gens) {
            CycMatrix next = (elements[cur] * g).embed(spec.root_order);
            auto key = next.key();
            if (seen.contains(key)) continue;
            if (elements.size() >= cap) {
                throw budget_error("group too large or infinite: closure exceeded cap " + std::to_string(cap), cap);
            }
            seen.emplace(std::move(key), elements.size());
            queue.push_back(elements.size());
            elements.push_back(std::move(next));
        }
    }
    return Group(spec.n, spec.root_order, std::move(elements));
}

struct ConjClass {
    std::size_t representative = 0;   ///< element index in the group
    CycMatrix matrix;
    std::size_t size = 0;
    std::vector<std::size_t> members;
    std::vector<std::int64_t> exponents;  ///< sorted, each in [1, |G|]
    Rational weight;
};

/// Multiplicities of the eigenvalues of element `a`, as exponents e in
/// [1, d] of xi_d^e with xi_d^d = 1 reported as e = d. `d` defaults to |G|
/// and must be a multiple of the element order.
inline std::vector<std::int64_t> eigen_exponents(const Group& g, std::size_t a, std::int64_t d = 0) {
    if (d == 0) d = static_cast<std::int64_t>(g.order());
    const auto k = static_cast<std::int64_t>(g.element_order(a));
    if (d % k != 0) {
        throw input_error("eigen_exponents: d=" + std::to_string(d) + " is not a multiple of the element order " +
                          std::to_string(k));
    }
    // Eigenvalues are k-th roots of unity xi_k^j = xi_d^(j d / k). Kernel
    // dimensions are computed in the smallest field holding both the entries
    // and xi_k; rank does not change under field extension.
    const std::int64_t field = lcm64(g.conductor(), k);
    const CycMatrix m = g.element(a).embed(field);
    const std::size_t n = g.dimension();
    std::vector<std::int64_t> out;
    for (std::int64_t j = 0; j < k; ++j) {
        CycMatrix shifted = m;
        const CycNum lambda = CycNum::root_power(k, j).embed(field);
        for (std::size_t i = 0; i < n; ++i) shifted(i, i) = shifted(i, i) - lambda;
        const std::size_t mult = kernel_dimension(shifted);
        const std::int64_t e = j == 0 ? d : j * (d / k);
        out.insert(out.end(), mult, e);
    }
    if (out.size() != n) {
        throw internal_error("eigen_exponents: multiplicities sum to " + std::to_string(out.size()) +
                             " instead of " + std::to_string(n));
    }
    std::sort(out.begin(), out.end());
    return out;
}

inline Rational weight_from_exponents(const std::vector<std::int64_t>& exps, std::int64_t d) {
    const std::int64_t sum = std::accumulate(exps.begin(), exps.end(), std::int64_t{0});
    return ratio(sum, d);
}

/// w = (sum_i e_i) / d with the exponents of eigen_exponents().
inline Rational weight(const Group& g, std::size_t a, std::int64_t d = 0) {
    if (d == 0) d = static_cast<std::int64_t>(g.order());
    return weight_from_exponents(eigen_exponents(g, a, d), d);
}

inline std::size_t conjugate(const Group& g, std::size_t sigma, std::size_t sigma_inv, std::size_t a) {
    return g.require_index(g.element(sigma) * g.element(a) * g.element(sigma_inv));
}

/// Conjugation orbits, ordered by the smallest element index they contain;
/// the identity class comes first.
inline std::vector<ConjClass> conjugacy_classes(const Group& g) {
    const std::size_t order = g.order();
    std::vector<std::size_t> inverses(order);
    for (std::size_t i = 0; i < order; ++i) inverses[i] = g.require_index(g.element(i).inverse());
    std::vector<bool> assigned(order, false);
    std::vector<ConjClass> classes;
    for (std::size_t a = 0; a < order; ++a) {
        if (assigned[a]) continue;
        ConjClass cls;
        cls.representative = a;
        cls.matrix = g.element(a);
        for (std::size_t s = 0; s < order; ++s) {
            const std::size_t c = conjugate(g, s, inverses[s], a);
            if (!assigned[c]) {
                assigned[c] = true;
                cls.members.push_back(c);
            }
        }
        std::sort(cls.members.begin(), cls.members.end());
        cls.size = cls.members.size();
        cls.exponents = eigen_exponents(g, a);
        cls.weight = weight_from_exponents(cls.exponents, static_cast<std::int64_t>(order));
        classes.push_back(std::move(cls));
    }
    return classes;
}

/// {s in G : s a = a s}, as a group in its own right.
inline Group centralizer(const Group& g, const CycMatrix& a) {
    const std::size_t ai = g.require_index(a);
    const CycMatrix& x = g.element(ai);
    std::vector<CycMatrix> members;
    for (const auto& s : g.elements()) {
        if (s * x == x * s) members.push_back(s);
    }
    return Group(g.dimension(), g.conductor(), std::move(members));
}

// ---------------------------------------------------------------------------
// GroupSpec JSON: {n, root_order, generators:[[[coeffs...]...]...]} where each
// entry is an array of rationals in xi_root_order (degree < root_order).

inline nlohmann::json to_json(const GroupSpec& spec) {
    nlohmann::json gens = nlohmann::json::array();
    for (const auto& g : spec.generators) {
        const CycMatrix e = g.embed(spec.root_order);
        nlohmann::json rows = nlohmann::json::array();
        for (std::size_t i = 0; i < e.rows(); ++i) {
            nlohmann::json row = nlohmann::json::array();
            for (std::size_t j = 0; j < e.cols(); ++j) row.push_back(to_json(e(i, j)).at("coeffs"));
            rows.push_back(row);
        }
        gens.push_back(rows);
    }
    return {{"n", spec.n}, {"root_order", spec.root_order}, {"generators", gens}};
}

inline GroupSpec group_spec_from_json(const nlohmann::json& j) {
    try {
        GroupSpec spec;
        spec.n = j.at("n").get<std::size_t>();
        spec.root_order = j.at("root_order").get<std::int64_t>();
        if (spec.n == 0 || spec.root_order < 1) throw input_error("GroupSpec: n and root_order must be positive");
        for (const auto& jg : j.at("generators")) {
            if (!jg.is_array() || jg.size() != spec.n) throw input_error("GroupSpec: generator must have n rows");
            CycMatrix m(spec.n, spec.n, spec.root_order);
            for (std::size_t r = 0; r < spec.n; ++r) {
                if (!jg[r].is_array() || jg[r].size() != spec.n) throw input_error("GroupSpec: generator row must have n entries");
                for (std::size_t c = 0; c < spec.n; ++c) m(r, c) = cyc_from_coeffs(spec.root_order, jg[r][c]);
            }
            spec.generators.push_back(std::move(m));
        }
        return spec;
    } catch (const nlohmann::json::exception& e) {
        throw input_error(std::string("GroupSpec JSON: ") + e.what());
    }
}

}  // namespace mckay
