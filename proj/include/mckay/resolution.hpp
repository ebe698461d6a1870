#pragma once

// Resolution side of the correspondence:
//
//   mu^Gor = L^(-dim) * sum_I [E_I° ∩ h^-1(W)] * prod_{i in I} (L-1)/(L^nu_i - 1)
//
// evaluated from declarative resolution data, plus built-in data for the
// ADE surface singularities and the cyclic 2-dimensional chains.

#include <algorithm>
#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "json.hpp"
#include "mckay/catalog.hpp"
#include "mckay/correspondence.hpp"
#include "mckay/error.hpp"
#include "mckay/group.hpp"
#include "mckay/motivic.hpp"

namespace mckay {

struct Component {
    int id = 0;
    int nu = 1;  ///< discrepancy plus one

    friend bool operator==(const Component&, const Component&) = default;
};

using Subset = std::vector<int>;  // sorted component ids; empty = no divisor

struct ResolutionData {
    int dim = 0;
    std::vector<Component> components;
    std::map<Subset, MotivicExpr> strata;  ///< [E_I° ∩ h^-1(W)]; absent = 0

    bool crepant() const {
        return std::all_of(components.begin(), components.end(), [](const Component& c) { return c.nu == 1; });
    }

    int nu_of(int id) const {
        for (const auto& c : components) {
            if (c.id == id) return c.nu;
        }
        throw input_error("resolution: unknown component id " + std::to_string(id));
    }

    void set_stratum(Subset subset, MotivicExpr cls) {
        std::sort(subset.begin(), subset.end());
        strata[std::move(subset)] = std::move(cls);
    }
};

namespace detail {

// Stratum classes must be genuine L-polynomial classes.
inline void check_l_polynomial(const MotivicExpr& cls, const Subset& subset) {
    const MotivicExpr canon = cls.canonical();
    for (const auto& t : canon.terms()) {
        if (!t.factors.empty() || !is_integer(t.exponent) || t.exponent < 0 || !is_integer(t.coeff)) {
            std::string ids;
            for (int i : subset) ids += (ids.empty() ? "" : ",") + std::to_string(i);
            throw input_error("resolution: stratum {" + ids + "} class " + cls.to_string() +
                              " is not an integral polynomial in L");
        }
    }
}

}  // namespace detail

/// Checks the structural invariants; throws input_error on violation.
inline void validate(const ResolutionData& res) {
    if (res.dim < 1) throw input_error("resolution: dim must be positive");
    std::set<int> ids;
    for (const auto& c : res.components) {
        if (c.nu < 1) throw input_error("resolution: nu must be >= 1 for component " + std::to_string(c.id));
        if (!ids.insert(c.id).second) throw input_error("resolution: duplicate component id " + std::to_string(c.id));
    }
    for (const auto& [subset, cls] : res.strata) {
        for (std::size_t k = 0; k < subset.size(); ++k) {
            if (!ids.contains(subset[k])) {
                throw input_error("resolution: stratum references undeclared component " + std::to_string(subset[k]));
            }
            if (k > 0 && subset[k] == subset[k - 1]) throw input_error("resolution: repeated id in stratum subset");
        }
        detail::check_l_polynomial(cls, subset);
    }
}

inline MotivicExpr gorenstein_measure(const ResolutionData& res) {
    validate(res);
    MotivicExpr sum;
    for (const auto& [subset, cls] : res.strata) {
        MotivicExpr term = cls;
        for (int id : subset) term *= MotivicExpr::factor(res.nu_of(id));
        sum += term;
    }
    return MotivicExpr::lpow(Rational(-res.dim)) * sum;
}

struct McKayCheck {
    bool holds = false;
    MotivicExpr lhs;
    MotivicExpr rhs;
};

inline McKayCheck check_mckay_identity(const ResolutionData& res, const Group& g) {
    if (static_cast<std::size_t>(res.dim) != g.dimension()) {
        throw input_error("check_mckay_identity: resolution dimension " + std::to_string(res.dim) +
                          " differs from group dimension " + std::to_string(g.dimension()));
    }
    if (g.mode() != GroupMode::SL) {
        throw input_error("check_mckay_identity: only subgroups of SL_n are supported");
    }
    McKayCheck out;
    out.lhs = simplify(gorenstein_measure(res));
    out.rhs = simplify(orbifold_sum(g));
    out.holds = expr_eq(out.lhs, out.rhs);
    return out;
}

/// sum_I [E_I°] = [h^-1(0)] for a crepant resolution.
inline MotivicExpr crepant_fiber_class(const ResolutionData& res) {
    validate(res);
    if (!res.crepant()) throw input_error("resolution not crepant");
    MotivicExpr sum;
    for (const auto& [subset, cls] : res.strata) sum += cls;
    return sum;
}

/// Resolution data of a tree of P^1's over the origin: vertex i has class
/// L + 1 - deg(i), every edge a point.
inline ResolutionData tree_resolution(int vertices, const std::vector<std::pair<int, int>>& edges) {
    ResolutionData res;
    res.dim = 2;
    std::vector<int> degree(static_cast<std::size_t>(vertices) + 1, 0);
    for (const auto& [a, b] : edges) {
        ++degree[static_cast<std::size_t>(a)];
        ++degree[static_cast<std::size_t>(b)];
    }
    for (int i = 1; i <= vertices; ++i) {
        res.components.push_back({i, 1});
        res.set_stratum({i}, MotivicExpr::polynomial({Rational(1 - degree[static_cast<std::size_t>(i)]), Rational(1)}));
    }
    for (const auto& [a, b] : edges) res.set_stratum({a, b}, MotivicExpr::constant(1));
    return res;
}

inline std::vector<std::pair<int, int>> chain_edges(int from, int to) {
    std::vector<std::pair<int, int>> edges;
    for (int i = from; i < to; ++i) edges.emplace_back(i, i + 1);
    return edges;
}

/// Minimal resolution of A^2 / Z_d with Z_d acting by (xi, xi^(d-1)): a
/// chain of d-1 rational curves.
inline ResolutionData toric_cyclic_2d(int d) {
    if (d < 2) throw input_error("toric_cyclic_2d: d must be >= 2");
    return tree_resolution(d - 1, chain_edges(1, d - 1));
}

struct CatalogEntry {
    std::string group_id;
    GroupSpec group;
    ResolutionData resolution;
};

/// A:d (d >= 2), D:m (m >= 4), E6, E7, E8, and the crepant resolution of
/// A^3 / Z_3 acting by (1,1,1) under id "cyclic:3:1,1,1".
inline CatalogEntry ade_catalog(std::string_view name) {
    const auto parts = detail::split(name, ':');
    if (parts[0] == "A" && parts.size() == 2) {
        const auto d = static_cast<int>(detail::parse_positive(parts[1], "A:d order"));
        if (d < 2) throw input_error("A:d requires d >= 2");
        const std::string id = "cyclic:" + std::to_string(d);
        return {id, group_catalog(id), toric_cyclic_2d(d)};
    }
    if (parts[0] == "D" && parts.size() == 2) {
        const auto m = static_cast<int>(detail::parse_positive(parts[1], "D:m rank"));
        if (m < 4) throw input_error("D:m requires m >= 4");
        auto edges = chain_edges(1, m - 1);
        edges.emplace_back(m - 2, m);
        const std::string id = "binary-dihedral:" + std::to_string(m - 2);
        return {id, group_catalog(id), tree_resolution(m, edges)};
    }
    if (parts.size() == 1 && (name == "E6" || name == "E7" || name == "E8")) {
        const int rank = name[1] - '0';
        auto edges = chain_edges(1, rank - 1);
        edges.emplace_back(3, rank);
        const std::string id = rank == 6 ? "binary-tetrahedral" : rank == 7 ? "binary-octahedral" : "binary-icosahedral";
        return {id, group_catalog(id), tree_resolution(rank, edges)};
    }
    if (name == "cyclic:3:1,1,1") {
        // Blow-up of the origin: a single exceptional divisor E = P^2, crepant.
        ResolutionData res;
        res.dim = 3;
        res.components.push_back({1, 1});
        res.set_stratum({1}, MotivicExpr::polynomial({Rational(1), Rational(1), Rational(1)}));
        return {std::string(name), group_catalog(name), res};
    }
    throw input_error("unknown resolution catalog identifier '" + std::string(name) + "'");
}

/// Identifiers exercised by the catalog-wide checks.
inline std::vector<std::string> catalog_ids(int max_a = 12, int max_d = 8) {
    std::vector<std::string> ids;
    for (int d = 2; d <= max_a; ++d) ids.push_back("A:" + std::to_string(d));
    for (int m = 4; m <= max_d; ++m) ids.push_back("D:" + std::to_string(m));
    ids.insert(ids.end(), {"E6", "E7", "E8"});
    return ids;
}

// ---------------------------------------------------------------------------
// JSON: {dim, components:[{id, nu}], strata:[{subset:[ids], class: expr}]}

inline nlohmann::json to_json(const ResolutionData& res) {
    nlohmann::json comps = nlohmann::json::array();
    for (const auto& c : res.components) comps.push_back({{"id", c.id}, {"nu", c.nu}});
    nlohmann::json strata = nlohmann::json::array();
    for (const auto& [subset, cls] : res.strata) strata.push_back({{"subset", subset}, {"class", to_json(cls)}});
    return {{"dim", res.dim}, {"components", comps}, {"strata", strata}};
}

inline ResolutionData resolution_from_json(const nlohmann::json& j) {
    try {
        ResolutionData res;
        res.dim = j.at("dim").get<int>();
        for (const auto& jc : j.at("components")) res.components.push_back({jc.at("id").get<int>(), jc.at("nu").get<int>()});
        for (const auto& js : j.at("strata")) {
            Subset subset = js.at("subset").get<Subset>();
            std::sort(subset.begin(), subset.end());
            if (res.strata.contains(subset)) throw input_error("resolution: stratum subset listed twice");
            res.strata.emplace(std::move(subset), motivic_from_json(js.at("class")));
        }
        validate(res);
        return res;
    } catch (const nlohmann::json::exception& e) {
        throw input_error(std::string("ResolutionData JSON: ") + e.what());
    }
}

}  // namespace mckay
