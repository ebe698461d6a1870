#pragma once

// Built-in finite subgroups of GL_n addressed by catalog identifiers:
//   cyclic:d              diag(xi_d, xi_d^(d-1)) in SL_2
//   cyclic:d:a1,...,an    diag(xi_d^a1, ..., xi_d^an)
//   trivial:n             the trivial subgroup of GL_n
//   binary-dihedral:m     order 4m
//   binary-tetrahedral    order 24
//   binary-octahedral     order 48
//   binary-icosahedral    order 120

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "mckay/cyclotomic.hpp"
#include "mckay/error.hpp"
#include "mckay/group.hpp"

namespace mckay {

namespace detail {

inline std::vector<std::string> split(std::string_view s, char sep) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
        const auto pos = s.find(sep, start);
        out.emplace_back(s.substr(start, pos - start));
        if (pos == std::string_view::npos) break;
        start = pos + 1;
    }
    return out;
}

inline std::int64_t parse_positive(const std::string& s, std::string_view what) {
    std::size_t used = 0;
    long long v = 0;
    try {
        v = std::stoll(s, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used != s.size() || s.empty() || v < 1) {
        throw input_error("catalog: " + std::string(what) + " must be a positive integer, got '" + s + "'");
    }
    return v;
}

inline CycMatrix mat2(const CycNum& a, const CycNum& b, const CycNum& c, const CycNum& d) {
    CycMatrix m(2, 2, 1);
    m(0, 0) = a;
    m(0, 1) = b;
    m(1, 0) = c;
    m(1, 1) = d;
    return m.embed(m.conductor());
}

inline CycNum q(std::int64_t conductor, long num, long den = 1) { return CycNum(conductor, ratio(num, den)); }

// Quaternion units as SU(2) matrices over Q(i): i -> diag(i,-i),
// j -> [[0,1],[-1,0]], k = ij -> [[0,i],[i,0]].
inline CycMatrix quaternion_i() {
    const CycNum i = CycNum::primitive_root(4);
    return mat2(i, q(4, 0), q(4, 0), -i);
}
inline CycMatrix quaternion_j() { return mat2(q(4, 0), q(4, 1), q(4, -1), q(4, 0)); }

// (1 + i + j + k) / 2
inline CycMatrix tetrahedral_generator() {
    const CycNum i = CycNum::primitive_root(4);
    const CycNum half = q(4, 1, 2);
    return mat2(half * (q(4, 1) + i), half * (q(4, 1) + i), half * (q(4, -1) + i), half * (q(4, 1) - i));
}

}  // namespace detail

/// Diagonal action diag(xi_d^a_1, ..., xi_d^a_n).
inline GroupSpec cyclic_diagonal_spec(std::int64_t d, const std::vector<std::int64_t>& weights) {
    if (d < 1) throw input_error("cyclic group order must be positive");
    if (weights.empty()) throw input_error("cyclic group needs at least one weight");
    std::vector<CycNum> diag;
    for (auto a : weights) diag.push_back(CycNum::root_power(d, a));
    GroupSpec spec{weights.size(), d, {CycMatrix::diagonal(diag).embed(d)}};
    return spec;
}

inline GroupSpec binary_dihedral_spec(std::int64_t m) {
    if (m < 2) throw input_error("binary-dihedral:m requires m >= 2");
    const std::int64_t root = lcm64(2 * m, 4);
    const CycNum z = CycNum::primitive_root(2 * m);
    const CycMatrix rot = detail::mat2(z, detail::q(1, 0), detail::q(1, 0), z.inverse());
    return {2, root, {rot.embed(root), detail::quaternion_j().embed(root)}};
}

inline GroupSpec binary_tetrahedral_spec() {
    return {2, 4, {detail::quaternion_i(), detail::quaternion_j(), detail::tetrahedral_generator()}};
}

inline GroupSpec binary_octahedral_spec() {
    const CycNum z8 = CycNum::primitive_root(8);
    const CycMatrix rot = detail::mat2(z8, detail::q(8, 0), detail::q(8, 0), z8.inverse());
    auto base = binary_tetrahedral_spec();
    GroupSpec spec{2, 8, {}};
    for (const auto& g : base.generators) spec.generators.push_back(g.embed(8));
    spec.generators.push_back(rot);
    return spec;
}

/// Klein's generators over Q(xi_5): T = diag(z^3, z^2) and
/// S = (1/sqrt5) [[-(z - z^4), z^2 - z^3], [z^2 - z^3, z - z^4]].
inline GroupSpec binary_icosahedral_spec() {
    auto z = [](std::int64_t e) { return CycNum::root_power(5, e); };
    const CycNum sqrt5 = z(1) - z(2) - z(3) + z(4);
    const CycNum inv = sqrt5.inverse();
    const CycNum a = (z(1) - z(4)) * inv;
    const CycNum b = (z(2) - z(3)) * inv;
    const CycMatrix s = detail::mat2(-a, b, b, a);
    const CycMatrix t = detail::mat2(z(3), detail::q(5, 0), detail::q(5, 0), z(2));
    return {2, 5, {s.embed(5), t.embed(5)}};
}

inline GroupSpec group_catalog(std::string_view id) {
    const auto parts = detail::split(id, ':');
    const std::string& head = parts[0];
    if (head == "cyclic" && (parts.size() == 2 || parts.size() == 3)) {
        const std::int64_t d = detail::parse_positive(parts[1], "cyclic order");
        if (parts.size() == 2) return cyclic_diagonal_spec(d, {1, d - 1});
        std::vector<std::int64_t> weights;
        for (const auto& w : detail::split(parts[2], ',')) {
            std::size_t used = 0;
            long long v = 0;
            try {
                v = std::stoll(w, &used);
            } catch (const std::exception&) {
                used = 0;
            }
            if (w.empty() || used != w.size()) throw input_error("catalog: bad cyclic weight '" + w + "'");
            weights.push_back(v);
        }
        return cyclic_diagonal_spec(d, weights);
    }
    if (head == "trivial" && parts.size() == 2) {
        const auto n = static_cast<std::size_t>(detail::parse_positive(parts[1], "dimension"));
        return {n, 1, {}};
    }
    if (head == "binary-dihedral" && parts.size() == 2) {
        return binary_dihedral_spec(detail::parse_positive(parts[1], "binary-dihedral parameter"));
    }
    if (parts.size() == 1) {
        if (head == "binary-tetrahedral") return binary_tetrahedral_spec();
        if (head == "binary-octahedral") return binary_octahedral_spec();
        if (head == "binary-icosahedral") return binary_icosahedral_spec();
    }
    throw input_error("unknown group catalog identifier '" + std::string(id) + "'");
}

}  // namespace mckay
