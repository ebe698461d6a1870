#pragma once

// Exact arithmetic in cyclotomic fields Q(xi_d).
//
// An element of Q(xi_d) is stored by its coordinates in the power basis
// 1, xi, ..., xi^(phi(d)-1), i.e. as a polynomial reduced modulo the d-th
// cyclotomic polynomial. The generator xi_d is the class of x, and the
// family is compatible: xi_D^(D/d) == xi_d whenever d divides D.

#include <cstddef>
#include <cstdint>
#include <map>
#include <mutex>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"
#include "mckay/error.hpp"
#include "mckay/rational.hpp"

namespace mckay {

inline std::int64_t euler_phi(std::int64_t n) {
    if (n < 1) throw input_error("euler_phi: argument must be positive");
    std::int64_t result = n;
    for (std::int64_t p = 2; p * p <= n; ++p) {
        if (n % p == 0) {
            while (n % p == 0) n /= p;
            result -= result / p;
        }
    }
    if (n > 1) result -= result / n;
    return result;
}

namespace detail {

using IntPoly = std::vector<Integer>;  // low degree first
using RatPoly = std::vector<Rational>;

inline void trim(RatPoly& p) {
    while (!p.empty() && p.back() == 0) p.pop_back();
}

// Exact division of integer polynomials whose quotient is known to be integral
// and whose divisor is monic.
inline IntPoly divide_monic(IntPoly num, const IntPoly& den) {
    const std::size_t dn = den.size() - 1;
    IntPoly quot(num.size() - dn, 0);
    for (std::size_t i = num.size(); i-- > dn;) {
        const Integer c = num[i];
        if (c == 0) continue;
        quot[i - dn] = c;
        for (std::size_t j = 0; j <= dn; ++j) num[i - dn + j] -= c * den[j];
    }
    return quot;
}

inline IntPoly compute_cyclotomic(std::int64_t d);

/// Cache of cyclotomic polynomials up to a configurable conductor bound.
class CyclotomicCache {
public:
    static CyclotomicCache& instance() {
        static CyclotomicCache cache;
        return cache;
    }

    void set_bound(std::int64_t bound) {
        std::lock_guard lock(mutex_);
        bound_ = bound;
    }

    std::int64_t bound() const {
        std::lock_guard lock(mutex_);
        return bound_;
    }

    IntPoly get(std::int64_t d) {
        {
            std::lock_guard lock(mutex_);
            if (auto it = table_.find(d); it != table_.end()) return it->second;
        }
        IntPoly poly = compute_cyclotomic(d);
        std::lock_guard lock(mutex_);
        if (d <= bound_) table_.emplace(d, poly);
        return poly;
    }

private:
    mutable std::mutex mutex_;
    std::int64_t bound_ = 360;
    std::map<std::int64_t, IntPoly> table_;
};

// Phi_d = (x^d - 1) / prod_{k | d, k < d} Phi_k
inline IntPoly compute_cyclotomic(std::int64_t d) {
    IntPoly poly(static_cast<std::size_t>(d) + 1, 0);
    poly[0] = -1;
    poly[static_cast<std::size_t>(d)] = 1;
    for (std::int64_t k = 1; k < d; ++k) {
        if (d % k == 0) poly = divide_monic(std::move(poly), CyclotomicCache::instance().get(k));
    }
    return poly;
}

}  // namespace detail

/// Coefficients of the d-th cyclotomic polynomial, constant term first.
inline std::vector<Integer> cyclotomic_polynomial(std::int64_t d) {
    if (d < 1) throw input_error("cyclotomic_polynomial: conductor must be positive");
    return detail::CyclotomicCache::instance().get(d);
}

/// Conductors up to `bound` keep their cyclotomic polynomial cached.
inline void set_cyclotomic_cache_bound(std::int64_t bound) {
    detail::CyclotomicCache::instance().set_bound(bound);
}

class CycNum {
public:
    /// Zero of Q(xi_1) = Q.
    CycNum() : CycNum(1) {}

    explicit CycNum(std::int64_t conductor) : conductor_(conductor) {
        if (conductor < 1) throw input_error("CycNum: conductor must be positive");
        coeffs_.assign(static_cast<std::size_t>(euler_phi(conductor)), Rational(0));
    }

    CycNum(std::int64_t conductor, const Rational& value) : CycNum(conductor) {
        coeffs_[0] = value;
    }

    /// Reduces an arbitrary polynomial in xi_d (constant term first).
    static CycNum from_polynomial(std::int64_t conductor, std::span<const Rational> poly) {
        CycNum out(conductor);
        out.assign_reduced(std::vector<Rational>(poly.begin(), poly.end()));
        return out;
    }

    /// The fixed primitive d-th root of unity xi_d.
    static CycNum primitive_root(std::int64_t d) { return root_power(d, 1); }

    /// xi_d^e for any integer e.
    static CycNum root_power(std::int64_t d, std::int64_t e) {
        if (d < 1) throw input_error("primitive_root: conductor must be positive");
        e %= d;
        if (e < 0) e += d;
        std::vector<Rational> poly(static_cast<std::size_t>(e) + 1, Rational(0));
        poly[static_cast<std::size_t>(e)] = 1;
        return from_polynomial(d, poly);
    }

    std::int64_t conductor() const noexcept { return conductor_; }
    const std::vector<Rational>& coeffs() const noexcept { return coeffs_; }

    bool is_zero() const {
        for (const auto& c : coeffs_) {
            if (c != 0) return false;
        }
        return true;
    }

    bool is_rational() const {
        for (std::size_t i = 1; i < coeffs_.size(); ++i) {
            if (coeffs_[i] != 0) return false;
        }
        return true;
    }

    /// Image under Q(xi_d) -> Q(xi_D), xi_d -> xi_D^(D/d). D must be a multiple of d.
    CycNum embed(std::int64_t target) const {
        if (target == conductor_) return *this;
        if (target < 1 || target % conductor_ != 0) {
            throw input_error("CycNum::embed: target conductor " + std::to_string(target) +
                              " is not a multiple of " + std::to_string(conductor_));
        }
        const std::size_t step = static_cast<std::size_t>(target / conductor_);
        std::vector<Rational> poly((coeffs_.size() - 1) * step + 1, Rational(0));
        for (std::size_t i = 0; i < coeffs_.size(); ++i) poly[i * step] = coeffs_[i];
        return from_polynomial(target, poly);
    }

    /// Preimage under embed(), if this element lies in the subfield Q(xi_d).
    std::optional<CycNum> restrict_to(std::int64_t d) const;

    CycNum operator-() const {
        CycNum out = *this;
        for (auto& c : out.coeffs_) c = -c;
        return out;
    }

    friend CycNum operator+(const CycNum& a, const CycNum& b) {
        auto [x, y] = unify(a, b);
        for (std::size_t i = 0; i < x.coeffs_.size(); ++i) x.coeffs_[i] += y.coeffs_[i];
        return x;
    }

    friend CycNum operator-(const CycNum& a, const CycNum& b) {
        auto [x, y] = unify(a, b);
        for (std::size_t i = 0; i < x.coeffs_.size(); ++i) x.coeffs_[i] -= y.coeffs_[i];
        return x;
    }

    friend CycNum operator*(const CycNum& a, const CycNum& b) {
        auto [x, y] = unify(a, b);
        const std::size_t n = x.coeffs_.size();
        std::vector<Rational> prod(2 * n - 1, Rational(0));
        for (std::size_t i = 0; i < n; ++i) {
            if (x.coeffs_[i] == 0) continue;
            for (std::size_t j = 0; j < n; ++j) {
                if (y.coeffs_[j] != 0) prod[i + j] += x.coeffs_[i] * y.coeffs_[j];
            }
        }
        CycNum out(x.conductor_);
        out.assign_reduced(std::move(prod));
        return out;
    }

    /// Multiplicative inverse; throws division_by_zero for 0.
    CycNum inverse() const;

    friend CycNum operator/(const CycNum& a, const CycNum& b) { return a * b.inverse(); }

    CycNum& operator+=(const CycNum& o) { return *this = *this + o; }
    CycNum& operator-=(const CycNum& o) { return *this = *this - o; }
    CycNum& operator*=(const CycNum& o) { return *this = *this * o; }

    friend bool operator==(const CycNum& a, const CycNum& b) {
        if (a.conductor_ == b.conductor_) return a.coeffs_ == b.coeffs_;
        auto [x, y] = unify(a, b);
        return x.coeffs_ == y.coeffs_;
    }

    CycNum pow(std::int64_t e) const {
        if (e < 0) return inverse().pow(-e);
        CycNum result(conductor_, Rational(1));
        CycNum base = *this;
        while (e > 0) {
            if (e & 1) result *= base;
            base *= base;
            e >>= 1;
        }
        return result;
    }

    /// Stable text key, unique per (conductor, value).
    std::string key() const {
        std::string k = std::to_string(conductor_);
        for (const auto& c : coeffs_) {
            k.push_back('|');
            if (c != 0) k += c.get_str();
        }
        return k;
    }

    /// Human-readable form such as "1/2 + 3*z^2" (z standing for xi_d).
    std::string to_string() const {
        std::string out;
        for (std::size_t i = 0; i < coeffs_.size(); ++i) {
            const Rational& c = coeffs_[i];
            if (c == 0) continue;
            if (!out.empty()) out += c < 0 ? " - " : " + ";
            else if (c < 0) out += "-";
            const Rational mag = abs(c);
            if (i == 0) {
                out += mag.get_str();
                continue;
            }
            if (mag != 1) out += mag.get_str() + "*";
            out += i == 1 ? "z" : "z^" + std::to_string(i);
        }
        return out.empty() ? "0" : out;
    }

private:
    static std::pair<CycNum, CycNum> unify(const CycNum& a, const CycNum& b) {
        if (a.conductor_ == b.conductor_) return {a, b};
        const std::int64_t target = lcm64(a.conductor_, b.conductor_);
        return {a.embed(target), b.embed(target)};
    }

    void assign_reduced(std::vector<Rational> poly) {
        const auto phi = cyclotomic_polynomial(conductor_);
        const std::size_t deg = phi.size() - 1;
        for (std::size_t i = poly.size(); i-- > deg;) {
            if (poly[i] == 0) continue;
            const Rational c = poly[i];
            for (std::size_t j = 0; j <= deg; ++j) {
                if (phi[j] != 0) poly[i - deg + j] -= c * phi[j];
            }
        }
        poly.resize(deg, Rational(0));
        coeffs_ = std::move(poly);
    }

    std::int64_t conductor_;
    std::vector<Rational> coeffs_;
};

namespace detail {

inline RatPoly poly_mul(const RatPoly& a, const RatPoly& b) {
    if (a.empty() || b.empty()) return {};
    RatPoly out(a.size() + b.size() - 1, Rational(0));
    for (std::size_t i = 0; i < a.size(); ++i) {
        for (std::size_t j = 0; j < b.size(); ++j) out[i + j] += a[i] * b[j];
    }
    trim(out);
    return out;
}

inline RatPoly poly_sub(RatPoly a, const RatPoly& b) {
    if (a.size() < b.size()) a.resize(b.size(), Rational(0));
    for (std::size_t i = 0; i < b.size(); ++i) a[i] -= b[i];
    trim(a);
    return a;
}

inline std::pair<RatPoly, RatPoly> poly_divmod(RatPoly num, const RatPoly& den) {
    trim(num);
    if (num.size() < den.size()) return {{}, num};
    RatPoly quot(num.size() - den.size() + 1, Rational(0));
    const Rational lead = den.back();
    for (std::size_t k = quot.size(); k-- > 0;) {
        const Rational c = num[k + den.size() - 1] / lead;
        quot[k] = c;
        if (c == 0) continue;
        for (std::size_t j = 0; j < den.size(); ++j) num[k + j] -= c * den[j];
    }
    trim(num);
    trim(quot);
    return {quot, num};
}

// Gaussian elimination over Q; returns the rank and leaves `rows` in echelon form.
inline std::size_t rational_rank(std::vector<std::vector<Rational>>& rows, std::size_t cols) {
    std::size_t rank = 0;
    for (std::size_t c = 0; c < cols && rank < rows.size(); ++c) {
        std::size_t pivot = rank;
        while (pivot < rows.size() && rows[pivot][c] == 0) ++pivot;
        if (pivot == rows.size()) continue;
        std::swap(rows[pivot], rows[rank]);
        for (std::size_t r = 0; r < rows.size(); ++r) {
            if (r == rank || rows[r][c] == 0) continue;
            const Rational f = rows[r][c] / rows[rank][c];
            for (std::size_t k = c; k < cols; ++k) rows[r][k] -= f * rows[rank][k];
        }
        ++rank;
    }
    return rank;
}

}  // namespace detail

inline CycNum CycNum::inverse() const {
    if (is_zero()) throw division_by_zero();
    // Extended Euclid in Q[x]: s*a + t*Phi = 1, so s is the inverse of a.
    detail::RatPoly a(coeffs_.begin(), coeffs_.end());
    detail::trim(a);
    const auto phi_int = cyclotomic_polynomial(conductor_);
    detail::RatPoly b(phi_int.begin(), phi_int.end());
    detail::RatPoly s0{Rational(1)}, s1{};
    while (!b.empty()) {
        auto [q, r] = detail::poly_divmod(a, b);
        detail::RatPoly s2 = detail::poly_sub(s0, detail::poly_mul(q, s1));
        a = std::move(b);
        b = std::move(r);
        s0 = std::move(s1);
        s1 = std::move(s2);
    }
    // a is now a nonzero constant gcd.
    const Rational g = a.front();
    for (auto& c : s0) c /= g;
    return from_polynomial(conductor_, s0);
}

inline std::optional<CycNum> CycNum::restrict_to(std::int64_t d) const {
    if (d < 1 || conductor_ % d != 0) {
        throw input_error("CycNum::restrict_to: " + std::to_string(d) + " does not divide " +
                          std::to_string(conductor_));
    }
    if (d == conductor_) return *this;
    // Solve sum_j c_j * embed(xi_d^j) = this over Q. Columns are basis images,
    // augmented with this element; the system is consistent iff ranks agree.
    const std::size_t unknowns = static_cast<std::size_t>(euler_phi(d));
    const std::size_t eqs = coeffs_.size();
    std::vector<std::vector<Rational>> rows(eqs, std::vector<Rational>(unknowns + 1));
    for (std::size_t j = 0; j < unknowns; ++j) {
        const CycNum image = root_power(d, static_cast<std::int64_t>(j)).embed(conductor_);
        for (std::size_t i = 0; i < eqs; ++i) rows[i][j] = image.coeffs_[i];
    }
    for (std::size_t i = 0; i < eqs; ++i) rows[i][unknowns] = coeffs_[i];
    const std::size_t rank = detail::rational_rank(rows, unknowns + 1);
    // Consistency: no echelon row may have its pivot in the augmented column.
    for (std::size_t r = 0; r < rank; ++r) {
        bool only_aug = true;
        for (std::size_t j = 0; j < unknowns; ++j) {
            if (rows[r][j] != 0) {
                only_aug = false;
                break;
            }
        }
        if (only_aug) return std::nullopt;
    }
    CycNum out(d);
    for (std::size_t r = 0; r < rank; ++r) {
        std::size_t pivot = 0;
        while (rows[r][pivot] == 0) ++pivot;
        out.coeffs_[pivot] = rows[r][unknowns] / rows[r][pivot];
    }
    return out;
}

// ---------------------------------------------------------------------------
// Matrices over Q(xi_d)

class CycMatrix {
public:
    CycMatrix() = default;

    CycMatrix(std::size_t rows, std::size_t cols, std::int64_t conductor)
        : rows_(rows), cols_(cols), entries_(rows * cols, CycNum(conductor)) {}

    static CycMatrix identity(std::size_t n, std::int64_t conductor) {
        CycMatrix m(n, n, conductor);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = CycNum(conductor, Rational(1));
        return m;
    }

    static CycMatrix diagonal(std::span<const CycNum> diag) {
        std::int64_t conductor = 1;
        for (const auto& x : diag) conductor = lcm64(conductor, x.conductor());
        CycMatrix m(diag.size(), diag.size(), conductor);
        for (std::size_t i = 0; i < diag.size(); ++i) m(i, i) = diag[i].embed(conductor);
        return m;
    }

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    bool square() const noexcept { return rows_ == cols_; }

    CycNum& operator()(std::size_t r, std::size_t c) { return entries_[r * cols_ + c]; }
    const CycNum& operator()(std::size_t r, std::size_t c) const { return entries_[r * cols_ + c]; }

    std::int64_t conductor() const {
        std::int64_t d = 1;
        for (const auto& e : entries_) d = lcm64(d, e.conductor());
        return d;
    }

    /// All entries re-expressed in Q(xi_target).
    CycMatrix embed(std::int64_t target) const {
        CycMatrix out = *this;
        for (auto& e : out.entries_) e = e.embed(target);
        return out;
    }

    friend CycMatrix operator*(const CycMatrix& a, const CycMatrix& b) {
        if (a.cols_ != b.rows_) throw input_error("matrix product: dimension mismatch");
        const std::int64_t d = lcm64(a.conductor(), b.conductor());
        CycMatrix out(a.rows_, b.cols_, d);
        for (std::size_t i = 0; i < a.rows_; ++i) {
            for (std::size_t j = 0; j < b.cols_; ++j) {
                CycNum acc(d);
                for (std::size_t k = 0; k < a.cols_; ++k) {
                    const CycNum& x = a(i, k);
                    const CycNum& y = b(k, j);
                    if (x.is_zero() || y.is_zero()) continue;
                    acc += x * y;
                }
                out(i, j) = acc.embed(d);
            }
        }
        return out;
    }

    friend CycMatrix operator-(const CycMatrix& a, const CycMatrix& b) {
        if (a.rows_ != b.rows_ || a.cols_ != b.cols_) throw input_error("matrix difference: shape mismatch");
        CycMatrix out = a;
        for (std::size_t i = 0; i < out.entries_.size(); ++i) out.entries_[i] = a.entries_[i] - b.entries_[i];
        return out;
    }

    friend bool operator==(const CycMatrix& a, const CycMatrix& b) {
        return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.entries_ == b.entries_;
    }

    CycNum determinant() const;
    std::size_t rank() const;
    CycMatrix inverse() const;

    std::string key() const {
        std::string k = std::to_string(rows_) + "x" + std::to_string(cols_);
        for (const auto& e : entries_) {
            k.push_back('[');
            k += e.key();
            k.push_back(']');
        }
        return k;
    }

    std::string to_string() const {
        std::string out = "[";
        for (std::size_t i = 0; i < rows_; ++i) {
            out += i ? "; " : "";
            for (std::size_t j = 0; j < cols_; ++j) out += (j ? ", " : "") + (*this)(i, j).to_string();
        }
        return out + "]";
    }

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<CycNum> entries_;
};

namespace detail {

// Row reduction in place over Q(xi_d), pivoting only in the first `cols`
// columns; returns the rank and accumulates the determinant when asked.
inline std::size_t eliminate(std::vector<std::vector<CycNum>>& m, std::size_t cols, CycNum* det) {
    const std::size_t width = m.empty() ? 0 : m.front().size();
    std::size_t rank = 0;
    for (std::size_t c = 0; c < cols && rank < m.size(); ++c) {
        std::size_t pivot = rank;
        while (pivot < m.size() && m[pivot][c].is_zero()) ++pivot;
        if (pivot == m.size()) {
            if (det) *det = CycNum(det->conductor());
            continue;
        }
        if (pivot != rank) {
            std::swap(m[pivot], m[rank]);
            if (det) *det = -*det;
        }
        const CycNum inv = m[rank][c].inverse();
        if (det) *det *= m[rank][c];
        for (std::size_t r = rank + 1; r < m.size(); ++r) {
            if (m[r][c].is_zero()) continue;
            const CycNum f = m[r][c] * inv;
            for (std::size_t k = c; k < width; ++k) m[r][k] -= f * m[rank][k];
        }
        ++rank;
    }
    return rank;
}

inline std::vector<std::vector<CycNum>> to_rows(const CycMatrix& a) {
    const std::int64_t d = a.conductor();
    std::vector<std::vector<CycNum>> rows(a.rows(), std::vector<CycNum>(a.cols()));
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t j = 0; j < a.cols(); ++j) rows[i][j] = a(i, j).embed(d);
    }
    return rows;
}

}  // namespace detail

inline std::size_t CycMatrix::rank() const {
    auto rows = detail::to_rows(*this);
    return detail::eliminate(rows, cols_, nullptr);
}

inline CycNum CycMatrix::determinant() const {
    if (!square()) throw input_error("determinant of a non-square matrix");
    auto rows = detail::to_rows(*this);
    CycNum det(conductor(), Rational(1));
    if (detail::eliminate(rows, cols_, &det) < rows_) return CycNum(conductor());
    return det;
}

inline CycMatrix CycMatrix::inverse() const {
    if (!square()) throw input_error("inverse of a non-square matrix");
    const std::int64_t d = conductor();
    const std::size_t n = rows_;
    auto rows = detail::to_rows(*this);
    for (std::size_t i = 0; i < n; ++i) {
        rows[i].resize(2 * n, CycNum(d));
        rows[i][n + i] = CycNum(d, Rational(1));
    }
    if (detail::eliminate(rows, n, nullptr) < n) throw division_by_zero();
    // Back substitution to reduced echelon form.
    for (std::size_t c = n; c-- > 0;) {
        const CycNum inv = rows[c][c].inverse();
        for (std::size_t k = 0; k < 2 * n; ++k) rows[c][k] *= inv;
        for (std::size_t r = 0; r < c; ++r) {
            if (rows[r][c].is_zero()) continue;
            const CycNum f = rows[r][c];
            for (std::size_t k = 0; k < 2 * n; ++k) rows[r][k] -= f * rows[c][k];
        }
    }
    CycMatrix out(n, n, d);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) out(i, j) = rows[i][n + j];
    }
    return out;
}

/// dim ker(m) by exact Gaussian elimination over the field.
inline std::size_t kernel_dimension(const CycMatrix& m) {
    if (!m.square()) throw input_error("kernel_dimension: matrix must be square");
    return m.cols() - m.rank();
}

// ---------------------------------------------------------------------------
// JSON: {"conductor": d, "coeffs": ["p/q", ...]}. On input, coeffs may be any
// polynomial of degree < d in xi_d; it is reduced on parse.

inline nlohmann::json to_json(const CycNum& x) {
    nlohmann::json coeffs = nlohmann::json::array();
    for (const auto& c : x.coeffs()) coeffs.push_back(c.get_str());
    return {{"conductor", x.conductor()}, {"coeffs", coeffs}};
}

inline std::vector<Rational> parse_rational_array(const nlohmann::json& j) {
    if (!j.is_array()) throw input_error("expected an array of rationals");
    std::vector<Rational> out;
    out.reserve(j.size());
    for (const auto& v : j) {
        if (v.is_string()) out.push_back(parse_rational(v.get<std::string>()));
        else if (v.is_number_integer()) out.emplace_back(v.get<long>());
        else throw input_error("rational entries must be strings \"p/q\" or integers");
    }
    return out;
}

inline CycNum cyc_from_coeffs(std::int64_t conductor, const nlohmann::json& coeffs) {
    if (conductor < 1) throw input_error("conductor must be positive");
    const auto poly = parse_rational_array(coeffs);
    if (poly.empty() || static_cast<std::int64_t>(poly.size()) > std::max<std::int64_t>(conductor, 1)) {
        throw input_error("cyclotomic coefficient array must have between 1 and d entries");
    }
    return CycNum::from_polynomial(conductor, poly);
}

inline CycNum cyc_from_json(const nlohmann::json& j) {
    if (!j.is_object() || !j.contains("conductor") || !j.contains("coeffs")) {
        throw input_error("CycNum JSON must be an object with 'conductor' and 'coeffs'");
    }
    return cyc_from_coeffs(j.at("conductor").get<std::int64_t>(), j.at("coeffs"));
}

}  // namespace mckay
