#pragma once

// Values of motivic measures: the ring Z[L^(+-1/D)][((L-1)/(L^i-1))_{i>=1}],
// with the filtration norm and the Hodge, Euler and point-count realizations.
//
// An element is a formal sum of terms c * L^a * prod_k (L-1)/(L^nu_k - 1).
// Equality is semantic: both sides are cleared to a common denominator in
// M = L^(1/D) and the numerators compared.

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <tuple>
#include <utility>
#include <vector>

#include "json.hpp"
#include "mckay/error.hpp"
#include "mckay/rational.hpp"

namespace mckay {

struct MotivicTerm {
    Rational coeff;
    Rational exponent;          ///< the power a in L^a
    std::vector<int> factors;   ///< sorted; each nu >= 2 stands for (L-1)/(L^nu-1)

    friend bool operator==(const MotivicTerm&, const MotivicTerm&) = default;
};

/// Sparse Laurent polynomial in one variable: exponent -> coefficient.
using LaurentPoly = std::map<std::int64_t, Rational>;

namespace detail {

inline void laurent_add_to(LaurentPoly& acc, const LaurentPoly& p, const Rational& scale = 1) {
    for (const auto& [e, c] : p) {
        auto& slot = acc[e];
        slot += scale * c;
        if (slot == 0) acc.erase(e);
    }
}

inline LaurentPoly laurent_mul(const LaurentPoly& a, const LaurentPoly& b) {
    LaurentPoly out;
    for (const auto& [ea, ca] : a) {
        for (const auto& [eb, cb] : b) {
            auto& slot = out[ea + eb];
            slot += ca * cb;
        }
    }
    std::erase_if(out, [](const auto& kv) { return kv.second == 0; });
    return out;
}

// M^k - 1
inline LaurentPoly binomial(std::int64_t k) { return LaurentPoly{{0, Rational(-1)}, {k, Rational(1)}}; }

inline LaurentPoly laurent_pow(const LaurentPoly& p, int e) {
    LaurentPoly out{{0, Rational(1)}};
    for (int i = 0; i < e; ++i) out = laurent_mul(out, p);
    return out;
}

inline std::string exponent_text(const Rational& a) { return a.get_str(); }

}  // namespace detail

/// ||x|| as an exact power of two: 0, or 2^log2.
struct NormValue {
    bool zero = true;
    Rational log2 = 0;

    static NormValue zero_norm() { return {}; }
    static NormValue power_of_two(Rational e) { return {false, std::move(e)}; }

    double to_double() const { return zero ? 0.0 : std::exp2(log2.get_d()); }

    friend bool operator==(const NormValue& a, const NormValue& b) {
        return a.zero == b.zero && (a.zero || a.log2 == b.log2);
    }
    friend bool operator<=(const NormValue& a, const NormValue& b) {
        if (a.zero) return true;
        if (b.zero) return false;
        return a.log2 <= b.log2;
    }
    friend NormValue operator*(const NormValue& a, const NormValue& b) {
        if (a.zero || b.zero) return zero_norm();
        return power_of_two(a.log2 + b.log2);
    }
    friend NormValue max(const NormValue& a, const NormValue& b) { return a <= b ? b : a; }

    std::string to_string() const { return zero ? "0" : "2^(" + log2.get_str() + ")"; }
};

/// Numerator / prod_nu (M^(grain*nu) - 1)^k_nu in M = L^(1/grain).
struct ClearedForm {
    std::int64_t grain = 1;
    LaurentPoly numerator;
    std::map<int, int> denominator;  ///< nu -> multiplicity

    LaurentPoly denominator_poly() const {
        LaurentPoly den{{0, Rational(1)}};
        for (const auto& [nu, k] : denominator) {
            den = detail::laurent_mul(den, detail::laurent_pow(detail::binomial(grain * nu), k));
        }
        return den;
    }
};

class MotivicExpr {
public:
    MotivicExpr() = default;

    /// Builds from raw terms without merging like terms.
    MotivicExpr(std::vector<MotivicTerm> terms, std::int64_t grain = 1) : grain_(grain) {
        if (grain < 1) throw input_error("MotivicExpr: grain must be positive");
        for (auto& t : terms) push(std::move(t));
    }

    static MotivicExpr constant(const Rational& c) { return MotivicExpr({{c, 0, {}}}).canonical(); }

    /// c * L^a
    static MotivicExpr lpow(const Rational& a, const Rational& c = 1) {
        return MotivicExpr({{c, a, {}}}, a.get_den().get_si()).canonical();
    }

    /// (L-1)/(L^nu-1)
    static MotivicExpr factor(int nu) { return MotivicExpr({{Rational(1), 0, {nu}}}).canonical(); }

    /// sum_i coeffs[i] * L^i
    static MotivicExpr polynomial(const std::vector<Rational>& coeffs) {
        std::vector<MotivicTerm> terms;
        for (std::size_t i = 0; i < coeffs.size(); ++i) terms.push_back({coeffs[i], Rational(static_cast<long>(i)), {}});
        return MotivicExpr(std::move(terms)).canonical();
    }

    std::int64_t grain() const noexcept { return grain_; }
    const std::vector<MotivicTerm>& terms() const noexcept { return terms_; }

    /// Syntactically zero after merging; for semantic zero use is_zero().
    bool empty() const { return canonical().terms_.empty(); }

    /// Like terms merged, zero terms dropped, sorted by descending exponent
    /// then factor multiset.
    MotivicExpr canonical() const {
        std::map<std::pair<Rational, std::vector<int>>, Rational> merged;
        for (const auto& t : terms_) merged[{t.exponent, t.factors}] += t.coeff;
        MotivicExpr out;
        out.grain_ = grain_;
        for (const auto& [key, c] : merged) {
            if (c != 0) out.terms_.push_back({c, key.first, key.second});
        }
        std::sort(out.terms_.begin(), out.terms_.end(), [](const MotivicTerm& a, const MotivicTerm& b) {
            if (a.exponent != b.exponent) return a.exponent > b.exponent;
            return a.factors < b.factors;
        });
        return out;
    }

    MotivicExpr with_grain(std::int64_t grain) const {
        MotivicExpr out = *this;
        out.grain_ = lcm64(grain_, grain);
        return out;
    }

    friend MotivicExpr operator+(const MotivicExpr& x, const MotivicExpr& y) {
        MotivicExpr out = x;
        out.grain_ = lcm64(x.grain_, y.grain_);
        for (const auto& t : y.terms_) out.terms_.push_back(t);
        return out.canonical();
    }

    MotivicExpr operator-() const {
        MotivicExpr out = *this;
        for (auto& t : out.terms_) t.coeff = -t.coeff;
        return out;
    }

    friend MotivicExpr operator-(const MotivicExpr& x, const MotivicExpr& y) { return x + (-y); }

    friend MotivicExpr operator*(const MotivicExpr& x, const MotivicExpr& y) {
        MotivicExpr out;
        out.grain_ = lcm64(x.grain_, y.grain_);
        for (const auto& a : x.terms_) {
            for (const auto& b : y.terms_) {
                MotivicTerm t{a.coeff * b.coeff, a.exponent + b.exponent, a.factors};
                t.factors.insert(t.factors.end(), b.factors.begin(), b.factors.end());
                std::sort(t.factors.begin(), t.factors.end());
                out.terms_.push_back(std::move(t));
            }
        }
        return out.canonical();
    }

    MotivicExpr& operator+=(const MotivicExpr& o) { return *this = *this + o; }
    MotivicExpr& operator*=(const MotivicExpr& o) { return *this = *this * o; }

    /// Common-denominator form in M = L^(1/grain).
    ClearedForm cleared() const {
        ClearedForm form;
        const MotivicExpr c = canonical();
        form.grain = c.grain_;
        for (const auto& t : c.terms_) {
            std::map<int, int> mult;
            for (int nu : t.factors) ++mult[nu];
            for (const auto& [nu, k] : mult) form.denominator[nu] = std::max(form.denominator[nu], k);
        }
        for (const auto& t : c.terms_) {
            std::map<int, int> mult;
            for (int nu : t.factors) ++mult[nu];
            const Rational scaled = t.exponent * Rational(form.grain);
            LaurentPoly p{{to_int64(scaled), t.coeff}};
            p = detail::laurent_mul(p, detail::laurent_pow(detail::binomial(form.grain), static_cast<int>(t.factors.size())));
            for (const auto& [nu, k] : form.denominator) {
                const int missing = k - (mult.count(nu) ? mult.at(nu) : 0);
                if (missing > 0) p = detail::laurent_mul(p, detail::laurent_pow(detail::binomial(form.grain * nu), missing));
            }
            detail::laurent_add_to(form.numerator, p);
        }
        return form;
    }

    /// Semantic zero test (as a rational function of L).
    bool is_zero() const {
        const MotivicExpr c = canonical();
        return c.terms_.empty() || c.cleared().numerator.empty();
    }

    std::string to_string() const;

private:
    void push(MotivicTerm t) {
        std::erase(t.factors, 1);
        for (int nu : t.factors) {
            if (nu < 1) throw input_error("factor exponent nu must be >= 1, got " + std::to_string(nu));
        }
        std::sort(t.factors.begin(), t.factors.end());
        const std::int64_t den = t.exponent.get_den().get_si();
        grain_ = lcm64(grain_, den);
        terms_.push_back(std::move(t));
    }

    std::int64_t grain_ = 1;
    std::vector<MotivicTerm> terms_;
};

/// Equality as rational functions of L.
inline bool expr_eq(const MotivicExpr& x, const MotivicExpr& y) { return (x - y).is_zero(); }

inline NormValue norm(const MotivicExpr& x) {
    const ClearedForm form = x.cleared();
    if (form.numerator.empty()) return NormValue::zero_norm();
    const std::int64_t num_deg = form.numerator.rbegin()->first;
    std::int64_t den_deg = 0;
    for (const auto& [nu, k] : form.denominator) den_deg += form.grain * nu * k;
    return NormValue::power_of_two(ratio(num_deg - den_deg, form.grain));
}

/// L -> 1 limit: each (L-1)/(L^nu-1) tends to 1/nu, every L^a to 1.
inline Rational euler_realize(const MotivicExpr& x) {
    Rational total = 0;
    for (const auto& t : x.terms()) {
        Rational v = t.coeff;
        for (int nu : t.factors) v /= nu;
        total += v;
    }
    return total;
}

namespace detail {

// Exact integer r-th root of q when one exists.
inline std::optional<Integer> exact_root(const Integer& q, unsigned long r) {
    Integer root;
    if (mpz_root(root.get_mpz_t(), q.get_mpz_t(), r) == 0) return std::nullopt;
    return root;
}

}  // namespace detail

/// Counting realization L -> q.
inline Rational point_count_realize(const MotivicExpr& x, const Integer& q) {
    if (q < 2) throw input_error("point_count_realize: q must be >= 2");
    Rational total = 0;
    for (const auto& t : x.terms()) {
        Rational v = t.coeff;
        const Integer den = t.exponent.get_den();
        Integer base = q;
        if (den != 1) {
            auto root = detail::exact_root(q, den.get_ui());
            if (!root) {
                throw input_error("non-integral exponent " + t.exponent.get_str() + ": q=" + q.get_str() +
                                  " is not a perfect " + den.get_str() + "-th power");
            }
            base = *root;
        }
        v *= rational_pow(Rational(base), t.exponent.get_num().get_si());
        for (int nu : t.factors) {
            v *= Rational(q - 1) / Rational(Integer(rational_pow(Rational(q), nu)) - 1);
        }
        total += v;
    }
    return total;
}

/// Value of the cleared numerator / denominator at M = m.
inline Rational evaluate_cleared(const ClearedForm& form, const Rational& m) {
    auto eval = [&](const LaurentPoly& p) {
        Rational acc = 0;
        for (const auto& [e, c] : p) acc += c * rational_pow(m, e);
        return acc;
    };
    const Rational den = eval(form.denominator_poly());
    if (den == 0) throw division_by_zero();
    return eval(form.numerator) / den;
}

// ---------------------------------------------------------------------------
// Hodge realization: L -> uv.

class HodgeExpr {
public:
    explicit HodgeExpr(MotivicExpr body) : body_(std::move(body)) {}

    const MotivicExpr& body() const noexcept { return body_; }

    /// Coefficients by (uv)-exponent when every denominator cancels.
    std::optional<std::map<Rational, Rational>> polynomial() const {
        const ClearedForm form = body_.canonical().cleared();
        if (form.numerator.empty()) return std::map<Rational, Rational>{};
        const LaurentPoly den = form.denominator_poly();
        // Shift to an ordinary polynomial, divide by the monic denominator.
        const std::int64_t shift = form.numerator.begin()->first;
        const std::int64_t top = form.numerator.rbegin()->first - shift;
        const std::int64_t den_deg = den.rbegin()->first;
        std::vector<Rational> num(static_cast<std::size_t>(top) + 1, Rational(0));
        for (const auto& [e, c] : form.numerator) num[static_cast<std::size_t>(e - shift)] = c;
        if (top < den_deg) {
            if (den_deg == 0) return to_map(num, shift, form.grain);
            return std::nullopt;
        }
        std::vector<Rational> quot(static_cast<std::size_t>(top - den_deg) + 1, Rational(0));
        for (std::int64_t k = top - den_deg; k >= 0; --k) {
            const Rational c = num[static_cast<std::size_t>(k + den_deg)];
            quot[static_cast<std::size_t>(k)] = c;
            if (c == 0) continue;
            for (const auto& [e, dc] : den) num[static_cast<std::size_t>(k + e)] -= c * dc;
        }
        for (const auto& c : num) {
            if (c != 0) return std::nullopt;
        }
        return to_map(quot, shift, form.grain);
    }

    /// u = v = 1 evaluation of the polynomial form, when it exists.
    std::optional<Rational> at_one() const {
        auto poly = polynomial();
        if (!poly) return std::nullopt;
        Rational s = 0;
        for (const auto& [e, c] : *poly) s += c;
        return s;
    }

    /// "1 + uv + (uv)^2" when polynomial, else termwise with rational factors.
    std::string to_string() const {
        if (auto poly = polynomial()) return polynomial_text(*poly);
        const MotivicExpr c = body_.canonical();
        std::string out;
        for (const auto& t : c.terms()) {
            if (!out.empty()) out += t.coeff < 0 ? " - " : " + ";
            else if (t.coeff < 0) out += "-";
            out += Rational(abs(t.coeff)).get_str() + "*(uv)^(" + t.exponent.get_str() + ")";
            for (int nu : t.factors) out += "*(uv-1)/((uv)^" + std::to_string(nu) + "-1)";
        }
        return out.empty() ? "0" : out;
    }

    static std::string polynomial_text(const std::map<Rational, Rational>& poly) {
        std::string out;
        for (const auto& [e, c] : poly) {
            if (c == 0) continue;
            if (!out.empty()) out += c < 0 ? " - " : " + ";
            else if (c < 0) out += "-";
            const Rational mag = abs(c);
            std::string mono;
            if (e == 0) mono = "";
            else if (e == 1) mono = "uv";
            else if (is_integer(e) && e > 0) mono = "(uv)^" + e.get_str();
            else mono = "(uv)^(" + e.get_str() + ")";
            if (mono.empty()) out += mag.get_str();
            else if (mag == 1) out += mono;
            else out += mag.get_str() + "*" + mono;
        }
        return out.empty() ? "0" : out;
    }

private:
    static std::map<Rational, Rational> to_map(const std::vector<Rational>& coeffs, std::int64_t shift, std::int64_t grain) {
        std::map<Rational, Rational> out;
        for (std::size_t i = 0; i < coeffs.size(); ++i) {
            if (coeffs[i] != 0) out[ratio(static_cast<std::int64_t>(i) + shift, grain)] = coeffs[i];
        }
        return out;
    }

    MotivicExpr body_;
};

inline HodgeExpr hodge_realize(const MotivicExpr& x) { return HodgeExpr(x.canonical()); }

/// Laurent-polynomial form when every denominator cancels, else canonical().
inline MotivicExpr simplify(const MotivicExpr& x) {
    const auto poly = HodgeExpr(x.canonical()).polynomial();
    if (!poly) return x.canonical();
    MotivicExpr out;
    for (const auto& [e, c] : *poly) out += MotivicExpr::lpow(e, c);
    return out;
}

// ---------------------------------------------------------------------------
// Text form: "c*L^(p/q)*(L-1)/(L^v-1) + ..."; JSON form
// {grain, terms:[{coeff, exponent:{num,den}, factors:[...]}]}.

inline std::string MotivicExpr::to_string() const {
    const MotivicExpr c = canonical();
    std::string out;
    for (const auto& t : c.terms_) {
        if (!out.empty()) out += t.coeff < 0 ? " - " : " + ";
        else if (t.coeff < 0) out += "-";
        out += Rational(abs(t.coeff)).get_str() + "*L^(" + t.exponent.get_str() + ")";
        for (int nu : t.factors) out += "*(L-1)/(L^" + std::to_string(nu) + "-1)";
    }
    return out.empty() ? "0" : out;
}

namespace detail {

class ExprParser {
public:
    explicit ExprParser(std::string_view text) {
        for (char c : text) {
            if (!std::isspace(static_cast<unsigned char>(c))) s_.push_back(c);
        }
    }

    MotivicExpr parse() {
        if (s_ == "0") return MotivicExpr();
        std::vector<MotivicTerm> terms;
        bool first = true;
        while (pos_ < s_.size() || first) {
            Rational sign = 1;
            if (peek() == '+' || peek() == '-') {
                sign = get() == '-' ? -1 : 1;
            } else if (!first) {
                fail("expected '+' or '-'");
            }
            first = false;
            terms.push_back(term(sign));
        }
        return MotivicExpr(std::move(terms)).canonical();
    }

private:
    MotivicTerm term(const Rational& sign) {
        MotivicTerm t{sign, 0, {}};
        bool have_coeff = false;
        if (std::isdigit(static_cast<unsigned char>(peek()))) {
            t.coeff *= rational();
            have_coeff = true;
        }
        bool need_star = have_coeff;
        bool have_any = have_coeff;
        while (true) {
            const std::size_t save = pos_;
            if (need_star) {
                if (peek() != '*') break;
                ++pos_;
            }
            if (peek() == 'L') {
                ++pos_;
                expect("^(");
                Rational e = signed_rational();
                expect(")");
                t.exponent += e;
            } else if (s_.compare(pos_, 6, "(L-1)/") == 0) {
                pos_ += 6;
                expect("(L^");
                const Rational nu = rational();
                expect("-1)");
                if (!is_integer(nu) || nu < 1) fail("factor exponent must be a positive integer");
                t.factors.push_back(static_cast<int>(nu.get_num().get_si()));
            } else {
                pos_ = save;
                if (need_star) fail("expected 'L^(' or '(L-1)/(L^v-1)' after '*'");
                break;
            }
            need_star = true;
            have_any = true;
        }
        if (!have_any) fail("expected a term");
        return t;
    }

    Rational signed_rational() {
        Rational sign = 1;
        if (peek() == '-' || peek() == '+') sign = get() == '-' ? -1 : 1;
        return sign * rational();
    }

    Rational rational() {
        const std::size_t start = pos_;
        while (pos_ < s_.size() && (std::isdigit(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '/')) ++pos_;
        if (start == pos_) fail("expected a number");
        return parse_rational(s_.substr(start, pos_ - start));
    }

    void expect(std::string_view lit) {
        if (s_.compare(pos_, lit.size(), lit) != 0) fail("expected '" + std::string(lit) + "'");
        pos_ += lit.size();
    }

    char peek() const { return pos_ < s_.size() ? s_[pos_] : '\0'; }
    char get() { return s_[pos_++]; }

    [[noreturn]] void fail(const std::string& msg) const {
        throw input_error("motivic expression parse error at offset " + std::to_string(pos_) + ": " + msg);
    }

    std::string s_;
    std::size_t pos_ = 0;
};

}  // namespace detail

inline MotivicExpr parse_motivic(std::string_view text) { return detail::ExprParser(text).parse(); }

inline nlohmann::json to_json(const MotivicExpr& x) {
    const MotivicExpr c = x.canonical();
    nlohmann::json terms = nlohmann::json::array();
    for (const auto& t : c.terms()) {
        terms.push_back({{"coeff", t.coeff.get_str()},
                         {"exponent", {{"num", t.exponent.get_num().get_si()}, {"den", t.exponent.get_den().get_si()}}},
                         {"factors", t.factors}});
    }
    return {{"grain", c.grain()}, {"terms", terms}};
}

inline MotivicExpr motivic_from_json(const nlohmann::json& j) {
    if (j.is_string()) return parse_motivic(j.get<std::string>());
    if (!j.is_object() || !j.contains("terms")) throw input_error("MotivicExpr JSON must be an object with 'terms'");
    const std::int64_t grain = j.value("grain", std::int64_t{1});
    if (grain < 1) throw input_error("MotivicExpr JSON: grain must be positive");
    std::vector<MotivicTerm> terms;
    for (const auto& jt : j.at("terms")) {
        MotivicTerm t;
        const auto& jc = jt.at("coeff");
        t.coeff = jc.is_string() ? parse_rational(jc.get<std::string>()) : Rational(jc.get<long>());
        const auto& je = jt.at("exponent");
        if (je.is_object()) {
            const long den = je.at("den").get<long>();
            if (den <= 0) throw input_error("MotivicExpr JSON: exponent denominator must be positive");
            t.exponent = Rational(je.at("num").get<long>(), den);
            t.exponent.canonicalize();
        } else if (je.is_string()) {
            t.exponent = parse_rational(je.get<std::string>());
        } else {
            t.exponent = Rational(je.get<long>());
        }
        if (jt.contains("factors")) t.factors = jt.at("factors").get<std::vector<int>>();
        terms.push_back(std::move(t));
    }
    MotivicExpr out(std::move(terms), 1);
    return out.with_grain(grain).canonical();
}

}  // namespace mckay
