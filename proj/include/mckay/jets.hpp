#pragma once

// Point counts of jet schemes over prime fields.
//
// An n-jet is a tuple of polynomials of degree <= n in t over F_q, one per
// ambient variable, on which every equation vanishes mod t^(n+1). The
// coefficient of t^k of an equation only involves jet coefficients of degree
// <= k, so tuples are enumerated degree by degree and a branch is cut as soon
// as some equation has a nonzero coefficient. The result is identical to
// testing every tuple of the full coefficient space.

#include <algorithm>
#include <atomic>
#include <cctype>
#include <cstdint>
#include <functional>
#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <thread>
#include <utility>
#include <vector>

#include "json.hpp"
#include "mckay/correspondence.hpp"
#include "mckay/error.hpp"
#include "mckay/motivic.hpp"
#include "mckay/rational.hpp"

namespace mckay {

struct Monomial {
    std::int64_t coeff = 0;
    std::vector<int> exponents;  ///< one per variable
};

struct IntPolynomial {
    std::vector<Monomial> terms;
};

/// Parses integer polynomials like "x*y - z^2" or "3*x^2*y + 1".
inline IntPolynomial parse_int_polynomial(std::string_view text, const std::vector<std::string>& vars) {
    std::string s;
    for (char c : text) {
        if (!std::isspace(static_cast<unsigned char>(c))) s.push_back(c);
    }
    std::size_t pos = 0;
    auto fail = [&](const std::string& msg) -> void {
        throw input_error("polynomial '" + std::string(text) + "' at offset " + std::to_string(pos) + ": " + msg);
    };
    auto read_int = [&]() {
        const std::size_t start = pos;
        while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) ++pos;
        if (start == pos) fail("expected an integer");
        return std::stoll(s.substr(start, pos - start));
    };
    std::map<std::vector<int>, std::int64_t> merged;
    bool first = true;
    if (s.empty()) fail("empty polynomial");
    while (pos < s.size()) {
        std::int64_t sign = 1;
        if (s[pos] == '+' || s[pos] == '-') {
            sign = s[pos] == '-' ? -1 : 1;
            ++pos;
        } else if (!first) {
            fail("expected '+' or '-'");
        }
        first = false;
        std::int64_t coeff = sign;
        std::vector<int> exps(vars.size(), 0);
        bool need_factor = true;
        while (need_factor) {
            need_factor = false;
            if (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) {
                coeff *= read_int();
            } else {
                std::size_t best = vars.size();
                for (std::size_t v = 0; v < vars.size(); ++v) {
                    if (s.compare(pos, vars[v].size(), vars[v]) == 0 &&
                        (best == vars.size() || vars[v].size() > vars[best].size())) {
                        best = v;
                    }
                }
                if (best == vars.size()) fail("expected a variable or integer");
                pos += vars[best].size();
                int e = 1;
                if (pos < s.size() && s[pos] == '^') {
                    ++pos;
                    e = static_cast<int>(read_int());
                }
                exps[best] += e;
            }
            if (pos < s.size() && s[pos] == '*') {
                ++pos;
                need_factor = true;
            }
        }
        merged[exps] += coeff;
    }
    IntPolynomial p;
    for (auto& [exps, c] : merged) {
        if (c != 0) p.terms.push_back({c, exps});
    }
    return p;
}

inline std::string to_string(const IntPolynomial& p, const std::vector<std::string>& vars) {
    std::string out;
    for (const auto& m : p.terms) {
        if (!out.empty()) out += m.coeff < 0 ? " - " : " + ";
        else if (m.coeff < 0) out += "-";
        const std::int64_t mag = m.coeff < 0 ? -m.coeff : m.coeff;
        std::string mono;
        for (std::size_t v = 0; v < vars.size(); ++v) {
            if (m.exponents[v] == 0) continue;
            if (!mono.empty()) mono += "*";
            mono += vars[v];
            if (m.exponents[v] > 1) mono += "^" + std::to_string(m.exponents[v]);
        }
        if (mono.empty()) out += std::to_string(mag);
        else out += (mag == 1 ? "" : std::to_string(mag) + "*") + mono;
    }
    return out.empty() ? "0" : out;
}

struct JetCaps {
    std::int64_t max_prime = 5;
    std::uint64_t budget = 100'000'000;  ///< coefficient tuples examined per count
    int max_lift_level = 16;
    unsigned threads = 1;
};

struct JetProblem {
    std::vector<std::string> variables;
    std::vector<IntPolynomial> equations;
    std::int64_t q = 3;
    int level = 0;
    bool origin_only = true;
    int dim = -1;  ///< dimension used for normalization; -1 = #variables - #equations

    int effective_dim() const {
        return dim >= 0 ? dim : static_cast<int>(variables.size()) - static_cast<int>(equations.size());
    }
};

inline bool is_prime(std::int64_t q) {
    if (q < 2) return false;
    for (std::int64_t p = 2; p * p <= q; ++p) {
        if (q % p == 0) return false;
    }
    return true;
}

inline std::uint64_t saturating_pow(std::uint64_t base, std::uint64_t e) {
    std::uint64_t out = 1;
    for (std::uint64_t i = 0; i < e; ++i) {
        if (out > UINT64_MAX / base) return UINT64_MAX;
        out *= base;
    }
    return out;
}

/// Full coefficient space of level-`level` jets: q^(m * free coefficients).
inline std::uint64_t nominal_search_space(const JetProblem& p, int level) {
    const auto per_var = static_cast<std::uint64_t>(level + (p.origin_only ? 0 : 1));
    return saturating_pow(static_cast<std::uint64_t>(p.q), per_var * p.variables.size());
}

namespace detail {

// Depth-first enumerator over jet coefficients, one t-degree at a time.
class JetSearch {
public:
    JetSearch(const JetProblem& p, int max_level, std::uint64_t budget, std::atomic<std::uint64_t>& spent)
        : p_(p), q_(p.q), m_(p.variables.size()), max_level_(max_level), budget_(budget), spent_(spent) {
        coeffs_.assign(m_, std::vector<std::int64_t>(static_cast<std::size_t>(max_level) + 1, 0));
        for (std::size_t e = 0; e < p.equations.size(); ++e) {
            for (const auto& mono : p.equations[e].terms) {
                Factored f;
                f.equation = e;
                f.coeff = ((mono.coeff % q_) + q_) % q_;
                for (std::size_t v = 0; v < m_; ++v) {
                    for (int k = 0; k < mono.exponents[v]; ++k) f.vars.push_back(v);
                }
                f.prefix.assign(f.vars.size() + 1, std::vector<std::int64_t>(static_cast<std::size_t>(max_level) + 1, 0));
                f.prefix[0][0] = 1;
                monomials_.push_back(std::move(f));
            }
        }
    }

    const std::vector<std::vector<std::int64_t>>& coeffs() const { return coeffs_; }

    // Calls visit() on each assignment of degrees [from, to] (given fixed
    // lower degrees) that satisfies all equations through t^to. visit returns
    // false to stop. Returns false if stopped early.
    template <class Visit>
    bool enumerate(int from, int to, Visit&& visit, const std::vector<std::int64_t>* first_block = nullptr) {
        if (from > to) return visit();
        const int k = from;
        const bool fixed_zero = p_.origin_only && k == 0;
        std::vector<std::int64_t> digits(m_, 0);
        while (true) {
            if (!first_block || std::find(first_block->begin(), first_block->end(), digits[0]) != first_block->end()) {
                charge();
                for (std::size_t v = 0; v < m_; ++v) coeffs_[v][static_cast<std::size_t>(k)] = digits[v];
                if (satisfied_at(k)) {
                    if (!enumerate(k + 1, to, visit)) return false;
                }
            }
            if (fixed_zero) break;
            std::size_t v = 0;
            while (v < m_ && ++digits[v] == q_) digits[v++] = 0;
            if (v == m_) break;
        }
        for (std::size_t v = 0; v < m_; ++v) coeffs_[v][static_cast<std::size_t>(k)] = 0;
        return true;
    }

private:
    struct Factored {
        std::size_t equation = 0;
        std::int64_t coeff = 0;
        std::vector<std::size_t> vars;                  // variable per factor, with repetition
        std::vector<std::vector<std::int64_t>> prefix;  // prefix[j][k]: coeff of t^k in first j factors
    };

    void charge() {
        if (spent_.fetch_add(1, std::memory_order_relaxed) + 1 > budget_) {
            throw budget_error("jet enumeration exceeded the tuple budget of " + std::to_string(budget_) +
                                   " (full coefficient space at level " + std::to_string(max_level_) + ": " +
                                   std::to_string(nominal_search_space(p_, max_level_)) + ")",
                               nominal_search_space(p_, max_level_));
        }
    }

    // Updates prefix products at degree k and tests every equation's t^k coefficient.
    bool satisfied_at(int k) {
        const auto kk = static_cast<std::size_t>(k);
        auto& value = value_;
        std::fill(value.begin(), value.end(), 0);
        for (auto& f : monomials_) {
            for (std::size_t j = 1; j <= f.vars.size(); ++j) {
                const auto& prev = f.prefix[j - 1];
                const auto& x = coeffs_[f.vars[j - 1]];
                std::int64_t acc = 0;
                for (std::size_t i = 0; i <= kk; ++i) {
                    if (prev[i] != 0 && x[kk - i] != 0) acc += prev[i] * x[kk - i];
                }
                f.prefix[j][kk] = acc % q_;
            }
            value[f.equation] += f.coeff * f.prefix[f.vars.size()][kk];
        }
        for (auto v : value) {
            if (v % q_ != 0) return false;
        }
        return true;
    }

    const JetProblem& p_;
    std::int64_t q_;
    std::size_t m_;
    int max_level_;
    std::uint64_t budget_;
    std::atomic<std::uint64_t>& spent_;
    std::vector<std::vector<std::int64_t>> coeffs_;
    std::vector<Factored> monomials_;
    std::vector<std::int64_t> value_ = std::vector<std::int64_t>(p_.equations.size(), 0);
};

inline void check_problem(const JetProblem& p, const JetCaps& caps) {
    if (!is_prime(p.q)) throw input_error("jet problem: q=" + std::to_string(p.q) + " is not prime");
    if (p.q > caps.max_prime) {
        throw budget_error("jet problem: q=" + std::to_string(p.q) + " exceeds the prime cap " +
                               std::to_string(caps.max_prime),
                           static_cast<std::uint64_t>(p.q));
    }
    if (p.level < 0) throw input_error("jet problem: level must be >= 0");
    if (p.variables.empty()) throw input_error("jet problem: no variables");
    for (const auto& eq : p.equations) {
        for (const auto& m : eq.terms) {
            if (m.exponents.size() != p.variables.size()) throw input_error("jet problem: monomial arity mismatch");
        }
    }
}

}  // namespace detail

/// Coefficient arrays (degree 0..level) of the variables of one jet.
using JetPoint = std::vector<std::vector<std::int64_t>>;

/// Calls visit(jet) for every n-jet (n = p.level) that extends to a
/// lift_level-jet. Work is split over the values of the first variable's
/// lowest free coefficient when caps.threads > 1; visit must then be
/// thread-safe. Returns the number of tuples examined.
inline std::uint64_t for_each_liftable_jet(const JetProblem& p, int lift_level, const JetCaps& caps,
                                           const std::function<void(const JetPoint&)>& visit) {
    detail::check_problem(p, caps);
    if (lift_level < p.level) throw input_error("lift level must be >= level");
    std::atomic<std::uint64_t> spent{0};
    auto run = [&](const std::vector<std::int64_t>* block) {
        detail::JetSearch search(p, lift_level, caps.budget, spent);
        const int first = p.origin_only ? 1 : 0;
        auto on_level_jet = [&]() {
            JetPoint jet(p.variables.size());
            for (std::size_t v = 0; v < jet.size(); ++v) {
                jet[v].assign(search.coeffs()[v].begin(), search.coeffs()[v].begin() + p.level + 1);
            }
            bool lifts = false;
            search.enumerate(p.level + 1, lift_level, [&]() {
                lifts = true;
                return false;
            });
            if (lifts) visit(jet);
            return true;
        };
        if (p.origin_only && p.level >= 1) {
            // Degree 0 is forced to zero; split on degree 1.
            search.enumerate(0, 0, [&]() { return search.enumerate(first, p.level, on_level_jet, block); });
        } else {
            search.enumerate(0, p.level, on_level_jet, p.level >= first ? block : nullptr);
        }
    };
    const unsigned threads = std::max(1u, std::min<unsigned>(caps.threads, static_cast<unsigned>(p.q)));
    if (threads == 1 || p.level < (p.origin_only ? 1 : 0)) {
        run(nullptr);
        return spent.load();
    }
    std::vector<std::vector<std::int64_t>> blocks(threads);
    for (std::int64_t a = 0; a < p.q; ++a) blocks[static_cast<std::size_t>(a) % threads].push_back(a);
    std::vector<std::exception_ptr> errors(threads);
    {
        std::vector<std::jthread> workers;
        for (unsigned t = 0; t < threads; ++t) {
            workers.emplace_back([&, t] {
                try {
                    run(&blocks[t]);
                } catch (...) {
                    errors[t] = std::current_exception();
                }
            });
        }
    }
    for (auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }
    return spent.load();
}

/// Number of n-jets (n = p.level) on which every equation vanishes mod t^(n+1).
inline std::uint64_t count_jets(const JetProblem& p, const JetCaps& caps = {}) {
    std::atomic<std::uint64_t> total{0};
    for_each_liftable_jet(p, p.level, caps, [&](const JetPoint&) { total.fetch_add(1, std::memory_order_relaxed); });
    return total.load();
}

/// Size of the image of the lift_level-jets under truncation to level p.level.
inline std::uint64_t count_liftable_jets(const JetProblem& p, int lift_level, const JetCaps& caps = {}) {
    std::atomic<std::uint64_t> total{0};
    for_each_liftable_jet(p, lift_level, caps, [&](const JetPoint&) { total.fetch_add(1, std::memory_order_relaxed); });
    return total.load();
}

struct Saturation {
    bool converged = false;
    std::uint64_t count = 0;
    int stable_m = 0;
    std::vector<std::uint64_t> history;  ///< liftable counts for m = level, level+1, ...
};

/// Raises the lift level from p.level until two consecutive counts agree.
/// Stops with converged = false once cap_m is reached.
inline Saturation saturate(const JetProblem& p, int cap_m, const JetCaps& caps = {}) {
    Saturation s;
    for (int m = p.level; m <= cap_m; ++m) {
        const std::uint64_t c = count_liftable_jets(p, m, caps);
        if (!s.history.empty() && c > s.history.back()) {
            throw internal_error("liftable jet counts increased with the lift level");
        }
        s.history.push_back(c);
        if (s.history.size() >= 2 && s.history[s.history.size() - 2] == c) {
            s.converged = true;
            s.count = c;
            s.stable_m = m;
            return s;
        }
    }
    return s;
}

// ---------------------------------------------------------------------------
// Count tables

struct JetCountRow {
    int level = 0;
    int lift_level = 0;
    bool converged = false;
    std::uint64_t raw_count = 0;
    std::uint64_t liftable_count = 0;
    std::map<std::int64_t, std::uint64_t> per_class;  ///< e -> count; key 0 = indeterminate
    Rational normalized;                              ///< liftable * q^(-dim (level+1))
};

struct JetCountTable {
    JetProblem problem;
    std::optional<std::int64_t> partition_d;
    std::vector<JetCountRow> rows;
};

/// A^3 model uv = w^d of A^2 / Z_d, variables (u, v, w), arcs at the origin.
inline JetProblem cyclic_surface_problem(std::int64_t d, std::int64_t q, int level) {
    JetProblem p;
    p.variables = {"u", "v", "w"};
    p.equations = {parse_int_polynomial("u*v - w^" + std::to_string(d), p.variables)};
    p.q = q;
    p.level = level;
    p.origin_only = true;
    p.dim = 2;
    return p;
}

inline Rational normalize_count(std::uint64_t count, std::int64_t q, int dim, int level) {
    return Rational(Integer(std::to_string(count))) / rational_pow(Rational(q), static_cast<std::int64_t>(dim) * (level + 1));
}

/// One table row: raw count, saturated liftable count and, when
/// partition_d is set, the liftable jets bucketed by arc class.
inline JetCountRow jet_row(const JetProblem& p, int cap_m, const JetCaps& caps,
                           std::optional<std::int64_t> partition_d = std::nullopt) {
    JetCountRow row;
    row.level = p.level;
    row.raw_count = count_jets(p, caps);
    const Saturation s = saturate(p, cap_m, caps);
    row.converged = s.converged;
    row.lift_level = s.converged ? s.stable_m : cap_m;
    row.liftable_count = s.converged ? s.count : s.history.back();
    row.normalized = normalize_count(row.liftable_count, p.q, p.effective_dim(), p.level);
    if (partition_d) {
        std::mutex mutex;
        for_each_liftable_jet(p, row.lift_level, caps, [&](const JetPoint& jet) {
            auto to_jet = [](const std::vector<std::int64_t>& c) {
                Jet j;
                for (auto x : c) j.emplace_back(static_cast<long>(x));
                return j;
            };
            const ArcClass e = classify_arc_cyclic(*partition_d, to_jet(jet[0]), to_jet(jet[1]), to_jet(jet[2]),
                                                   static_cast<std::size_t>(p.level), p.q);
            std::lock_guard lock(mutex);
            ++row.per_class[e.value_or(0)];
        });
    }
    return row;
}

/// Partition of the saturated liftable n-jets of uv = w^d by arc class.
inline std::map<std::int64_t, std::uint64_t> class_partition_counts(std::int64_t d, std::int64_t q, int level,
                                                                    const JetCaps& caps = {}) {
    return jet_row(cyclic_surface_problem(d, q, level), caps.max_lift_level, caps, d).per_class;
}

// ---------------------------------------------------------------------------
// JSON. Problem: {variables, equations, q, level, origin_only, dim?,
// partition_d?}; table rows carry counts as integers and normalized values
// as "p/q" strings; per_class uses "indeterminate" for the undecided bucket.

inline nlohmann::json to_json(const JetProblem& p) {
    nlohmann::json eqs = nlohmann::json::array();
    for (const auto& e : p.equations) eqs.push_back(to_string(e, p.variables));
    nlohmann::json j{{"variables", p.variables}, {"equations", eqs}, {"q", p.q}, {"level", p.level},
                     {"origin_only", p.origin_only}, {"dim", p.effective_dim()}};
    return j;
}

inline JetProblem jet_problem_from_json(const nlohmann::json& j) {
    try {
        JetProblem p;
        p.variables = j.at("variables").get<std::vector<std::string>>();
        for (const auto& v : p.variables) {
            if (v.empty() || !std::all_of(v.begin(), v.end(), [](char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; })) {
                throw input_error("jet problem: variable names must be alphabetic, got '" + v + "'");
            }
        }
        for (const auto& e : j.at("equations")) p.equations.push_back(parse_int_polynomial(e.get<std::string>(), p.variables));
        p.q = j.value("q", std::int64_t{3});
        p.level = j.value("level", 0);
        p.origin_only = j.value("origin_only", true);
        p.dim = j.value("dim", -1);
        return p;
    } catch (const nlohmann::json::exception& e) {
        throw input_error(std::string("JetProblem JSON: ") + e.what());
    }
}

inline nlohmann::json to_json(const JetCountRow& r) {
    nlohmann::json per_class = nlohmann::json::object();
    for (const auto& [e, c] : r.per_class) per_class[e == 0 ? "indeterminate" : std::to_string(e)] = c;
    return {{"level", r.level},         {"lift_level", r.lift_level},   {"converged", r.converged},
            {"raw_count", r.raw_count}, {"liftable_count", r.liftable_count}, {"per_class_counts", per_class},
            {"normalized", r.normalized.get_str()}};
}

inline nlohmann::json to_json(const JetCountTable& t) {
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& r : t.rows) rows.push_back(to_json(r));
    nlohmann::json problem = to_json(t.problem);
    if (t.partition_d) problem["partition_d"] = *t.partition_d;
    return {{"problem", problem}, {"table", rows}};
}

inline std::string to_text(const JetCountTable& t) {
    std::string out = "q=" + std::to_string(t.problem.q) + ", dim " + std::to_string(t.problem.effective_dim()) + "\n";
    out += "level  lift  raw        liftable   normalized";
    if (t.partition_d) out += "   per-class (e:count, ?=indeterminate)";
    out += "\n";
    auto pad = [](std::string s, std::size_t w) {
        s.resize(std::max(s.size(), w), ' ');
        return s;
    };
    for (const auto& r : t.rows) {
        out += pad(std::to_string(r.level), 7) + pad(std::to_string(r.lift_level) + (r.converged ? "" : "!"), 6) +
               pad(std::to_string(r.raw_count), 11) + pad(std::to_string(r.liftable_count), 11) +
               pad(r.normalized.get_str(), 13);
        if (t.partition_d) {
            for (const auto& [e, c] : r.per_class) out += "  " + (e == 0 ? std::string("?") : std::to_string(e)) + ":" + std::to_string(c);
        }
        out += "\n";
    }
    return out;
}

}  // namespace mckay
