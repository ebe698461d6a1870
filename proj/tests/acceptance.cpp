// Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any FAIL.

#include <chrono>
#include <functional>
#include <iomanip>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "support.hpp"

using namespace mckay;

namespace {

struct Outcome {
    bool ok = true;
    std::string detail;
};

// Records the first failure and keeps going.
struct Checker {
    Outcome out;
    std::ostringstream notes;

    void require(bool cond, const std::string& what) {
        if (!cond && out.ok) {
            out.ok = false;
            out.detail = what;
        }
    }
    Outcome finish() {
        if (out.ok) out.detail = notes.str();
        return out;
    }
};

std::vector<std::string> sl2_catalog() { return catalog_ids(12, 8); }

Outcome mckay_identity_suite() {
    Checker c;
    int count = 0;
    for (const auto& id : sl2_catalog()) {
        const auto entry = ade_catalog(id);
        const McKayCheck check = check_mckay_identity(entry.resolution, generate_group(entry.group));
        c.require(check.holds, id + ": " + check.lhs.to_string() + " != " + check.rhs.to_string());
        ++count;
    }
    c.notes << count << " catalog entries";
    return c.finish();
}

Outcome euler_suite() {
    Checker c;
    auto ids = sl2_catalog();
    ids.push_back("cyclic:3:1,1,1");
    for (const auto& id : ids) {
        const auto entry = ade_catalog(id);
        const Group g = generate_group(entry.group);
        const auto classes = static_cast<long>(conjugacy_classes(g).size());
        const Rational eu = euler_realize(crepant_fiber_class(entry.resolution));
        c.require(eu == classes, id + ": Eu = " + eu.get_str() + ", #Conj = " + std::to_string(classes));
        if (id.starts_with("A:")) c.require(eu == std::stol(id.substr(2)), id + ": Eu != d");
    }
    const std::vector<std::tuple<std::string, std::size_t, long>> binary = {
        {"E6", 24, 7}, {"E7", 48, 8}, {"E8", 120, 9}};
    for (const auto& [id, order, classes] : binary) {
        const auto entry = ade_catalog(id);
        const Group g = generate_group(entry.group);
        c.require(g.order() == order, id + ": order " + std::to_string(g.order()));
        c.require(euler_realize(crepant_fiber_class(entry.resolution)) == classes, id + ": Euler number");
    }
    c.notes << "2T=7 2O=8 2I=9, orders 24/48/120";
    return c.finish();
}

Outcome hodge_suite() {
    Checker c;
    for (const auto& id : sl2_catalog()) {
        const Group g = generate_group(ade_catalog(id).group);
        const long k = static_cast<long>(conjugacy_classes(g).size());
        const auto poly = hodge_realize(fiber_sum(g)).polynomial();
        std::map<Rational, Rational> want{{Rational(0), Rational(1)}, {Rational(1), Rational(k - 1)}};
        c.require(poly && *poly == want, id + ": " + hodge_realize(fiber_sum(g)).to_string());
    }
    const Group z3 = generate_group(group_catalog("cyclic:3:1,1,1"));
    const std::string h = hodge_realize(fiber_sum(z3)).to_string();
    c.require(h == "1 + uv + (uv)^2", "Z3(1,1,1): " + h);
    c.notes << "Z3(1,1,1): " << h;
    return c.finish();
}

Outcome weight_suite() {
    Checker c;
    std::vector<std::string> ids;
    for (const auto& id : sl2_catalog()) ids.push_back(ade_catalog(id).group_id);
    for (const std::string extra : {"cyclic:3:1,1,1", "cyclic:3:1,1", "cyclic:4:1,2,1", "cyclic:5:1,2"}) ids.push_back(extra);
    std::size_t elements = 0;
    for (const auto& id : ids) {
        const Group g = generate_group(group_catalog(id));
        const auto n = static_cast<long>(g.dimension());
        const std::int64_t expo = g.exponent();
        std::vector<Rational> w(g.order());
        for (std::size_t i = 0; i < g.order(); ++i) w[i] = weight(g, i);
        c.require(w[0] == n, id + ": w(id) != n");
        for (std::size_t i = 0; i < g.order(); ++i) {
            ++elements;
            if (g.mode() == GroupMode::SL) {
                c.require(is_integer(w[i]) && w[i] >= 1 && w[i] <= n, id + ": SL weight out of range");
            }
            const CycMatrix shifted = g.element(i) - CycMatrix::identity(g.dimension(), g.conductor());
            c.require(w[i] + w[g.inverse(i)] == n + static_cast<long>(kernel_dimension(shifted)),
                      id + ": w(g) + w(g^-1) != n + dim ker");
            c.require(weight(g, i, expo) == w[i], id + ": weight depends on d");
        }
        for (const auto& cls : conjugacy_classes(g)) {
            for (auto m : cls.members) c.require(w[m] == cls.weight, id + ": weight not a class function");
        }
    }
    c.notes << ids.size() << " groups, " << elements << " elements";
    return c.finish();
}

Outcome ring_norm_suite() {
    Checker c;
    std::mt19937 rng(20240517);
    for (int i = 0; i < 1000; ++i) {
        const MotivicExpr a = testsupport::random_expr(rng), b = testsupport::random_expr(rng),
                          x = testsupport::random_expr(rng);
        const std::string tag = "triple " + std::to_string(i);
        c.require(expr_eq((a + b) + x, a + (b + x)), tag + ": + associativity");
        c.require(expr_eq(a + b, b + a), tag + ": + commutativity");
        c.require(expr_eq((a * b) * x, a * (b * x)), tag + ": * associativity");
        c.require(expr_eq(a * b, b * a), tag + ": * commutativity");
        c.require(expr_eq(a * (b + x), a * b + a * x), tag + ": distributivity");
        c.require(expr_eq(a + MotivicExpr(), a) && expr_eq(a * MotivicExpr::constant(1), a), tag + ": identities");
        c.require((a - a).is_zero(), tag + ": additive inverse");
        c.require(norm(a + b) <= max(norm(a), norm(b)), tag + ": ultrametric");
        c.require(norm(a * b) <= norm(a) * norm(b), tag + ": submultiplicative");
        for (const auto& e : {a, b, x}) {
            if (auto h = hodge_realize(e).at_one()) c.require(*h == euler_realize(e), tag + ": euler != hodge(1,1)");
            c.require(euler_realize(e) == testsupport::eval_at_one(e), tag + ": euler limit");
            c.require(point_count_realize(e, Integer(64)) == testsupport::eval_at_sixth_power(e, 2),
                      tag + ": point count at q = 64");
        }
    }
    c.notes << "1000 triples";
    return c.finish();
}

Outcome jet_suite() {
    Checker c;
    JetCaps caps;
    caps.threads = std::max(1u, std::min(3u, std::thread::hardware_concurrency()));
    const Rational target = point_count_realize(MotivicExpr::lpow(-1) + MotivicExpr::lpow(-2), 3);
    c.require(target == ratio(4, 9), "target value " + target.get_str());
    std::vector<Rational> residuals;
    for (int n = 1; n <= 4; ++n) {
        const JetProblem p = cyclic_surface_problem(2, 3, n);
        const Saturation s = saturate(p, 2 * n + 4, caps);
        c.require(s.converged, "n=" + std::to_string(n) + " did not saturate");
        if (n == 1) c.require(s.count == 9, "n=1 liftable count " + std::to_string(s.count));
        const Rational normalized = normalize_count(s.count, 3, 2, n);
        residuals.push_back(abs(normalized - target));
        c.notes << "n=" << n << ": " << s.count << " at m=" << s.stable_m << " -> " << normalized.get_str() << "; ";
    }
    for (std::size_t i = 1; i < residuals.size(); ++i) {
        c.require(residuals[i] <= residuals[i - 1], "residual increased at n=" + std::to_string(i + 1));
    }
    c.notes << "residual " << residuals.back().get_str();
    return c.finish();
}

Outcome arc_suite() {
    Checker c;
    std::mt19937 rng(77);
    for (std::int64_t d : {2, 3, 4}) {
        for (int i = 0; i < 100; ++i) {
            const auto arc = testsupport::random_lifted_arc(rng, d, 16);
            const ArcClass e = classify_arc_cyclic(d, arc.u, arc.v, arc.w, 16);
            c.require(e && *e == arc.e, "d=" + std::to_string(d) + " sample " + std::to_string(i) + ": expected e=" +
                                            std::to_string(arc.e));
        }
    }
    c.notes << "300 lifted arcs";
    return c.finish();
}

Outcome gl_suite() {
    Checker c;
    const MotivicExpr s = orbifold_sum(generate_group(group_catalog("cyclic:3:1,1")));
    const MotivicExpr want =
        MotivicExpr::lpow(ratio(-2, 3)) + MotivicExpr::lpow(ratio(-4, 3)) + MotivicExpr::lpow(-2);
    c.require(expr_eq(s, want), "orbifold sum " + s.to_string());
    for (const auto& t : s.terms()) c.require(3 % t.exponent.get_den() == 0, "exponent " + t.exponent.get_str());
    c.notes << s.to_string();
    return c.finish();
}

}  // namespace

int main() {
    struct Criterion {
        int id;
        std::string name;
        double limit_seconds;  // 0 = none
        std::function<Outcome()> run;
    };
    const std::vector<Criterion> criteria = {
        {1, "McKay identity over the ADE catalog", 60, mckay_identity_suite},
        {2, "Euler number of the crepant fiber equals #Conj", 0, euler_suite},
        {3, "Hodge realization of the fiber sum", 0, hodge_suite},
        {4, "weight function properties", 10, weight_suite},
        {5, "ring axioms, norm and realizations", 0, ring_norm_suite},
        {6, "jet oracle on A_1 at q = 3", 300, jet_suite},
        {7, "arc classification against fractional lifts", 0, arc_suite},
        {8, "GL orbifold sum for Z_3(1,1)", 0, gl_suite},
    };
    int failures = 0;
    for (const auto& cr : criteria) {
        const auto start = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = cr.run();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        if (o.ok && cr.limit_seconds > 0 && secs > cr.limit_seconds) {
            o = {false, "took " + std::to_string(secs) + " s, limit " + std::to_string(cr.limit_seconds) + " s"};
        }
        if (!o.ok) ++failures;
        std::cout << (o.ok ? "PASS" : "FAIL") << "  criterion " << cr.id << ": " << cr.name << " (" << std::fixed
                  << std::setprecision(2) << secs << " s) " << o.detail << "\n";
    }
    return failures == 0 ? 0 : 1;
}
