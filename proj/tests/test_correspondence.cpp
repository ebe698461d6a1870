#include <random>

#include <gtest/gtest.h>

#include "support.hpp"

using namespace mckay;

namespace {

MotivicExpr L(const Rational& a) { return MotivicExpr::lpow(a); }

Group catalog_group(const std::string& id) { return generate_group(group_catalog(id)); }

Jet jet(std::initializer_list<long> cs) {
    Jet out;
    for (long c : cs) out.emplace_back(c);
    return out;
}

}  // namespace

TEST(Correspondence, OrbifoldSumExamples) {
    EXPECT_TRUE(expr_eq(orbifold_sum(catalog_group("cyclic:2")), L(-1) + L(-2)));
    EXPECT_TRUE(expr_eq(orbifold_sum(catalog_group("cyclic:3:1,1,1")), L(-1) + L(-2) + L(-3)));
    EXPECT_TRUE(expr_eq(orbifold_sum(catalog_group("trivial:2")), L(-2)));
}

TEST(Correspondence, FiberSumExamples) {
    EXPECT_TRUE(expr_eq(fiber_sum(catalog_group("cyclic:3:1,1,1")), MotivicExpr::polynomial({1, 1, 1})));
    for (long d = 2; d <= 10; ++d) {
        EXPECT_TRUE(expr_eq(fiber_sum(catalog_group("cyclic:" + std::to_string(d))), MotivicExpr::polynomial({1, d - 1})));
    }
    EXPECT_TRUE(expr_eq(fiber_sum(catalog_group("trivial:3")), MotivicExpr::constant(1)));
}

TEST(Correspondence, PerClassMeasure) {
    const Group g = catalog_group("cyclic:2");
    EXPECT_TRUE(expr_eq(per_class_measure(g, g.element(0)), L(-2)));
    EXPECT_TRUE(expr_eq(per_class_measure(g, g.element(1)), L(-1)));
    const Group t = catalog_group("binary-tetrahedral");
    for (const auto& c : conjugacy_classes(t)) {
        for (auto m : c.members) EXPECT_TRUE(expr_eq(per_class_measure(t, t.element(m)), L(-c.weight)));
    }
}

TEST(Correspondence, GlOrbifoldSum) {
    const MotivicExpr s = orbifold_sum(catalog_group("cyclic:3:1,1"));
    EXPECT_TRUE(expr_eq(s, L(ratio(-2, 3)) + L(ratio(-4, 3)) + L(-2)));
    EXPECT_EQ(s.grain(), 3);
    for (const auto& t : s.terms()) EXPECT_EQ(3 % t.exponent.get_den(), 0);
}

TEST(Correspondence, ClassifyExamples) {
    EXPECT_EQ(classify_arc_cyclic(2, jet({0, 1}), jet({0, 1}), jet({0, 1}), 2), 1);
    EXPECT_EQ(classify_arc_cyclic(2, jet({0, 0, 1}), jet({0, 0, 0, 0, 1}), jet({0, 0, 0, 1}), 6), 2);
    EXPECT_EQ(classify_arc_cyclic(3, jet({0, 0, 0, 0, 1}), jet({0, 0, 1}), jet({0, 0, 1}), 6), 1);
    // u invisible at this truncation
    EXPECT_EQ(classify_arc_cyclic(2, jet({0, 0, 1}), jet({0, 0, 1}), jet({0, 1}), 1), std::nullopt);
}

TEST(Correspondence, ClassifyErrors) {
    EXPECT_THROW(classify_arc_cyclic(2, jet({1}), jet({0}), jet({0}), 2), input_error);
    EXPECT_THROW(classify_arc_cyclic(2, jet({0, 1}), jet({0, 1}), jet({0, 0, 1}), 2), input_error);
    EXPECT_THROW(classify_arc_cyclic(1, jet({0}), jet({0}), jet({0}), 2), input_error);
}

TEST(Correspondence, ClassifyModularCoefficients) {
    // 3 = 0 mod 3: u = 3t + t^2 has ord 2 over F_3
    EXPECT_EQ(classify_arc_cyclic(2, jet({0, 3, 1}), jet({0, 0, 0}), jet({0, 0, 0}), 2, 3), 2);
}

TEST(Correspondence, ClassifyMatchesFractionalLift) {
    std::mt19937 rng(41);
    for (std::int64_t d : {2, 3, 4, 5}) {
        for (int i = 0; i < 100; ++i) {
            const auto arc = testsupport::random_lifted_arc(rng, d, 16);
            const ArcClass e = classify_arc_cyclic(d, arc.u, arc.v, arc.w, 16);
            ASSERT_TRUE(e.has_value());
            EXPECT_EQ(*e, arc.e) << "d=" << d;
        }
    }
}

TEST(Correspondence, TruncationRefinementIsConsistent) {
    std::mt19937 rng(43);
    for (std::int64_t d : {2, 3, 4}) {
        for (int i = 0; i < 50; ++i) {
            const auto arc = testsupport::random_lifted_arc(rng, d, 14);
            const std::size_t visible = testsupport::visible_order(arc);
            for (std::size_t n = 1; n <= 14; ++n) {
                const ArcClass e = classify_arc_cyclic(d, arc.u, arc.v, arc.w, n);
                if (n < visible) EXPECT_FALSE(e.has_value());
                else EXPECT_EQ(e, arc.e);
            }
        }
    }
}

TEST(Correspondence, PullbackOrderIsWeight) {
    for (const std::string id : {"cyclic:2", "cyclic:5", "cyclic:3:1,1", "cyclic:3:1,1,1", "cyclic:4:1,2,1",
                                 "cyclic:6:1,2,3"}) {
        const Group g = catalog_group(id);
        const auto d = static_cast<long>(g.order());
        for (std::size_t i = 0; i < g.order(); ++i) {
            std::vector<Rational> powers;
            for (auto e : eigen_exponents(g, i)) powers.push_back(ratio(e, d));
            EXPECT_EQ(volume_form_pullback_order(powers), weight(g, i)) << id;
        }
    }
}

TEST(Correspondence, ReportJson) {
    const McKayReport r = analyze_group(catalog_group("cyclic:2"));
    EXPECT_EQ(r.euler, 2);
    EXPECT_EQ(r.hodge, "1 + uv");
    const auto j = to_json(r);
    EXPECT_EQ(j.at("group").at("classes"), 2);
    EXPECT_EQ(j.at("euler"), "2");
    EXPECT_TRUE(expr_eq(motivic_from_json(j.at("measure_sum")), L(-1) + L(-2)));
}
