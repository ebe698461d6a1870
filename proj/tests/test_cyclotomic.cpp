#include <complex>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include "mckay/cyclotomic.hpp"

using namespace mckay;

namespace {

// Independent oracle: evaluate at exp(2 pi i / d) in floating point.
std::complex<double> approx(const CycNum& x) {
    const double arg = 2 * std::numbers::pi / static_cast<double>(x.conductor());
    std::complex<double> out = 0;
    for (std::size_t k = 0; k < x.coeffs().size(); ++k) {
        out += x.coeffs()[k].get_d() * std::polar(1.0, arg * static_cast<double>(k));
    }
    return out;
}

CycMatrix from_entries(std::size_t n, std::int64_t conductor, const std::vector<CycNum>& entries) {
    CycMatrix m(n, n, conductor);
    for (std::size_t k = 0; k < entries.size(); ++k) m(k / n, k % n) = entries[k].embed(conductor);
    return m;
}

bool close(std::complex<double> a, std::complex<double> b) { return std::abs(a - b) < 1e-9 * (1 + std::abs(b)); }

CycNum random_cyc(std::mt19937& rng, std::int64_t d) {
    std::uniform_int_distribution<long> num(-6, 6), den(1, 4);
    std::vector<Rational> poly(static_cast<std::size_t>(euler_phi(d)) + 2);
    for (auto& c : poly) c = Rational(num(rng), den(rng));
    for (auto& c : poly) c.canonicalize();
    return CycNum::from_polynomial(d, poly);
}

}  // namespace

TEST(Cyclotomic, PrimitiveRootExamples) {
    EXPECT_EQ(CycNum::primitive_root(1), CycNum(1, 1));
    EXPECT_EQ(CycNum::primitive_root(2), CycNum(2, -1));
    const CycNum i = CycNum::primitive_root(4);
    EXPECT_EQ(i * i, CycNum(4, -1));
    EXPECT_EQ(i * i + CycNum(4, 1), CycNum(4));
}

TEST(Cyclotomic, ArithmeticExamples) {
    const CycNum z = CycNum::primitive_root(3);
    EXPECT_EQ(z + z * z, CycNum(3, -1));
    const CycNum a = CycNum::from_polynomial(5, std::vector<Rational>{Rational(1, 2), 3, -1});
    EXPECT_EQ(a * CycNum(5, 1), a);
}

TEST(Cyclotomic, PolynomialDegrees) {
    for (std::int64_t d = 1; d <= 60; ++d) {
        EXPECT_EQ(static_cast<std::int64_t>(cyclotomic_polynomial(d).size()) - 1, euler_phi(d)) << d;
    }
    // Phi_6 = x^2 - x + 1
    const auto p6 = cyclotomic_polynomial(6);
    ASSERT_EQ(p6.size(), 3u);
    EXPECT_EQ(p6[0], 1);
    EXPECT_EQ(p6[1], -1);
    EXPECT_EQ(p6[2], 1);
}

TEST(Cyclotomic, RootsOfUnity) {
    for (std::int64_t d : {1, 2, 3, 4, 5, 6, 8, 10, 12, 15, 20, 24, 30, 60, 120}) {
        const CycNum z = CycNum::primitive_root(d);
        EXPECT_EQ(z.pow(d), CycNum(d, 1)) << d;
        for (std::int64_t k = 1; k < d; ++k) EXPECT_NE(z.pow(k), CycNum(d, 1)) << d << " " << k;
        if (d > 1) {
            CycNum sum(d);
            for (std::int64_t k = 0; k < d; ++k) sum = sum + z.pow(k);
            EXPECT_TRUE(sum.is_zero()) << d;
        }
        EXPECT_EQ(z.pow(-1) * z, CycNum(d, 1));
    }
}

TEST(Cyclotomic, FieldAxiomsAgainstComplexOracle) {
    std::mt19937 rng(7);
    for (std::int64_t d : {3, 4, 5, 7, 8, 9, 12, 15, 24}) {
        for (int trial = 0; trial < 30; ++trial) {
            const CycNum a = random_cyc(rng, d), b = random_cyc(rng, d), c = random_cyc(rng, d);
            EXPECT_TRUE(close(approx(a + b), approx(a) + approx(b)));
            EXPECT_TRUE(close(approx(a * b), approx(a) * approx(b)));
            EXPECT_EQ((a + b) + c, a + (b + c));
            EXPECT_EQ(a * b, b * a);
            EXPECT_EQ((a * b) * c, a * (b * c));
            EXPECT_EQ(a * (b + c), a * b + a * c);
            EXPECT_TRUE((a - a).is_zero());
            if (!a.is_zero()) {
                EXPECT_EQ(a * a.inverse(), CycNum(d, 1));
                EXPECT_EQ((b / a) * a, b);
                EXPECT_TRUE(close(approx(a.inverse()), 1.0 / approx(a)));
            }
        }
    }
}

TEST(Cyclotomic, DivisionByZero) {
    EXPECT_THROW(CycNum(5).inverse(), division_by_zero);
}

TEST(Cyclotomic, MixedConductorsUnify) {
    const CycNum z3 = CycNum::primitive_root(3), z4 = CycNum::primitive_root(4);
    const CycNum p = z3 * z4;
    EXPECT_EQ(p.conductor(), 12);
    EXPECT_TRUE(close(approx(p), approx(z3) * approx(z4)));
    EXPECT_EQ(p, CycNum::root_power(12, 7));
}

TEST(Cyclotomic, EmbedRestrictRoundTrip) {
    std::mt19937 rng(11);
    for (auto [d, big] : std::vector<std::pair<std::int64_t, std::int64_t>>{{3, 12}, {4, 24}, {5, 20}, {8, 24}, {6, 30}}) {
        for (int trial = 0; trial < 10; ++trial) {
            const CycNum a = random_cyc(rng, d);
            const CycNum e = a.embed(big);
            EXPECT_EQ(e.conductor(), big);
            EXPECT_TRUE(close(approx(e), approx(a)));
            const auto back = e.restrict_to(d);
            ASSERT_TRUE(back.has_value());
            EXPECT_EQ(*back, a);
        }
    }
    // xi_12 is not in Q(xi_4)
    EXPECT_FALSE(CycNum::primitive_root(12).restrict_to(4).has_value());
    // but xi_12^3 is
    EXPECT_EQ(*CycNum::root_power(12, 3).restrict_to(4), CycNum::primitive_root(4));
}

TEST(Cyclotomic, KernelDimensionExamples) {
    const CycMatrix zero = CycMatrix::diagonal(std::vector<CycNum>{CycNum(1), CycNum(1)});
    EXPECT_EQ(kernel_dimension(zero), 2u);
    EXPECT_EQ(kernel_dimension(CycMatrix::identity(3, 1)), 0u);
    const CycNum z = CycNum::primitive_root(3);
    const CycMatrix m = CycMatrix::diagonal(std::vector<CycNum>{z - z, z * z - z});
    EXPECT_EQ(kernel_dimension(m), 1u);
}

TEST(Cyclotomic, RankNullity) {
    std::mt19937 rng(3);
    const CycNum z = CycNum::primitive_root(5);
    for (int trial = 0; trial < 20; ++trial) {
        // rank-deficient by construction: third row = row0 * z + row1
        std::vector<CycNum> r0, r1;
        for (int c = 0; c < 3; ++c) {
            r0.push_back(random_cyc(rng, 5));
            r1.push_back(random_cyc(rng, 5));
        }
        std::vector<CycNum> entries = r0;
        entries.insert(entries.end(), r1.begin(), r1.end());
        for (int c = 0; c < 3; ++c) entries.push_back(r0[c] * z + r1[c]);
        const CycMatrix m = from_entries(3, 5, entries);
        EXPECT_LE(m.rank(), 2u);
        EXPECT_EQ(m.rank() + kernel_dimension(m), 3u);
        EXPECT_TRUE(m.determinant().is_zero());
    }
}

TEST(Cyclotomic, MatrixInverse) {
    const CycNum z = CycNum::primitive_root(8);
    const CycMatrix m = from_entries(2, 8, {z, CycNum(8, 1), CycNum(8, 2), z * z});
    const CycMatrix inv = m.inverse();
    EXPECT_EQ(m * inv, CycMatrix::identity(2, 8));
    EXPECT_EQ(inv * m, CycMatrix::identity(2, 8));
}

TEST(Cyclotomic, JsonRoundTrip) {
    const CycNum a = CycNum::from_polynomial(12, std::vector<Rational>{Rational(1, 3), -2, 0, Rational(5, 7)});
    const auto j = to_json(a);
    EXPECT_EQ(j.at("conductor"), 12);
    EXPECT_EQ(cyc_from_json(j), a);
    EXPECT_EQ(cyc_from_json(j).key(), a.key());
}
