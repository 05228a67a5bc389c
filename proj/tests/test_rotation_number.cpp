#include "plcircle/rotation_number.hpp"

#include "oracles.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace plc;

namespace {

CirclePoint pt(long n, long d) { return reduce_mod1(make_rational(n, d)); }
Rational q(long n, long d = 1) { return make_rational(n, d); }
PLHomeo standard_map() { return PLHomeo::from_vertices({{q(0), q(0)}, {q(1, 2), q(1, 4)}, {q(1), q(1)}}); }

PLHomeo random_conjugator(std::uint64_t seed) {
    // a map with a fixed point at 0 so that conjugation is not a plain rotation
    for (std::uint64_t s = seed;; s += 1000) {
        PLHomeo phi = random_pl(s, 4, 64);
        if (phi.breakpoint_count() == 4) return phi;
    }
}

}  // namespace

TEST(FixedPoints, Examples) {
    EXPECT_TRUE(fixed_points(PLHomeo::identity()).full);
    EXPECT_TRUE(fixed_points(rotation(q(1, 3))).empty());
    EXPECT_EQ(fixed_points(standard_map()).points, std::vector<CirclePoint>{pt(0, 1)});
    EXPECT_EQ(some_fixed_point(fixed_points(standard_map())), pt(0, 1));
    EXPECT_FALSE(some_fixed_point(fixed_points(rotation(q(1, 3)))).has_value());
}

TEST(FixedPoints, ArcsAndIsolatedPoints) {
    const PLHomeo f = PLHomeo::from_vertices({{q(0), q(0)}, {q(1, 2), q(1, 2)}, {q(3, 4), q(5, 8)}, {q(1), q(1)}});
    const FixedPointSet fs = fixed_points(f);
    ASSERT_EQ(fs.arcs.size(), 1u);
    EXPECT_EQ(fs.arcs[0].first, pt(0, 1));
    EXPECT_EQ(fs.arcs[0].second, pt(1, 2));
    EXPECT_TRUE(fs.points.empty());
}

TEST(FixedPoints, AreFixed) {
    for (std::uint64_t s = 1; s <= 200; ++s) {
        const PLHomeo h = random_pl(s, 5, 32);
        const FixedPointSet fs = fixed_points(h);
        for (const auto& p : fs.points) EXPECT_EQ(h(p), p);
        for (const auto& [a, b] : fs.arcs) {
            EXPECT_EQ(h(a), a);
            EXPECT_EQ(h(b), b);
        }
    }
}

TEST(RotationNumber, RotationsAreExact) {
    for (long den = 1; den <= 30; ++den)
        for (long num = 0; num < den; ++num) {
            const RotNumResult r = rotation_number(rotation(q(num, den)), 30, 20);
            ASSERT_TRUE(r.is_exact());
            EXPECT_EQ(r.value, q(num, den));
        }
}

TEST(RotationNumber, Examples) {
    EXPECT_EQ(rotation_number(PLHomeo::identity(), 5, 5).value, 0);
    EXPECT_EQ(rotation_number(standard_map(), 5, 5).value, 0);
    const RotNumResult r = rotation_number(exotic_element({q(4), q(2)}), 30, 20);
    EXPECT_TRUE(r.is_exact());
    EXPECT_EQ(r.value, q(1, 2));
    EXPECT_EQ(r.describe(), "1/2 (exact)");
}

TEST(RotationNumber, ConjugacyInvariance) {
    for (std::uint64_t s = 1; s <= 50; ++s) {
        const PLHomeo h = conjugate(random_conjugator(s), rotation(q(1, 3)));
        const RotNumResult r = rotation_number(h, 30, 20);
        ASSERT_TRUE(r.is_exact());
        EXPECT_EQ(r.value, q(1, 3));
    }
}

TEST(RotationNumber, PowersMultiply) {
    for (std::uint64_t s = 1; s <= 30; ++s) {
        const PLHomeo h = random_pl(s, 3, 16);
        const RotNumResult r = rotation_number(h, 12, 20);
        if (!r.is_exact()) continue;
        for (long n = 2; n <= 3; ++n) {
            const RotNumResult rn = rotation_number(iterate(h, n), 12, 20);
            ASSERT_TRUE(rn.is_exact());
            EXPECT_EQ(rn.value, reduce_mod1(n * r.value).value());
        }
    }
}

TEST(RotationNumber, BracketsAreFareyNeighbours) {
    const PLHomeo g = exotic_element({q(4), q(3)});
    RotNumResult prev;
    for (long depth : {5L, 10L, 20L}) {
        const RotNumResult r = rotation_number(g, 20, depth);
        ASSERT_FALSE(r.is_exact());
        EXPECT_LT(r.lo, r.hi);
        const Integer det = r.hi.get_num() * r.lo.get_den() - r.lo.get_num() * r.hi.get_den();
        EXPECT_EQ(det, 1);
        if (depth > 5) {
            EXPECT_GE(r.lo, prev.lo);
            EXPECT_LE(r.hi, prev.hi);
        }
        prev = r;
    }
    // the bracket contains the numeric rotation estimate
    const double estimate = semiconjugacy_table(g, 10, 100000).rotation();
    EXPECT_LE(to_double(prev.lo), estimate + 1e-4);
    EXPECT_GE(to_double(prev.hi), estimate - 1e-4);
}

TEST(RotationNumber, RejectsBadBudgets) {
    EXPECT_THROW(rotation_number(PLHomeo::identity(), 0, 5), std::invalid_argument);
    EXPECT_THROW(rotation_number(PLHomeo::identity(), 5, 0), std::invalid_argument);
}

TEST(NumericMap, AgreesWithExactEvaluation) {
    for (std::uint64_t s = 1; s <= 20; ++s) {
        const PLHomeo h = random_pl(s, 6, 64);
        const NumericMap f(h);
        for (const auto& p : oracle::sample_points(50, s)) EXPECT_NEAR(f.lift(to_double(p.value())), to_double(h.lift(p.value())), 1e-12);
    }
}

TEST(SemiConjugacy, RotationIsMatchedUpToSampling) {
    const long n_iter = 1000, n_samples = 200;
    const SemiConjugacy phi = semiconjugacy_table(rotation(q(3, n_iter)), n_samples, n_iter);
    EXPECT_NEAR(phi.rotation(), 3.0 / n_iter, 1e-12);
    EXPECT_LE(phi.equivariance_residual(NumericMap(rotation(q(3, n_iter)))), 1.0 / n_iter + 1.0 / n_samples);
    for (const auto& row : phi.table()) EXPECT_NEAR(row.phi, row.x, 1.0 / n_iter + 1e-9);
}

TEST(SemiConjugacy, IrrationalExoticElement) {
    const PLHomeo g = exotic_element({q(4), q(3)});
    const long n_iter = 20000;
    const SemiConjugacy phi = semiconjugacy_table(g, 100, n_iter);
    EXPECT_LE(phi.equivariance_residual(NumericMap(g)), 5.0 / std::sqrt(static_cast<double>(n_iter)));
    double last = -1;
    for (const auto& row : phi.table()) {
        EXPECT_GE(row.phi, last);
        last = row.phi;
    }
}

TEST(SemiConjugacy, RequiresNoFixedPoint) {
    EXPECT_THROW(semiconjugacy_table(standard_map(), 10, 10), std::invalid_argument);
    EXPECT_THROW(semiconjugacy_table(rotation(q(1, 3)), 0, 10), std::invalid_argument);
}
