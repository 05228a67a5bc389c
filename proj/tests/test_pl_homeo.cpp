#include "plcircle/pl_homeo.hpp"

#include "oracles.hpp"

#include <gtest/gtest.h>

using namespace plc;

namespace {

CirclePoint pt(long n, long d) { return reduce_mod1(make_rational(n, d)); }
Rational q(long n, long d = 1) { return make_rational(n, d); }

// Lift vertices (0,0), (1/2,1/4), (1,1).
std::vector<Vertex> standard_vertices() { return {{q(0), q(0)}, {q(1, 2), q(1, 4)}, {q(1), q(1)}}; }
PLHomeo standard_map() { return PLHomeo::from_vertices(standard_vertices()); }

void expect_canonical(const PLHomeo& h) {
    const auto bad = h.invariant_violation();
    EXPECT_FALSE(bad.has_value()) << *bad;
}

}  // namespace

TEST(Eval, Examples) {
    EXPECT_EQ(eval(PLHomeo::identity(), pt(1, 3)), pt(1, 3));
    EXPECT_EQ(eval(rotation(q(1, 4)), pt(7, 8)), pt(1, 8));
    const PLHomeo h = standard_map();
    EXPECT_EQ(eval(h, pt(1, 4)), pt(1, 8));
    EXPECT_EQ(eval(h, pt(3, 4)), pt(5, 8));
    for (const auto& p : oracle::sample_points(1000, 3)) EXPECT_EQ(h(p), oracle::interpolate(standard_vertices(), p));
}

TEST(Eval, PreimageInvertsEval) {
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        const PLHomeo h = random_pl(seed, 5, 40);
        for (const auto& p : oracle::sample_points(50, seed)) EXPECT_EQ(h.preimage(h(p)), p);
    }
}

TEST(Compose, Examples) {
    const PLHomeo h = standard_map();
    EXPECT_EQ(compose(h, inverse(h)), PLHomeo::identity());
    EXPECT_EQ(compose(inverse(h), h), PLHomeo::identity());
    EXPECT_EQ(compose(rotation(q(1, 3)), rotation(q(1, 3))), rotation(q(2, 3)));
}

TEST(Compose, AgreesPointwiseForTwoBreakpointMaps) {
    const PLHomeo g = PLHomeo::from_vertices({{q(1, 5), q(1, 10)}, {q(2, 3), q(1, 2)}, {q(6, 5), q(11, 10)}});
    const PLHomeo h = standard_map();
    ASSERT_EQ(g.breakpoint_count(), 2u);
    const PLHomeo gh = compose(g, h);
    expect_canonical(gh);
    for (const auto& p : oracle::sample_points(1000, 17))
        EXPECT_EQ(gh(p), oracle::interpolate(g.vertices(), oracle::interpolate(h.vertices(), p)));
}

TEST(Compose, AssociativeOnRandomTriples) {
    for (std::uint64_t s = 1; s <= 60; ++s) {
        const PLHomeo a = random_pl(3 * s, 4, 32), b = random_pl(3 * s + 1, 3, 32), c = random_pl(3 * s + 2, 5, 32);
        EXPECT_EQ(compose(compose(a, b), c), compose(a, compose(b, c)));
    }
}

TEST(Compose, BreakpointCountSubadditive) {
    for (std::uint64_t s = 1; s <= 200; ++s) {
        const PLHomeo g = random_pl(2 * s, 6, 64), h = random_pl(2 * s + 1, 6, 64);
        const PLHomeo gh = compose(g, h);
        expect_canonical(gh);
        EXPECT_LE(gh.breakpoint_count(), g.breakpoint_count() + h.breakpoint_count());
    }
}

TEST(Inverse, Examples) {
    EXPECT_EQ(inverse(PLHomeo::identity()), PLHomeo::identity());
    EXPECT_EQ(inverse(rotation(q(2, 7))), rotation(q(5, 7)));
    const PLHomeo h = standard_map();
    const PLHomeo hi = inverse(h);
    expect_canonical(hi);
    for (const auto& p : oracle::sample_points(1000, 23)) EXPECT_EQ(hi(h(p)), p);
    // slopes are reciprocals, vertices swapped
    EXPECT_EQ(hi, PLHomeo::from_vertices({{q(0), q(0)}, {q(1, 4), q(1, 2)}, {q(1), q(1)}}));
}

TEST(Iterate, Examples) {
    const PLHomeo f = standard_map();
    EXPECT_EQ(iterate(f, 0), PLHomeo::identity());
    EXPECT_EQ(iterate(rotation(q(1, 5)), 5), PLHomeo::identity());
    const PLHomeo f3 = iterate(f, 3);
    for (const auto& p : oracle::sample_points(1000, 29)) {
        const auto v = standard_vertices();
        EXPECT_EQ(f3(p), oracle::interpolate(v, oracle::interpolate(v, oracle::interpolate(v, p))));
    }
    EXPECT_EQ(iterate(f, -2), inverse(iterate(f, 2)));
}

TEST(Iterate, MatchesRepeatedEval) {
    for (std::uint64_t s = 1; s <= 10; ++s) {
        const PLHomeo h = random_pl(s, 3, 16);
        for (long n = 1; n <= 6; ++n) {
            const PLHomeo hn = iterate(h, n);
            expect_canonical(hn);
            for (const auto& p : oracle::sample_points(20, s + 100 * n)) {
                CirclePoint x = p;
                for (long i = 0; i < n; ++i) x = h(x);
                EXPECT_EQ(hn(p), x);
            }
        }
    }
}

TEST(LeftRightSlopes, Examples) {
    const auto id = left_right_slopes(PLHomeo::identity(), pt(2, 9));
    EXPECT_EQ(id.first, 1);
    EXPECT_EQ(id.second, 1);
    const PLHomeo h = standard_map();
    EXPECT_EQ(left_right_slopes(h, pt(1, 2)), std::make_pair(q(1, 2), q(3, 2)));
    EXPECT_EQ(left_right_slopes(h, pt(1, 4)), std::make_pair(q(1, 2), q(1, 2)));
    EXPECT_EQ(left_right_slopes(h, pt(0, 1)), std::make_pair(q(3, 2), q(1, 2)));
}

TEST(Exotic, ModulusFourMultiplierTwo) {
    const PLHomeo g = exotic_element({q(4), q(2)});
    expect_canonical(g);
    // breakpoint at x* = A/(lambda (A-1)) - 1/(A-1) = 1/3, and at 0 where the wrap closes
    EXPECT_EQ(g.breakpoints(), (std::vector<CirclePoint>{pt(0, 1), pt(1, 3)}));
    EXPECT_EQ(left_right_slopes(g, pt(1, 6)).second, q(2));
    EXPECT_EQ(left_right_slopes(g, pt(2, 3)).second, q(1, 2));
    EXPECT_EQ(g(pt(0, 1)), pt(1, 3));
    EXPECT_EQ(iterate(g, 2), PLHomeo::identity());
}

TEST(Exotic, ModulusNineMultiplierThree) {
    const PLHomeo g = exotic_element({q(9), q(3)});
    expect_canonical(g);
    EXPECT_EQ(g.breakpoints(), (std::vector<CirclePoint>{pt(0, 1), pt(1, 4)}));
    EXPECT_EQ(g.slope(0), q(3));
    EXPECT_EQ(g.slope(1), q(1, 3));
}

TEST(Exotic, RejectsMultiplierOutsideRange) {
    EXPECT_THROW(exotic_element({q(4), q(1)}), InvariantError);
    EXPECT_THROW(exotic_element({q(4), q(4)}), InvariantError);
    EXPECT_THROW(exotic_element({q(4), q(1, 2)}), InvariantError);
    EXPECT_THROW(exotic_element({q(1), q(1, 2)}), InvariantError);
}

TEST(Exotic, IteratesKeepAtMostTwoBreakpoints) {
    for (const ExoticParams e : {ExoticParams{q(4), q(3)}, ExoticParams{q(5, 2), q(3, 2)}, ExoticParams{q(7), q(2)}}) {
        const PLHomeo g = exotic_element(e);
        PLHomeo power;
        for (int n = 1; n <= 60; ++n) {
            power = compose(g, power);
            expect_canonical(power);
            EXPECT_LE(power.breakpoint_count(), 2u) << "n=" << n;
        }
    }
}

TEST(Rotation, Examples) {
    EXPECT_EQ(rotation(q(0)), PLHomeo::identity());
    EXPECT_EQ(rotation(q(1, 2))(pt(3, 4)), pt(1, 4));
    EXPECT_TRUE(rotation(q(3, 7)).breakpoints().empty());
    EXPECT_EQ(rotation(q(-1, 3)), rotation(q(2, 3)));
}

TEST(RandomPl, Examples) {
    EXPECT_TRUE(random_pl(1, 0, 64).is_rotation());
    EXPECT_EQ(random_pl(42, 5, 64), random_pl(42, 5, 64));
    const PLHomeo h = random_pl(7, 4, 64);
    expect_canonical(h);
    EXPECT_LE(h.breakpoint_count(), 4u);
    for (const auto& v : h.vertices()) {
        EXPECT_LE(v.x.get_den(), 64);
        EXPECT_LE(v.y.get_den(), 64);
    }
}

TEST(RandomPl, CorpusIsCanonical) {
    for (std::uint64_t s = 0; s < 300; ++s) expect_canonical(random_pl(s, s % 8, 64));
}

TEST(FromVertices, CanonicalizesRemovableVertices) {
    // (1/4, 1/8) lies on the first piece of the standard map
    const PLHomeo h = PLHomeo::from_vertices({{q(0), q(0)}, {q(1, 4), q(1, 8)}, {q(1, 2), q(1, 4)}, {q(1), q(1)}});
    EXPECT_EQ(h, standard_map());
    // base point moves to the smallest breakpoint, value into [0,1)
    const PLHomeo shifted =
        PLHomeo::from_vertices({{q(1, 2), q(5, 4)}, {q(1), q(2)}, {q(3, 2), q(9, 4)}});
    EXPECT_EQ(shifted, standard_map());
    EXPECT_TRUE(PLHomeo::from_vertices({{q(1, 3), q(1, 2)}, {q(4, 3), q(3, 2)}}).is_rotation());
}

TEST(FromVertices, RejectsNonHomeomorphisms) {
    auto invariant_of = [](const std::vector<Vertex>& vs) {
        try {
            PLHomeo::from_vertices(vs);
        } catch (const InvariantError& e) {
            return e.invariant();
        }
        return std::string("accepted");
    };
    EXPECT_EQ(invariant_of({{q(0), q(0)}, {q(1, 2), q(1, 2)}, {q(1), q(3, 2)}}), "degree one");
    EXPECT_EQ(invariant_of({{q(0), q(0)}, {q(1, 2), q(1, 2)}, {q(1, 2), q(3, 4)}, {q(1), q(1)}}), "increasing x");
    EXPECT_EQ(invariant_of({{q(0), q(1, 2)}, {q(1, 2), q(1, 4)}, {q(1), q(3, 2)}}), "positive slopes");
    EXPECT_EQ(invariant_of({{q(1), q(0)}, {q(2), q(1)}}), "base point");
    EXPECT_EQ(invariant_of({{q(0), q(0)}, {q(1, 2), q(1, 2)}, {q(3, 2), q(1)}}), "closure");
    EXPECT_EQ(invariant_of({{q(0), q(0)}}), "vertex count");
}
