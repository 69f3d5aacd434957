#include <cmath>

#include "doctest.h"
#include "superint/verify.hpp"

using namespace superint;

TEST_CASE("counter RNG is a pure function of (seed, counter)") {
    CounterRng a(42), b(42), c(43);
    for (int i = 0; i < 10; ++i) {
        const auto x = a.next();
        CHECK(x == b.next());
        CHECK(x != c.next());
    }
    CounterRng u(1);
    for (int i = 0; i < 1000; ++i) {
        const double v = u.uniform();
        CHECK(v >= 0.0);
        CHECK(v < 1.0);
    }
}

TEST_CASE("samples respect the domain and are reproducible") {
    const System sys = build_system(default_spec(Family::c, Tier::PDMPotential));
    const auto a = sample_points(sys, 100, 5);
    const auto b = sample_points(sys, 100, 5);
    REQUIRE(a.size() == 100);
    for (std::size_t i = 0; i < a.size(); ++i) {
        CHECK(a[i].q == b[i].q);
        CHECK(sys.domain(a[i].q, kDefaultMargin));
    }
}

TEST_CASE("sampler gives up on an empty domain") {
    System sys = build_system(default_spec(Family::a, Tier::Geodesic3D));
    sys.domain = [](const Vec3<double>&, double) { return false; };
    CounterRng rng(1);
    CHECK_THROWS_AS(sample_point(sys, rng), SamplerExhausted);
}

TEST_CASE("involution matrix: declared pairs vanish, negative controls do not") {
    const InvolutionMatrix m = involution_matrix(default_spec(Family::a, Tier::Geodesic3D), 200, 42);
    CHECK(m.pass);
    const auto idx = [&](const std::string& n) {
        for (std::size_t i = 0; i < m.names.size(); ++i)
            if (m.names[i] == n) return i;
        FAIL("missing " << n);
        return std::size_t{0};
    };
    CHECK(m.residual[idx("K_a2")][idx("J_a2")] > 1e-3);
    CHECK(m.residual[idx("K_a1")][idx("K_a2")] <= kBracketTol);
}

TEST_CASE("independence and the dependent probe") {
    const RankResult r = independence_rank(default_spec(Family::a, Tier::Geodesic3D), 200, 42);
    CHECK(r.expected == 4);
    CHECK(independence_pass(r));
    const System sys = build_system(default_spec(Family::a, Tier::Geodesic3D));
    const auto pts = sample_points(sys, 50, 42);
    const RankResult dep = rank_of_set(sys, sys.dependent_probe, pts);
    CHECK(dep.max_rank == 3);
    const RankResult dup = rank_of_set(sys, {"K_a1", "K_a2", "K_a2"}, pts);
    CHECK(dup.max_rank == 2);
    const RankResult two_d = independence_rank(default_spec(Family::d, Tier::Euclidean2D), 200, 42);
    CHECK(two_d.expected == 3);
    CHECK(independence_pass(two_d));
}

TEST_CASE("identities") {
    for (Family f : kFamilies)
        for (const Check& c : identity_checks(default_spec(f, Tier::PDMPotential), 100, 42)) {
            INFO(c.name);
            CHECK(c.pass);
        }
}

TEST_CASE("limits") {
    for (Family f : kFamilies)
        for (Tier t : {Tier::PDMGeodesic, Tier::PDMPotential, Tier::Potential3D})
            for (const Check& c : limit_check(default_spec(f, t), 100, 42)) {
                INFO(c.name);
                CHECK(c.pass);
            }
}

TEST_CASE("reduction to the plane") {
    const ReductionResult a = reduction_check(Family::a, {1, 1, 1}, {1, 1, 0.2, -0.3});
    CHECK(a.pass);
    CHECK(a.sup_distance <= 1e-8);
    const ReductionResult free = reduction_check(Family::a, {0, 0, 0}, {1, 1, 0.2, -0.3});
    CHECK(free.sup_distance <= 1e-12);
    const ReductionResult c = reduction_check(Family::c, {-1, 0.1, 0.1}, {1.0, 1.0, 0.3, 0.2});
    CHECK(c.pass);
}

TEST_CASE("suite report is deterministic and mutation-sensitive") {
    SuiteOptions o;
    o.samples = 50;
    o.flow = false;
    const auto s = default_spec(Family::b, Tier::Geodesic3D);
    const VerificationReport r1 = run_suite(s, o);
    const VerificationReport r2 = run_suite(s, o);
    CHECK(report_to_json(r1) == report_to_json(r2));
    CHECK(r1.overall);

    SystemSpec m = s;
    m.mutation = Mutation{"K_b2", "k1"};
    const VerificationReport rm = run_suite(m, o);
    CHECK_FALSE(rm.overall);
    CHECK_FALSE(rm.failures().empty());
}

TEST_CASE("residual formatting") {
    CHECK(format_residual(0.1) == "0.10000000000000001");
    CHECK(format_residual(0.0) == "0");
}
