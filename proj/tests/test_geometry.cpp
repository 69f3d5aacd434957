#include <cmath>

#include "doctest.h"
#include "superint/core.hpp"
#include "superint/geometry.hpp"
#include "superint/verify.hpp"

using namespace superint;
using doctest::Approx;

TEST_CASE("flat metrics") {
    const Christoffel G = christoffel(euclidean_metric(3), {0.3, -1.0, 2.0});
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            for (int k = 0; k < 3; ++k) CHECK(G(i, j, k) == 0.0);
    CHECK(scalar_curvature_probe(euclidean_metric(3), {0.3, -1.0, 2.0}) == 0.0);
    CHECK(std::abs(scalar_curvature_probe(polar_metric(), {2.0, 0.4, 0.0})) <= 1e-13);
}

TEST_CASE("Christoffel symbols are metric-compatible") {
    for (Family f : kFamilies) {
        const MetricField g = lifted_metric(default_spec(f, Tier::Geodesic3D));
        CHECK(metric_compatibility_residual(g, {1.1, 0.8, 0.2}) <= 1e-7);
    }
}

TEST_CASE("lifted metrics are curved and not constant curvature") {
    for (Family f : kFamilies) {
        const MetricField g = lifted_metric(default_spec(f, Tier::Geodesic3D));
        const double r1 = scalar_curvature_probe(g, {0.9, 0.7, 0.0});
        const double r2 = scalar_curvature_probe(g, {1.6, 1.2, 0.0});
        CHECK(std::abs(r1 - r2) > 1e-3);
    }
}

TEST_CASE("Eisenhart lift with V = 1 is free motion") {
    const LiftResult lift = eisenhart_lift(euclidean_metric(2), ScalarField::make("one", [](const auto& q) {
                                               return 0.0 * q[0] + 1.0;
                                           }));
    const PhasePoint z{Chart::cartesian(3), {0.3, 0.2, 0.1}, {1, 2, 3}};
    CHECK(evaluate(lift.T, z) == Approx(7.0));
    const Mat3<double> g = lift.metric({0.3, 0.2, 0.1});
    CHECK(g[2][2] == 1.0);
}

TEST_CASE("singular lift raises") {
    const LiftResult lift = eisenhart_lift(euclidean_metric(2), ScalarField::make("neg", [](const auto& q) {
                                               return 0.0 * q[0] - 1.0;
                                           }));
    CHECK_THROWS_AS(evaluate(lift.T, {Chart::cartesian(3), {0.3, 0.2, 0.1}, {1, 2, 3}}), DomainError);
}

TEST_CASE("geodesic residuals") {
    const MetricField flat = euclidean_metric(3);
    const Observable Tflat = geodesic_hamiltonian(flat);
    const Trajectory free = integrate(Tflat, {Chart::cartesian(3), {0, 0, 0}, {1, 0.5, -0.2}}, 2.0, 1e-2);
    CHECK(geodesic_residual(flat, Tflat, free) <= 1e-12);

    const MetricField polar = polar_metric();
    const Observable Tp = geodesic_hamiltonian(polar);
    const Trajectory tp = integrate(Tp, {Chart::cylindrical(2), {2.0, 0.3, 0}, {0.2, 0.9, 0}}, 3.0, 1e-3);
    CHECK(geodesic_residual(polar, Tp, tp) <= 1e-7);

    SystemSpec s = default_spec(Family::a, Tier::Geodesic3D);
    s.k = {1, 1, 1};
    const MetricField ga = lifted_metric(s);
    const Observable Ta = geodesic_hamiltonian(ga);
    const Trajectory ta = integrate(Ta, {Chart::cartesian(3), {1.1, 0.9, 0}, {0.1, -0.1, 0.3}}, 3.0, 1e-3);
    CHECK(geodesic_residual(ga, Ta, ta) <= 1e-6);
}

TEST_CASE("2T gives the inverse metric as a Killing tensor") {
    const SystemSpec s = default_spec(Family::b, Tier::Geodesic3D);
    const MetricField g = lifted_metric(s);
    const System sys = build_system(s);
    const Vec3<double> q{1.2, 0.7, 0.1};
    const KillingTensor K = extract_killing_tensor(sys.hamiltonian, Chart::cartesian(3), q);
    const Mat3<double> gi = inverse_block(g(q), 3);
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) CHECK(2.0 * K.k[i][j] == Approx(gi[i][j]).epsilon(1e-13));
}

TEST_CASE("Killing checks") {
    SystemSpec s = default_spec(Family::a, Tier::Geodesic3D);
    s.k = {1, 1, 1};
    const System sys = build_system(s);
    const auto pts = sample_points(sys, 50, 7);
    CHECK(killing_check(sys.get("K_a1"), sys.hamiltonian, pts).max_abs == 0.0);
    CHECK(killing_check(sys.get("K_a2"), sys.hamiltonian, pts).max_scaled <= 1e-10);
    const Observable px2 = Observable::make("px^2", Chart::cartesian(3),
                                            [](const auto&, const auto& p) { return p[0] * p[0]; }, 2);
    CHECK(killing_check(px2, sys.hamiltonian, pts).max_scaled > 1e-3);
    CHECK(homogeneity_degree(sys.get("K_a1"), Chart::cartesian(3), {1, 1, 0}) == 1);
    CHECK(homogeneity_degree(sys.get("K_a2"), Chart::cartesian(3), {1, 1, 0}) == 2);
}

TEST_CASE("Killing dimension formula") {
    CHECK(killing_dimension(1, 1) == 1);
    CHECK(killing_dimension(2, 2) == 6);
    CHECK(killing_dimension(4, 1) == 10);
    CHECK_THROWS_AS(killing_dimension(0, 1), ArgumentError);
    CHECK_THROWS_AS(killing_dimension(3, 0), ArgumentError);
}

TEST_CASE("singular metric is reported") {
    const MetricField g = MetricField::make("degenerate", Chart::cartesian(2), [](const auto& q) {
        using S = std::decay_t<decltype(q[0])>;
        Mat3<S> m;
        for (auto& r : m) r.fill(S(0.0));
        m[0][0] = S(1.0);
        return m;
    });
    CHECK_THROWS_AS(christoffel(g, {1, 1, 0}), SingularMetric);
}
