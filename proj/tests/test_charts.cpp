#include <cmath>

#include "doctest.h"
#include "superint/charts.hpp"

using namespace superint;
using doctest::Approx;

TEST_CASE("parabolic symmetry point") {
    const PhasePoint c = to_cartesian({Chart::parabolic1(2), {1, 1, 0}, {0, 0, 0}});
    CHECK(std::abs(c.q[0]) <= 1e-15);
    CHECK(c.q[1] == Approx(1.0));
    const PhasePoint back = from_cartesian({Chart::cartesian(2), {0, 1, 0}, {0, 0, 0}}, Chart::parabolic1(2));
    CHECK(back.q[0] == Approx(1.0));
    CHECK(back.q[1] == Approx(1.0));
}

TEST_CASE("cylindrical on the phi = 0 axis") {
    const PhasePoint c = to_cartesian({Chart::cylindrical(3), {2, 0, 0.5}, {0.7, 0.0, -0.2}});
    CHECK(c.q[0] == Approx(2.0));
    CHECK(std::abs(c.q[1]) <= 1e-15);
    CHECK(c.q[2] == 0.5);
    CHECK(c.p[0] == Approx(0.7));
    CHECK(c.p[2] == -0.2);
}

TEST_CASE("branch cut is excluded") {
    CHECK_THROWS_AS(from_cartesian({Chart::cartesian(2), {-1, 0, 0}, {0, 0, 0}}, Chart::parabolic1(2)), DomainError);
    CHECK_FALSE(in_chart_image({-1, 0, 0}, ChartKind::ParabolicI));
    CHECK(in_chart_image({1.5, 2, 0}, ChartKind::ParabolicI));
}

TEST_CASE("round trips through every chart") {
    const PhasePoint z{Chart::cartesian(3), {1.1, 0.7, -0.3}, {0.4, -0.9, 0.25}};
    for (Chart target : {Chart::cylindrical(3), Chart::parabolic1(3), Chart::parabolic2(3)}) {
        const PhasePoint w = from_cartesian(z, target);
        const PhasePoint back = to_cartesian(w);
        for (int i = 0; i < 3; ++i) {
            CHECK(back.q[i] == Approx(z.q[i]).epsilon(1e-14));
            CHECK(back.p[i] == Approx(z.p[i]).epsilon(1e-14));
        }
        // p . dq is chart-independent for point transformations.
        const PhasePoint v = convert(w, Chart::cylindrical(3));
        CHECK(to_cartesian(v).q[0] == Approx(z.q[0]).epsilon(1e-14));
    }
}

TEST_CASE("point lifts are symplectic") {
    CHECK(symplectomorphism_check(Chart::cartesian(3), {Chart::cartesian(3), {1, 2, 3}, {1, 1, 1}}) == 0.0);
    CHECK(symplectomorphism_check(Chart::parabolic1(2), {Chart::parabolic1(2), {2, 1, 0}, {2, -1, 0}}) <= 1e-12);
    CHECK(symplectomorphism_check(Chart::cylindrical(2), {Chart::cylindrical(2), {2, 1, 0}, {0.3, 0.2, 0}}) <= 1e-12);
    CHECK(symplectomorphism_check(Chart::parabolic2(3), {Chart::parabolic2(3), {1.4, 0.6, 0.2}, {0.3, 0.2, 1}}) <=
          1e-12);
}

TEST_CASE("chart names") {
    for (Chart c : {Chart::cartesian(1), Chart::cartesian(2), Chart::cartesian(3), Chart::cylindrical(3),
                    Chart::cylindrical(2), Chart::parabolic1(3), Chart::parabolic2(3)})
        CHECK(chart_from_name(chart_name(c)) == c);
    CHECK_THROWS(chart_from_name("Spherical"));
}
