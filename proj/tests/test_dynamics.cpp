#include <cmath>
#include <numbers>

#include "doctest.h"
#include "superint/catalog.hpp"
#include "superint/core.hpp"
#include "superint/dynamics.hpp"

using namespace superint;
using doctest::Approx;

namespace {

const Observable HO = Observable::make("H", Chart::cartesian(1), [](const auto& q, const auto& p) {
    return 0.5 * (p[0] * p[0] + q[0] * q[0]);
});

double ho_error(Method m, double h) {
    const double T = 2 * std::numbers::pi;
    const Trajectory tr = integrate(HO, {Chart::cartesian(1), {1, 0, 0}, {0, 0, 0}}, T, h, m);
    const PhasePoint& e = tr.states.back();
    return std::hypot(e.q[0] - std::cos(T), e.p[0] + std::sin(T));
}

}  // namespace

TEST_CASE("order of accuracy") {
    const double r2 = ho_error(Method::ImplicitMidpoint, 0.02) / ho_error(Method::ImplicitMidpoint, 0.01);
    CHECK(r2 == Approx(4.0).epsilon(0.2));
    const double r4 = ho_error(Method::Gauss4, 0.2) / ho_error(Method::Gauss4, 0.1);
    CHECK(r4 == Approx(16.0).epsilon(0.2));
    const double rk = ho_error(Method::RK4, 0.2) / ho_error(Method::RK4, 0.1);
    CHECK(rk == Approx(16.0).epsilon(0.2));
}

TEST_CASE("uniform steps end exactly at t_end, forwards and backwards") {
    const Trajectory f = integrate(HO, {Chart::cartesian(1), {1, 0, 0}, {0, 0, 0}}, 1.0, 0.3);
    CHECK(f.times.size() == 5);
    CHECK(f.times.back() == 1.0);
    const Trajectory b = integrate(HO, f.states.back(), -1.0, 0.3);
    CHECK(b.times.back() == -1.0);
    CHECK(b.states.back().q[0] == Approx(1.0).epsilon(1e-12));  // midpoint is symmetric
}

TEST_CASE("stride keeps the final state") {
    IntegrateOptions o;
    o.stride = 7;
    const Trajectory tr = integrate(HO, {Chart::cartesian(1), {1, 0, 0}, {0, 0, 0}}, 1.0, 0.01, Method::Gauss4, o);
    CHECK(tr.times.front() == 0.0);
    CHECK(tr.times.back() == 1.0);
    CHECK(tr.size() == 16);
}

TEST_CASE("catalog flow conserves energy and the cyclic momentum") {
    SystemSpec s = default_spec(Family::a, Tier::Geodesic3D);
    s.k = {1, 1, 1};
    const System sys = build_system(s);
    Trajectory tr = integrate(sys.hamiltonian, {Chart::cartesian(3), {1.0, 1.1, 0.0}, {0.05, -0.08, 0.1}}, 10.0, 1e-3);
    monitor(tr, {sys.hamiltonian, sys.get("K_a1"), sys.get("J_a2")});
    CHECK(tr.summary.size() == 3);
    CHECK(tr.summary[0].relative_drift <= 1e-7);
    CHECK(tr.summary[1].max_abs_drift <= 1e-12);
    CHECK(tr.summary[2].relative_drift <= 1e-7);
    CHECK(tr.monitor("K_a1").size() == tr.size());
    CHECK_THROWS_AS(tr.monitor("nope"), UnknownObservable);
}

TEST_CASE("integration in a non-Cartesian chart") {
    const System sys = build_system(default_spec(Family::c, Tier::Geodesic3D));
    const PhasePoint z0{Chart::cartesian(3), {1.0, 1.0, 0.0}, {0.05, -0.08, 0.1}};
    const Trajectory a = integrate(sys.hamiltonian, z0, 1.0, 1e-3, Method::Gauss4);
    const Trajectory b = integrate(sys.hamiltonian, from_cartesian(z0, Chart::cylindrical(3)), 1.0, 1e-3, Method::Gauss4);
    const PhasePoint bc = to_cartesian(b.states.back());
    for (int i = 0; i < 3; ++i) CHECK(bc.q[i] == Approx(a.states.back().q[i]).epsilon(1e-9));
}

TEST_CASE("domain exit reports the time") {
    SystemSpec s = default_spec(Family::a, Tier::PDMGeodesic);
    s.lambda = 0.5;
    const System sys = build_system(s);
    try {
        integrate(sys.hamiltonian, {Chart::cartesian(3), {1.5, 1.5, 0}, {0, 0, 0}}, 1.0, 1e-3);
        FAIL("expected DomainExit");
    } catch (const DomainExit& e) {
        CHECK(e.exit_time == 0.0);
    }
}

TEST_CASE("method names") {
    for (Method m : {Method::ImplicitMidpoint, Method::Gauss4, Method::RK4}) CHECK(method_from_name(method_name(m)) == m);
    CHECK_THROWS_AS(method_from_name("euler"), ArgumentError);
}
