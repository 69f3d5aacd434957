#include <algorithm>
#include <cmath>

#include "doctest.h"
#include "superint/catalog.hpp"
#include "superint/core.hpp"

using namespace superint;
using doctest::Approx;

namespace {

bool contains(const std::vector<std::string>& v, const std::string& s) {
    return std::find(v.begin(), v.end(), s) != v.end();
}

}  // namespace

TEST_CASE("catalog has 20 systems") {
    const auto specs = all_default_specs();
    CHECK(specs.size() == 20);
    for (const auto& s : specs) CHECK_NOTHROW(build_system(s));
}

TEST_CASE("family a geodesic build") {
    SystemSpec s = default_spec(Family::a, Tier::Geodesic3D);
    s.k = {1, 1, 1};
    const System sys = build_system(s);
    CHECK(sys.dim == 3);
    CHECK(sys.hamiltonian.name() == "T_a");
    const auto names = sys.integral_names();
    for (const char* n : {"K_a1", "K_a2", "K_a3", "J_a2"}) CHECK(contains(names, n));
    CHECK(sys.independent == std::vector<std::string>{"K_a1", "K_a2", "K_a3", "J_a2"});
    const bool has_half_sum = std::any_of(sys.relations.begin(), sys.relations.end(), [](const BracketRelation& r) {
        return r.kind == RelationKind::HalfSumEquals && r.target == "T_a";
    });
    CHECK(has_half_sum);
    CHECK(sys.dependent_probe.size() == 4);
}

TEST_CASE("family c geodesic build") {
    const System sys = build_system(default_spec(Family::c, Tier::Geodesic3D));
    const auto names = sys.integral_names();
    for (const char* n : {"K_c1", "K_c2", "J_c2"}) CHECK(contains(names, n));
    const bool sum_zero = std::any_of(sys.relations.begin(), sys.relations.end(), [](const BracketRelation& r) {
        return r.kind == RelationKind::SumZeroWith && r.lhs == "K_c2" && r.rhs == "K_c3";
    });
    CHECK(sum_zero);
}

TEST_CASE("tier naming") {
    CHECK(build_system(default_spec(Family::b, Tier::Euclidean2D)).hamiltonian.name() == "H_b");
    CHECK(build_system(default_spec(Family::b, Tier::Potential3D)).hamiltonian.name() == "cH_b");
    CHECK(build_system(default_spec(Family::b, Tier::PDMGeodesic)).hamiltonian.name() == "tT_b");
    CHECK(build_system(default_spec(Family::b, Tier::PDMPotential)).hamiltonian.name() == "tcH_b");
}

TEST_CASE("PDM potential tier with lambda=0, t=0, Z=0 equals the geodesic build") {
    SystemSpec s = default_spec(Family::a, Tier::PDMPotential);
    s.lambda = 0.0;
    s.t = {0, 0, 0};
    s.zfun = ZProfile{};
    const System lo = build_system(s);
    const System geo = build_system(default_spec(Family::a, Tier::Geodesic3D));
    const PhasePoint z{Chart::cartesian(3), {1.2, 0.9, 0.3}, {0.4, -0.6, 1.1}};
    CHECK(evaluate(lo.hamiltonian, z) == Approx(evaluate(geo.hamiltonian, z)).epsilon(1e-15));
}

TEST_CASE("spec validation") {
    SystemSpec s = default_spec(Family::a, Tier::Geodesic3D);
    s.lambda = 0.3;  // geodesic tier has no mass
    CHECK_THROWS_AS(s.validate(), SpecError);
    CHECK_THROWS_AS(family_from_name("e"), SpecError);
    CHECK_THROWS_AS(tier_from_name("Hyperbolic"), SpecError);
    SystemSpec m = default_spec(Family::a, Tier::Geodesic3D);
    m.mutation = Mutation{"K_zz", "k1"};
    CHECK_THROWS_AS(build_system(m), SpecError);
    CHECK_THROWS_AS(build_system(default_spec(Family::a, Tier::Geodesic3D)).get("nope"), UnknownObservable);
}

TEST_CASE("spec JSON round trip") {
    for (const auto& s : all_default_specs()) {
        const auto j = spec_to_json(s);
        const SystemSpec back = spec_from_json(nlohmann::json::parse(j.dump()));
        CHECK(spec_to_json(back).dump() == j.dump());
    }
    CHECK_THROWS_AS(spec_from_json(nlohmann::json::parse("[1,2]")), SpecError);
    CHECK_THROWS_AS(spec_from_json(nlohmann::json::parse(R"({"family":"a"})")), SpecError);
}

TEST_CASE("mutation flips one coefficient in one integral only") {
    SystemSpec s = default_spec(Family::a, Tier::Geodesic3D);
    const PhasePoint z{Chart::cartesian(3), {1.2, 0.9, 0.3}, {0.4, -0.6, 1.1}};
    SystemSpec m = s;
    m.mutation = Mutation{"K_a2", "k2"};
    CHECK(evaluate(m, "T_a", z) == evaluate(s, "T_a", z));
    CHECK(evaluate(m, "K_a3", z) == evaluate(s, "K_a3", z));
    CHECK(evaluate(m, "K_a2", z) != evaluate(s, "K_a2", z));
}

TEST_CASE("family d Runge-Lenz forms agree with the catalog integrals") {
    const SystemSpec s = default_spec(Family::d, Tier::Geodesic3D);
    const System sys = build_system(s);
    const LrlForms f = lrl_forms(s);
    const PhasePoint z{Chart::cartesian(3), {0.9, 1.3, 0.2}, {0.5, -0.3, 0.8}};
    const double k2 = evaluate(sys.get("K_d2"), z);
    const double j2 = evaluate(sys.get("J_d2"), z);
    CHECK(evaluate(f.k_cartesian, z) == Approx(k2).epsilon(1e-13));
    CHECK(evaluate(f.k_parabolic, z) == Approx(k2).epsilon(1e-13));
    CHECK(evaluate(f.j_cartesian, z) == Approx(j2).epsilon(1e-13));
    CHECK(evaluate(f.j_parabolic, z) == Approx(j2).epsilon(1e-13));
}

TEST_CASE("potential identity for every family") {
    const std::vector<std::array<double, 2>> pts{{0.7, 1.3}, {1.9, 0.4}, {1.1, 1.1}};
    for (Family f : kFamilies) CHECK(u_potential_identity_check(f, {0.3, 0.2, 0.1}, pts) <= 1e-13);
}
