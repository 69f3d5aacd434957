#pragma once

// Inventory of the four superintegrable families (a: isotropic oscillator,
// b: anisotropic 2:1 oscillator, c: Kepler-Coulomb I, d: Kepler-Coulomb II)
// across five tiers:
//
//   Euclidean2D   H_r  = (px^2 + py^2)/2 + V_r(x, y)
//   Geodesic3D    T_r  = (px^2 + py^2 + V_r pz^2)/2              (Eisenhart lift)
//   Potential3D   cH_r = T_r + U_r(x, y) + V_r(x, y) Z(z)
//   PDMGeodesic   tT_r = T_r / mu_r
//   PDMPotential  tcH_r = cH_r / mu_r
//
// U_r is V_r with coefficients t instead of k. Every 3D integral is written
// once in its most general (PDM + potential) form; lower tiers are obtained
// by zero coefficients, so the tier limits hold along the same arithmetic
// path.

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "superint/jet.hpp"
#include "superint/observable.hpp"

namespace superint {

enum class Family { a, b, c, d };
enum class Tier { Euclidean2D, Geodesic3D, Potential3D, PDMGeodesic, PDMPotential };

inline constexpr std::array<Family, 4> kFamilies{Family::a, Family::b, Family::c, Family::d};
inline constexpr std::array<Tier, 5> kTiers{Tier::Euclidean2D, Tier::Geodesic3D, Tier::Potential3D,
                                            Tier::PDMGeodesic, Tier::PDMPotential};

std::string family_name(Family f);
std::string tier_name(Tier t);
Family family_from_name(const std::string& s);
Tier tier_from_name(const std::string& s);

inline bool has_potential(Tier t) { return t == Tier::Potential3D || t == Tier::PDMPotential; }
inline bool has_mass(Tier t) { return t == Tier::PDMGeodesic || t == Tier::PDMPotential; }
inline bool is_geodesic(Tier t) { return t == Tier::Geodesic3D || t == Tier::PDMGeodesic; }
inline int tier_dim(Tier t) { return t == Tier::Euclidean2D ? 2 : 3; }

// The free function Z(z) of the 3D potential tiers.
struct ZProfile {
    enum class Kind { Zero, Quadratic, Cosine, Polynomial };
    Kind kind = Kind::Zero;
    double c = 0.0;
    double omega = 0.0;
    std::vector<double> coeffs;  // ascending powers

    static ZProfile zero() { return {}; }
    static ZProfile quadratic(double c) { return {Kind::Quadratic, c, 0.0, {}}; }
    static ZProfile cosine(double c, double omega) { return {Kind::Cosine, c, omega, {}}; }
    static ZProfile polynomial(std::vector<double> a) { return {Kind::Polynomial, 0.0, 0.0, std::move(a)}; }

    template <class S>
    S operator()(const S& z) const {
        switch (kind) {
            case Kind::Zero:
                return S(0.0);
            case Kind::Quadratic:
                return c * (z * z);
            case Kind::Cosine:
                return c * cos(omega * z);
            case Kind::Polynomial: {
                S acc(0.0);
                for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) acc = acc * z + *it;
                return acc;
            }
        }
        return S(0.0);
    }
};

// Sign flip of one coefficient inside one integral only (mutation controls).
struct Mutation {
    std::string observable;
    std::string coefficient;  // k1 k2 k3 t1 t2 t3 lambda
};

struct SystemSpec {
    Family family = Family::a;
    Tier tier = Tier::Geodesic3D;
    std::array<double, 3> k{1.0, 0.5, 0.25};
    std::array<double, 3> t{0.0, 0.0, 0.0};
    double lambda = 0.0;
    ZProfile zfun;
    std::optional<Mutation> mutation;

    // Throws SpecError on tier/parameter inconsistency.
    void validate() const;
    std::string label() const;  // e.g. "a/Geodesic3D"
};

// Generic default parameters: k=(1,0.5,0.25), t=(0.3,0.2,0.1) in potential
// tiers, lambda=0.1 in PDM tiers, Z = 0.5 z^2 in potential tiers.
SystemSpec default_spec(Family f, Tier t);

// All 4 x 5 systems with default parameters, in family-major order.
std::vector<SystemSpec> all_default_specs();

SystemSpec spec_from_json(const nlohmann::json& j);
nlohmann::ordered_json spec_to_json(const SystemSpec& s);

enum class RelationKind { Zero, SumZeroWith, HalfSumEquals };

// Zero:          {lhs, rhs} = 0
// SumZeroWith:   lhs + rhs = 0
// HalfSumEquals: target = (lhs + rhs) / 2
struct BracketRelation {
    std::string lhs;
    std::string rhs;
    RelationKind kind = RelationKind::Zero;
    std::string target;
};

std::string relation_kind_name(RelationKind k);

struct System {
    SystemSpec spec;
    int dim = 3;
    Observable hamiltonian;
    std::vector<Observable> integrals;        // all declared constants of motion
    std::vector<std::string> independent;     // the declared independent set
    std::vector<std::string> dependent_probe; // {K1, K2, K3, H} for families a, b (3D)
    std::vector<BracketRelation> relations;
    std::vector<std::pair<std::string, std::string>> negative_controls;
    std::vector<Chart> charts;                // the two separable charts
    std::vector<Observable> auxiliary;        // V, U, mu, Z, Lz as observables
    DomainPredicate domain;

    // Hamiltonian, integrals and auxiliaries; throws UnknownObservable.
    const Observable& get(const std::string& name) const;
    bool has(const std::string& name) const;
    std::vector<std::string> integral_names() const;
};

System build_system(const SystemSpec& spec);

// Checked evaluation of any named observable of a system (auto chart conversion).
double evaluate(const SystemSpec& spec, const std::string& name, const PhasePoint& z);

// ---- potentials and masses (Cartesian) ----

// V_r(x, y) with coefficients c; the same function gives U_r with c = t.
// Family d uses tau = sqrt(r + x), sigma = y / tau (sqrt(r - x) = |sigma|).
template <class S>
S family_potential(Family f, const std::array<double, 3>& c, const S& x, const S& y) {
    switch (f) {
        case Family::a:
            return 0.5 * c[0] * (x * x + y * y) + c[1] / (x * x) + c[2] / (y * y);
        case Family::b:
            return 0.5 * c[0] * (4.0 * (x * x) + y * y) + c[1] / (y * y) + c[2] * x;
        case Family::c: {
            S r = sqrt(x * x + y * y);
            return c[0] / r + c[1] / (y * y) + c[2] * x / (y * y * r);
        }
        case Family::d: {
            S r = sqrt(x * x + y * y);
            S tau = sqrt(r + x);
            S sig = y / tau;
            return (c[0] + c[1] * tau + c[2] * sig) / r;
        }
    }
    return S(0.0);
}

// Position-dependent mass: a: 1 - lambda r^2, b: 1 - lambda x, c, d: 1 - lambda / r.
template <class S>
S family_mass(Family f, double lambda, const S& x, const S& y) {
    switch (f) {
        case Family::a:
            return 1.0 - lambda * (x * x + y * y);
        case Family::b:
            return 1.0 - lambda * x;
        case Family::c:
        case Family::d:
            return 1.0 - lambda / sqrt(x * x + y * y);
    }
    return S(1.0);
}

// Domain of family f's observables (singular denominators kept >= margin),
// plus mu > margin when lambda != 0.
DomainPredicate family_domain(Family f, double lambda);

// Max |U_r(t) - V_r(k := t)| over `points`, with U_r assembled from the two
// separated forms it must take (Cartesian/polar/parabolic pieces).
double u_potential_identity_check(Family f, const std::array<double, 3>& t,
                                  const std::vector<std::array<double, 2>>& points);

// Laplace-Runge-Lenz rewrites of the family-d integrals (K_d2, J_d2) in the
// first parabolic chart and in Cartesian form; available in the Geodesic3D,
// Potential3D and PDMGeodesic tiers.
struct LrlForms {
    Observable k_parabolic;
    Observable j_parabolic;
    Observable k_cartesian;
    Observable j_cartesian;
};
LrlForms lrl_forms(const SystemSpec& spec);

}  // namespace superint
