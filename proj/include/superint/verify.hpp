#pragma once

// Claim-by-claim verification of catalog systems: brackets, identities,
// independence, limits, Killing tensors, chart invariance and flows.
//
// Every check reports max_residual as residual / (1 + scale) so that
// pass <=> max_residual <= tolerance.

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "superint/catalog.hpp"
#include "superint/dynamics.hpp"
#include "superint/rng.hpp"

namespace superint {

struct SamplerOptions {
    double margin = kDefaultMargin;
    double lo = 0.3;  // x, y box
    double hi = 2.0;
    double pmax = 2.0;
    double zmax = 1.0;
    int max_attempts = 1000;
};

// Moderate-energy box used for flow starts.
SamplerOptions flow_sampler();

// Cartesian point inside the system's domain (with margin) and inside the
// image of each of its charts; throws SamplerExhausted.
PhasePoint sample_point(const System& sys, CounterRng& rng, const SamplerOptions& opt = {});
std::vector<PhasePoint> sample_points(const System& sys, int count, std::uint64_t seed,
                                      const SamplerOptions& opt = {});

struct Check {
    std::string name;
    std::string kind;
    double max_residual = 0.0;
    double tolerance = 0.0;
    bool pass = true;
};

struct VerificationReport {
    SystemSpec system;
    std::uint64_t seed = 42;
    int samples = 200;
    std::vector<Check> checks;
    bool overall = true;

    std::vector<const Check*> failures() const;
};

inline constexpr double kBracketTol = 1e-10;
inline constexpr double kIdentityTol = 1e-12;
inline constexpr double kLimitTol = 1e-13;
inline constexpr double kRankCutoff = 1e-8;
inline constexpr double kDriftTol = 1e-7;
inline constexpr double kCyclicDriftTol = 1e-11;

struct InvolutionMatrix {
    std::vector<std::string> names;
    std::vector<std::vector<double>> residual;  // max |{Fi, Fj}| / (1 + scale)
    std::vector<std::vector<bool>> declared;    // declared Zero relation
    bool pass = true;                           // all declared entries within tolerance
};
InvolutionMatrix involution_matrix(const SystemSpec& spec, int samples, std::uint64_t seed);

struct RankResult {
    int expected = 0;
    int min_rank = 0;
    int max_rank = 0;
    int full_rank_count = 0;
    std::vector<int> ranks;
};
// Numerical rank of the Jacobian of `names` (sigma_i >= cutoff * sigma_max).
RankResult rank_of_set(const System& sys, const std::vector<std::string>& names,
                       const std::vector<PhasePoint>& points, double cutoff = kRankCutoff);
RankResult independence_rank(const SystemSpec& spec, int samples, std::uint64_t seed);
// Passes when full rank is reached at >= samples - samples/200 points.
bool independence_pass(const RankResult& r);

std::vector<Check> bracket_checks(const System& sys, const std::vector<PhasePoint>& pts);
std::vector<Check> identity_checks(const SystemSpec& spec, int samples, std::uint64_t seed);
std::vector<Check> identity_checks(const System& sys, const std::vector<PhasePoint>& pts);

// Limit chain: lambda -> 0 (PDM tiers) and (t, Z) -> 0 (potential tiers),
// lambda-independent integrals, continuity in lambda.
std::vector<Check> limit_check(const SystemSpec& spec, int samples = 200, std::uint64_t seed = 42);

struct ReductionResult {
    double sup_distance = 0.0;  // sup_t |(x, y, px, py)_3D - (x, y, px, py)_2D|_inf
    double pz_drift = 0.0;      // sup_t |p_z - sqrt(2)|
    bool pass = false;
};
inline constexpr double kReductionTol = 1e-8;
ReductionResult reduction_check(Family f, const std::array<double, 3>& k, const std::array<double, 4>& z0_2d,
                                double t_end = 5.0, double h = 1e-3);

struct FlowResult {
    PhasePoint start;
    Trajectory traj;
    std::vector<Check> checks;
};
// Conservation of H and every declared integral along an implicit-midpoint
// run from a seeded moderate-energy start.
FlowResult conservation_run(const SystemSpec& spec, std::uint64_t seed = 42, double h = 1e-3, double t_end = 10.0,
                            Method method = Method::ImplicitMidpoint);

struct SuiteOptions {
    int samples = 200;
    std::uint64_t seed = 42;
    bool flow = true;
    double h = 1e-3;
    double t_end = 10.0;
};
VerificationReport run_suite(const SystemSpec& spec, const SuiteOptions& opt = {});

// "%.17g"
std::string format_residual(double v);
std::string report_to_json(const VerificationReport& r);

}  // namespace superint
