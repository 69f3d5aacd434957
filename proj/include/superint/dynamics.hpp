#pragma once

// Time integration of Hamiltonian flows: implicit midpoint and 2-stage Gauss
// (both symplectic, solved by fixed-point iteration with a Newton fallback)
// plus classical RK4 as a non-symplectic reference.

#include <string>
#include <utility>
#include <vector>

#include "superint/observable.hpp"

namespace superint {

enum class Method { ImplicitMidpoint, Gauss4, RK4 };

std::string method_name(Method m);
Method method_from_name(const std::string& s);

struct DriftSummary {
    std::string name;
    double initial = 0.0;
    double max_abs_drift = 0.0;
    double relative_drift = 0.0;  // max_abs_drift / max(|F(0)|, 1)
};

struct Trajectory {
    Chart chart = Chart::cartesian(3);
    std::vector<double> times;
    std::vector<PhasePoint> states;
    std::vector<std::pair<std::string, std::vector<double>>> monitors;
    std::vector<DriftSummary> summary;

    std::size_t size() const { return times.size(); }
    const std::vector<double>& monitor(const std::string& name) const;  // UnknownObservable
};

struct IntegrateOptions {
    double tol = 1e-13;       // fixed-point / Newton stopping tolerance (relative to 1 + |z|)
    int max_iter = 50;        // fixed-point iterations before falling back to Newton
    int max_newton = 25;
    int stride = 1;           // store every stride-th step (the final state is always stored)
};

// Steps: N = ceil(|t_end| / h) of uniform size t_end / N, so the run ends
// exactly at t_end (negative t_end integrates backwards). Throws DomainExit
// with the exit time if the flow leaves H's domain, ConvergenceError if the
// implicit solve fails.
Trajectory integrate(const Observable& H, const PhasePoint& z0, double t_end, double h,
                     Method method = Method::ImplicitMidpoint, const IntegrateOptions& opt = {});

// One step of size h from z (no domain bookkeeping beyond H's own checks).
PhasePoint step(const Observable& H, const PhasePoint& z, double h, Method method,
                const IntegrateOptions& opt = {});

// Evaluates each observable along the trajectory (auto chart conversion) and
// fills monitors + drift summary.
void monitor(Trajectory& traj, const std::vector<Observable>& obs);

}  // namespace superint
