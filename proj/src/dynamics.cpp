#include "superint/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <Eigen/Dense>

#include "superint/core.hpp"

namespace superint {

std::string method_name(Method m) {
    switch (m) {
        case Method::ImplicitMidpoint:
            return "midpoint";
        case Method::Gauss4:
            return "gauss4";
        case Method::RK4:
            return "rk4";
    }
    return "?";
}

Method method_from_name(const std::string& s) {
    if (s == "midpoint" || s == "ImplicitMidpoint") return Method::ImplicitMidpoint;
    if (s == "gauss4" || s == "Gauss4") return Method::Gauss4;
    if (s == "rk4" || s == "RK4") return Method::RK4;
    throw ArgumentError("unknown integration method '" + s + "'");
}

const std::vector<double>& Trajectory::monitor(const std::string& name) const {
    for (const auto& [n, v] : monitors)
        if (n == name) return v;
    throw UnknownObservable("trajectory has no monitor '" + name + "'");
}

namespace {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

Vec pack(const PhasePoint& z) {
    const int n = z.n();
    Vec v(2 * n);
    for (int i = 0; i < n; ++i) {
        v[i] = z.q[i];
        v[n + i] = z.p[i];
    }
    return v;
}

PhasePoint unpack(const Vec& v, Chart chart) {
    const int n = chart.dim;
    PhasePoint z{chart, {}, {}};
    for (int i = 0; i < n; ++i) {
        z.q[i] = v[i];
        z.p[i] = v[n + i];
    }
    return z;
}

Vec field(const Observable& H, const Vec& v, Chart chart) {
    const auto x = hamiltonian_vector_field(H, unpack(v, chart));
    return Eigen::Map<const Vec>(x.data(), static_cast<Eigen::Index>(x.size()));
}

Mat field_jacobian(const Observable& H, const Vec& v, Chart chart) {
    const int m = static_cast<int>(v.size());
    const auto j = vector_field_jacobian(H, unpack(v, chart));
    return Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>(j.data(), m, m);
}

bool converged(const Vec& delta, const Vec& ref, double tol) {
    return delta.lpNorm<Eigen::Infinity>() <= tol * (1.0 + ref.lpNorm<Eigen::Infinity>());
}

// Implicit midpoint: y1 = y0 + h X((y0 + y1)/2).
Vec midpoint_step(const Observable& H, const Vec& y0, double h, Chart chart, const IntegrateOptions& opt) {
    Vec y1 = y0 + h * field(H, y0, chart);
    for (int it = 0; it < opt.max_iter; ++it) {
        Vec next = y0 + h * field(H, 0.5 * (y0 + y1), chart);
        Vec d = next - y1;
        y1 = next;
        if (converged(d, y1, opt.tol)) return y1;
    }
    const Eigen::Index m = y0.size();
    for (int it = 0; it < opt.max_newton; ++it) {
        const Vec mid = 0.5 * (y0 + y1);
        const Vec F = y1 - y0 - h * field(H, mid, chart);
        const Mat J = Mat::Identity(m, m) - 0.5 * h * field_jacobian(H, mid, chart);
        const Vec d = J.partialPivLu().solve(F);
        y1 -= d;
        if (converged(d, y1, opt.tol)) return y1;
    }
    throw ConvergenceError("implicit midpoint solve did not converge");
}

// Two-stage Gauss-Legendre collocation (order 4).
Vec gauss4_step(const Observable& H, const Vec& y0, double h, Chart chart, const IntegrateOptions& opt) {
    static const double s3 = std::sqrt(3.0);
    const double a[2][2] = {{0.25, 0.25 - s3 / 6.0}, {0.25 + s3 / 6.0, 0.25}};
    const Eigen::Index m = y0.size();

    Vec k1 = field(H, y0, chart);
    Vec k2 = k1;
    bool ok = false;
    for (int it = 0; it < opt.max_iter && !ok; ++it) {
        Vec n1 = field(H, y0 + h * (a[0][0] * k1 + a[0][1] * k2), chart);
        Vec n2 = field(H, y0 + h * (a[1][0] * k1 + a[1][1] * k2), chart);
        const double d = std::max((n1 - k1).lpNorm<Eigen::Infinity>(), (n2 - k2).lpNorm<Eigen::Infinity>());
        k1 = n1;
        k2 = n2;
        ok = h * d <= opt.tol * (1.0 + y0.lpNorm<Eigen::Infinity>());
    }
    for (int it = 0; it < opt.max_newton && !ok; ++it) {
        const Vec Y1 = y0 + h * (a[0][0] * k1 + a[0][1] * k2);
        const Vec Y2 = y0 + h * (a[1][0] * k1 + a[1][1] * k2);
        const Mat J1 = field_jacobian(H, Y1, chart);
        const Mat J2 = field_jacobian(H, Y2, chart);
        Vec F(2 * m);
        F << k1 - field(H, Y1, chart), k2 - field(H, Y2, chart);
        Mat J = Mat::Identity(2 * m, 2 * m);
        J.block(0, 0, m, m) -= h * a[0][0] * J1;
        J.block(0, m, m, m) -= h * a[0][1] * J1;
        J.block(m, 0, m, m) -= h * a[1][0] * J2;
        J.block(m, m, m, m) -= h * a[1][1] * J2;
        const Vec d = J.partialPivLu().solve(F);
        k1 -= d.head(m);
        k2 -= d.tail(m);
        ok = h * d.lpNorm<Eigen::Infinity>() <= opt.tol * (1.0 + y0.lpNorm<Eigen::Infinity>());
    }
    if (!ok) throw ConvergenceError("Gauss collocation solve did not converge");
    return y0 + 0.5 * h * (k1 + k2);
}

Vec rk4_step(const Observable& H, const Vec& y0, double h, Chart chart) {
    const Vec k1 = field(H, y0, chart);
    const Vec k2 = field(H, y0 + 0.5 * h * k1, chart);
    const Vec k3 = field(H, y0 + 0.5 * h * k2, chart);
    const Vec k4 = field(H, y0 + h * k3, chart);
    return y0 + h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

Vec step_vec(const Observable& H, const Vec& y, double h, Chart chart, Method method, const IntegrateOptions& opt) {
    switch (method) {
        case Method::ImplicitMidpoint:
            return midpoint_step(H, y, h, chart, opt);
        case Method::Gauss4:
            return gauss4_step(H, y, h, chart, opt);
        case Method::RK4:
            return rk4_step(H, y, h, chart);
    }
    return y;
}

std::string fmt_time(double t) {
    std::ostringstream os;
    os.precision(17);
    os << t;
    return os.str();
}

}  // namespace

PhasePoint step(const Observable& H, const PhasePoint& z, double h, Method method, const IntegrateOptions& opt) {
    if (H.dim() != z.n()) throw DimensionMismatch("Hamiltonian and initial point live on different phase spaces");
    return unpack(step_vec(H, pack(z), h, z.chart, method, opt), z.chart);
}

Trajectory integrate(const Observable& H, const PhasePoint& z0, double t_end, double h, Method method,
                     const IntegrateOptions& opt) {
    if (!(h > 0.0) || !std::isfinite(h)) throw ArgumentError("step size must be positive and finite");
    if (!std::isfinite(t_end)) throw ArgumentError("t_end must be finite");
    if (H.dim() != z0.n()) throw DimensionMismatch("Hamiltonian and initial point live on different phase spaces");
    if (opt.stride < 1) throw ArgumentError("stride must be >= 1");

    try {
        require_domain(H, z0);
    } catch (const DomainError& e) {
        throw DomainExit(0.0, "domain exit at t=0: " + std::string(e.what()));
    } catch (const NonFiniteError& e) {
        throw DomainExit(0.0, "domain exit at t=0: " + std::string(e.what()));
    }

    const long steps = std::max(1L, static_cast<long>(std::ceil(std::abs(t_end) / h - 1e-9)));
    const double dt = t_end / static_cast<double>(steps);

    Trajectory traj;
    traj.chart = z0.chart;
    traj.times.push_back(0.0);
    traj.states.push_back(z0);

    Vec y = pack(z0);
    for (long s = 1; s <= steps; ++s) {
        const double t_prev = dt * static_cast<double>(s - 1);
        try {
            y = step_vec(H, y, dt, z0.chart, method, opt);
            if (!y.allFinite()) throw NonFiniteError("non-finite state");
            require_domain(H, unpack(y, z0.chart));
        } catch (const DomainError& e) {
            throw DomainExit(t_prev, "domain exit at t=" + fmt_time(t_prev) + ": " + e.what());
        } catch (const NonFiniteError& e) {
            throw DomainExit(t_prev, "domain exit at t=" + fmt_time(t_prev) + ": " + e.what());
        }
        if (s % opt.stride == 0 || s == steps) {
            traj.times.push_back(s == steps ? t_end : dt * static_cast<double>(s));
            traj.states.push_back(unpack(y, z0.chart));
        }
    }
    return traj;
}

void monitor(Trajectory& traj, const std::vector<Observable>& obs) {
    for (const auto& f : obs) {
        std::vector<double> values;
        values.reserve(traj.size());
        for (const auto& z : traj.states) values.push_back(evaluate(f, z));
        DriftSummary d;
        d.name = f.name();
        d.initial = values.empty() ? 0.0 : values.front();
        for (double v : values) d.max_abs_drift = std::max(d.max_abs_drift, std::abs(v - d.initial));
        d.relative_drift = d.max_abs_drift / std::max(std::abs(d.initial), 1.0);
        traj.summary.push_back(d);
        traj.monitors.emplace_back(f.name(), std::move(values));
    }
}

}  // namespace superint
