#pragma once

// Coordinate charts and their canonical (point-transformation) momentum lifts.
//
// Every non-Cartesian chart is a map F from chart coordinates onto the first
// two Cartesian coordinates; a third coordinate (z) and its momentum pass
// through unchanged. Momenta transform as p_chart = J_F^T p_cart.
//
//   Cylindrical   (r, phi):     x = r cos(phi),        y = r sin(phi)
//   ParabolicI    (tau, sigma): x = (tau^2 - sigma^2)/2, y = tau sigma
//   ParabolicII   (alpha, beta): x = alpha beta,        y = (alpha^2 - beta^2)/2
//
// ParabolicII is ParabolicI composed with the rotation
// tau = (alpha + beta)/sqrt(2), sigma = (alpha - beta)/sqrt(2).

#include <array>
#include <string>
#include <utility>

#include "superint/errors.hpp"
#include "superint/jet.hpp"

namespace superint {

template <class S>
using Vec3 = std::array<S, 3>;

enum class ChartKind { Cartesian, Cylindrical, ParabolicI, ParabolicII };

struct Chart {
    ChartKind kind = ChartKind::Cartesian;
    int dim = 3;

    friend bool operator==(const Chart&, const Chart&) = default;

    static Chart cartesian(int n) { return {ChartKind::Cartesian, n}; }
    static Chart cylindrical(int n = 3) { return {ChartKind::Cylindrical, n}; }
    static Chart parabolic1(int n = 3) { return {ChartKind::ParabolicI, n}; }
    static Chart parabolic2(int n = 3) { return {ChartKind::ParabolicII, n}; }
};

inline constexpr double kDefaultMargin = 0.1;

// "Cartesian3", "Cylindrical", "Polar", "ParabolicCylI", ...
std::string chart_name(Chart c);
Chart chart_from_name(const std::string& name);

struct PhasePoint {
    Chart chart = Chart::cartesian(3);
    Vec3<double> q{};
    Vec3<double> p{};

    int n() const { return chart.dim; }
};

// ---------------------------------------------------------------------------
// Generic maps (double, Jet1, Jet2). No domain checks here: callers guard.

template <class S>
struct PhaseVars {
    Vec3<S> q{};
    Vec3<S> p{};
};

template <class S>
PhaseVars<S> to_cartesian_vars(ChartKind kind, const Vec3<S>& q, const Vec3<S>& p) {
    PhaseVars<S> out{q, p};
    switch (kind) {
        case ChartKind::Cartesian:
            break;
        case ChartKind::Cylindrical: {
            const S& r = q[0];
            S c = cos(q[1]);
            S s = sin(q[1]);
            out.q[0] = r * c;
            out.q[1] = r * s;
            out.p[0] = c * p[0] - s / r * p[1];
            out.p[1] = s * p[0] + c / r * p[1];
            break;
        }
        case ChartKind::ParabolicI: {
            const S& tau = q[0];
            const S& sig = q[1];
            S det = tau * tau + sig * sig;
            out.q[0] = 0.5 * (tau * tau - sig * sig);
            out.q[1] = tau * sig;
            out.p[0] = (tau * p[0] - sig * p[1]) / det;
            out.p[1] = (sig * p[0] + tau * p[1]) / det;
            break;
        }
        case ChartKind::ParabolicII: {
            const S& al = q[0];
            const S& be = q[1];
            S det = al * al + be * be;
            out.q[0] = al * be;
            out.q[1] = 0.5 * (al * al - be * be);
            out.p[0] = (be * p[0] + al * p[1]) / det;
            out.p[1] = (al * p[0] - be * p[1]) / det;
            break;
        }
    }
    return out;
}

template <class S>
PhaseVars<S> from_cartesian_vars(ChartKind kind, const Vec3<S>& q, const Vec3<S>& p) {
    PhaseVars<S> out{q, p};
    const S& x = q[0];
    const S& y = q[1];
    switch (kind) {
        case ChartKind::Cartesian:
            break;
        case ChartKind::Cylindrical: {
            S r = sqrt(x * x + y * y);
            out.q[0] = r;
            out.q[1] = atan2(y, x);
            out.p[0] = (x * p[0] + y * p[1]) / r;
            out.p[1] = x * p[1] - y * p[0];
            break;
        }
        case ChartKind::ParabolicI: {
            S r = sqrt(x * x + y * y);
            S tau = sqrt(r + x);
            S sig = y / tau;
            out.q[0] = tau;
            out.q[1] = sig;
            out.p[0] = tau * p[0] + sig * p[1];
            out.p[1] = tau * p[1] - sig * p[0];
            break;
        }
        case ChartKind::ParabolicII: {
            S r = sqrt(x * x + y * y);
            S al = sqrt(r + y);
            S be = x / al;
            out.q[0] = al;
            out.q[1] = be;
            out.p[0] = be * p[0] + al * p[1];
            out.p[1] = al * p[0] - be * p[1];
            break;
        }
    }
    return out;
}

// Re-express variables given in chart `from` in chart `to` (via Cartesian).
template <class S>
PhaseVars<S> convert_vars(ChartKind from, ChartKind to, const Vec3<S>& q, const Vec3<S>& p) {
    if (from == to) return {q, p};
    auto c = to_cartesian_vars(from, q, p);
    return from_cartesian_vars(to, c.q, c.p);
}

// ---------------------------------------------------------------------------
// Checked operations on PhasePoint.

// Chart-coordinate domain: r > margin, tau > margin, alpha > margin.
bool in_chart_domain(const PhasePoint& z, double margin = kDefaultMargin);

// Cartesian point inside the image of `target` (excludes the branch cut).
bool in_chart_image(const Vec3<double>& q_cart, ChartKind target, double margin = kDefaultMargin);

PhasePoint to_cartesian(const PhasePoint& z, double margin = kDefaultMargin);
PhasePoint from_cartesian(const PhasePoint& z, Chart target, double margin = kDefaultMargin);
PhasePoint convert(const PhasePoint& z, Chart target, double margin = kDefaultMargin);

// Max deviation of the chart's coordinate functions (Q, P), taken as functions
// of Cartesian phase variables, from canonical bracket relations.
double symplectomorphism_check(Chart chart, const PhasePoint& z);

}  // namespace superint
