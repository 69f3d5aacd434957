#pragma once

// Riemannian side: metric fields, the Eisenhart lift, Christoffel symbols,
// scalar curvature, geodesic residuals and Killing tensors.

#include <array>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "superint/catalog.hpp"
#include "superint/dynamics.hpp"
#include "superint/observable.hpp"

namespace superint {

template <class S>
using Mat3 = std::array<std::array<S, 3>, 3>;

// q -> symmetric g_ij(q), evaluable on double / Jet1 / Jet2. Entries beyond
// dim are ignored.
class MetricField {
public:
    template <class S>
    using Fn = std::function<Mat3<S>(const Vec3<S>& q)>;

    MetricField() = default;

    template <class F>
    static MetricField make(std::string name, Chart chart, F f, DomainPredicate domain = {}) {
        MetricField g;
        g.name_ = std::move(name);
        g.chart_ = chart;
        g.fd_ = f;
        g.fj_ = f;
        g.fjj_ = f;
        g.domain_ = std::move(domain);
        return g;
    }

    const std::string& name() const { return name_; }
    int dim() const { return chart_.dim; }
    Chart chart() const { return chart_; }
    const DomainPredicate& domain() const { return domain_; }

    template <class S>
    Mat3<S> eval(const Vec3<S>& q) const {
        if constexpr (std::is_same_v<S, double>) {
            return fd_(q);
        } else if constexpr (std::is_same_v<S, Jet1>) {
            return fj_(q);
        } else {
            return fjj_(q);
        }
    }
    Mat3<double> operator()(const Vec3<double>& q) const { return fd_(q); }

private:
    std::string name_;
    Chart chart_{};
    Fn<double> fd_;
    Fn<Jet1> fj_;
    Fn<Jet2> fjj_;
    DomainPredicate domain_;
};

// Inverse of the leading n x n block (n <= 3) by cofactors; generic in S.
template <class S>
Mat3<S> inverse_block(const Mat3<S>& g, int n) {
    Mat3<S> out;
    for (auto& row : out) row.fill(S(0.0));
    if (n == 1) {
        out[0][0] = 1.0 / g[0][0];
    } else if (n == 2) {
        S det = g[0][0] * g[1][1] - g[0][1] * g[1][0];
        out[0][0] = g[1][1] / det;
        out[1][1] = g[0][0] / det;
        out[0][1] = -g[0][1] / det;
        out[1][0] = -g[1][0] / det;
    } else {
        S c00 = g[1][1] * g[2][2] - g[1][2] * g[2][1];
        S c01 = g[1][2] * g[2][0] - g[1][0] * g[2][2];
        S c02 = g[1][0] * g[2][1] - g[1][1] * g[2][0];
        S det = g[0][0] * c00 + g[0][1] * c01 + g[0][2] * c02;
        out[0][0] = c00 / det;
        out[1][0] = c01 / det;
        out[2][0] = c02 / det;
        out[0][1] = (g[0][2] * g[2][1] - g[0][1] * g[2][2]) / det;
        out[1][1] = (g[0][0] * g[2][2] - g[0][2] * g[2][0]) / det;
        out[2][1] = (g[0][1] * g[2][0] - g[0][0] * g[2][1]) / det;
        out[0][2] = (g[0][1] * g[1][2] - g[0][2] * g[1][1]) / det;
        out[1][2] = (g[0][2] * g[1][0] - g[0][0] * g[1][2]) / det;
        out[2][2] = (g[0][0] * g[1][1] - g[0][1] * g[1][0]) / det;
    }
    return out;
}

MetricField euclidean_metric(int n);
// diag(1, r^2) on the polar chart.
MetricField polar_metric();
// Kinetic metric of a 3D catalog system: mu * diag(1, 1, 1/V) (Cartesian).
MetricField lifted_metric(const SystemSpec& spec);

// 1/2 g^ij p_i p_j in the metric's chart.
Observable geodesic_hamiltonian(const MetricField& g, const std::string& name = "T");

struct LiftResult {
    MetricField metric;  // block-diag(g2, 1/V)
    Observable T;        // 1/2 g2^ij p_i p_j + 1/2 V p_z^2
};
// Throws DomainError (at evaluation) where V <= 0.
LiftResult eisenhart_lift(const MetricField& g2, const ScalarField& V);

// Gamma^i_jk, flattened as [i][j][k]; exactly symmetric in (j, k).
struct Christoffel {
    int n = 0;
    std::array<std::array<std::array<double, 3>, 3>, 3> g{};
    double operator()(int i, int j, int k) const { return g[i][j][k]; }
};
Christoffel christoffel(const MetricField& g, const Vec3<double>& q);

double scalar_curvature_probe(const MetricField& g, const Vec3<double>& q);

// max_k,i,j |d_k g_ij - Gamma^l_ki g_lj - Gamma^l_kj g_il|, derivatives of g
// by central differences with step h.
double metric_compatibility_residual(const MetricField& g, const Vec3<double>& q, double h = 1e-5);

// max over stored states of |qddot + Gamma(q)(qdot, qdot)|, with qdot = dT/dp
// and qddot obtained by differentiating the vector field along itself.
double geodesic_residual(const MetricField& g, const Observable& T, const Trajectory& traj);

// K^ij = 1/2 d^2F/dp_i dp_j at (q, 0). Throws DegreeError unless F is
// homogeneous of degree 2 in p.
struct KillingTensor {
    int n = 0;
    Mat3<double> k{};
};
KillingTensor extract_killing_tensor(const Observable& F, Chart chart, const Vec3<double>& q);

// Homogeneity probe: returns 1 or 2 when F(q, s p) = s^deg F(q, p) at the
// probe momenta, 0 otherwise.
int homogeneity_degree(const Observable& F, Chart chart, const Vec3<double>& q);

struct KillingCheck {
    double max_abs = 0.0;     // max |{F, 2T}|
    double max_scaled = 0.0;  // max |{F, 2T}| / (1 + scale)
};
// F must be homogeneous of degree 1 (Killing vector) or 2 (Killing tensor).
KillingCheck killing_check(const Observable& F, const Observable& T, const std::vector<PhasePoint>& samples);

// Dimension of the space of valence-p Killing tensors on a maximally
// symmetric n-space: C(n+p, p+1) C(n+p-1, p) / n.
std::uint64_t killing_dimension(int n, int p);

}  // namespace superint
