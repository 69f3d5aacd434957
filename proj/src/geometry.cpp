#include "superint/geometry.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Dense>

#include "superint/core.hpp"

namespace superint {

namespace {

template <class S>
Mat3<S> zero_mat() {
    Mat3<S> m;
    for (auto& row : m) row.fill(S(0.0));
    return m;
}

Eigen::Matrix3d to_eigen(const Mat3<double>& g, int n) {
    Eigen::Matrix3d m = Eigen::Matrix3d::Identity();
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) m(i, j) = g[i][j];
    return m;
}

Eigen::MatrixXd checked_inverse(const Mat3<double>& g, int n) {
    Eigen::MatrixXd m = to_eigen(g, n).topLeftCorner(n, n);
    if (!m.allFinite()) throw SingularMetric("metric has non-finite components");
    Eigen::FullPivLU<Eigen::MatrixXd> lu(m);
    if (!lu.isInvertible() || lu.rcond() < 1e-14) throw SingularMetric("metric is singular at the point");
    return lu.inverse();
}

void check_metric_point(const MetricField& g, const Vec3<double>& q) {
    for (int i = 0; i < g.dim(); ++i)
        if (!std::isfinite(q[i])) throw NonFiniteError("non-finite configuration point");
    if (g.domain() && !g.domain()(q, 0.0)) throw DomainError("point outside the domain of metric " + g.name());
}

}  // namespace

MetricField euclidean_metric(int n) {
    return MetricField::make("euclidean" + std::to_string(n), Chart::cartesian(n), [n](const auto& q) {
        using S = std::decay_t<decltype(q[0])>;
        Mat3<S> g = zero_mat<S>();
        for (int i = 0; i < n; ++i) g[i][i] = S(1.0);
        return g;
    });
}

MetricField polar_metric() {
    return MetricField::make(
        "polar", Chart::cylindrical(2),
        [](const auto& q) {
            using S = std::decay_t<decltype(q[0])>;
            Mat3<S> g = zero_mat<S>();
            g[0][0] = S(1.0);
            g[1][1] = q[0] * q[0];
            return g;
        },
        [](const Vec3<double>& q, double m) { return std::hypot(q[0], q[1]) > m; });
}

MetricField lifted_metric(const SystemSpec& spec) {
    if (spec.tier == Tier::Euclidean2D) throw SpecError("lifted metrics exist for 3D tiers only");
    const Family f = spec.family;
    const auto k = spec.k;
    const double lambda = spec.lambda;
    return MetricField::make(
        "g_" + family_name(f), Chart::cartesian(3),
        [f, k, lambda](const auto& q) {
            using S = std::decay_t<decltype(q[0])>;
            S V = family_potential(f, k, q[0], q[1]);
            if (!(value_of(V) > 0.0)) throw DomainError("lifted metric needs V > 0");
            S mu = family_mass(f, lambda, q[0], q[1]);
            Mat3<S> g = zero_mat<S>();
            g[0][0] = mu;
            g[1][1] = mu;
            g[2][2] = mu / V;
            return g;
        },
        family_domain(f, lambda));
}

Observable geodesic_hamiltonian(const MetricField& g, const std::string& name) {
    const int n = g.dim();
    return Observable::make(
        name, g.chart(),
        [g, n](const auto& q, const auto& p) {
            using S = std::decay_t<decltype(q[0])>;
            const Mat3<S> gi = inverse_block(g.eval<S>(q), n);
            S acc(0.0);
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j) acc = acc + gi[i][j] * p[i] * p[j];
            return 0.5 * acc;
        },
        2, g.domain());
}

LiftResult eisenhart_lift(const MetricField& g2, const ScalarField& V) {
    if (g2.dim() != 2) throw DimensionMismatch("Eisenhart lift expects a 2D base metric");
    const ChartKind kind = g2.chart().kind;
    const Chart chart3{kind, 3};

    auto checkedV = [V](const auto& q) {
        auto v = V.eval(q);
        if (!(value_of(v) > 0.0)) throw DomainError("Eisenhart lift needs V > 0");
        return v;
    };

    LiftResult out;
    out.metric = MetricField::make(
        g2.name() + "+dz2/V", chart3,
        [g2, checkedV](const auto& q) {
            using S = std::decay_t<decltype(q[0])>;
            Mat3<S> g = g2.eval<S>(q);
            g[0][2] = g[1][2] = g[2][0] = g[2][1] = S(0.0);
            g[2][2] = 1.0 / checkedV(q);
            return g;
        },
        g2.domain());
    out.T = Observable::make(
        "T", chart3,
        [g2, checkedV](const auto& q, const auto& p) {
            using S = std::decay_t<decltype(q[0])>;
            const Mat3<S> gi = inverse_block(g2.eval<S>(q), 2);
            S kin = gi[0][0] * (p[0] * p[0]) + 2.0 * gi[0][1] * (p[0] * p[1]) + gi[1][1] * (p[1] * p[1]);
            return 0.5 * (kin + checkedV(q) * (p[2] * p[2]));
        },
        2, g2.domain());
    return out;
}

Christoffel christoffel(const MetricField& g, const Vec3<double>& q) {
    check_metric_point(g, q);
    const int n = g.dim();
    Vec3<Jet1> qj;
    for (int i = 0; i < 3; ++i) qj[i] = i < n ? seed1(q[i], i) : Jet1(q[i]);
    const Mat3<Jet1> gj = g.eval<Jet1>(qj);
    Mat3<double> g0{};
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            if (!all_finite(gj[i][j])) throw NonFiniteError("non-finite metric derivative");
            g0[i][j] = gj[i][j].value;
        }
    const Eigen::MatrixXd gi = checked_inverse(g0, n);

    // dg[l][j][k] = d_k g_lj
    auto dg = [&](int l, int j, int k) { return gj[l][j].grad[k]; };
    Christoffel out;
    out.n = n;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = j; k < n; ++k) {
                double s = 0.0;
                for (int l = 0; l < n; ++l) s += gi(i, l) * (dg(l, k, j) + dg(l, j, k) - dg(j, k, l));
                out.g[i][j][k] = out.g[i][k][j] = 0.5 * s;
            }
    return out;
}

double scalar_curvature_probe(const MetricField& g, const Vec3<double>& q) {
    check_metric_point(g, q);
    const int n = g.dim();
    Vec3<Jet2> qj;
    for (int i = 0; i < 3; ++i) qj[i] = i < n ? seed2(q[i], i) : Jet2(q[i]);
    const Mat3<Jet2> gj = g.eval<Jet2>(qj);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            if (!all_finite(gj[i][j])) throw NonFiniteError("non-finite metric derivative");

    Mat3<double> g0{};
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) g0[i][j] = gj[i][j].value.value;
    const Eigen::MatrixXd gi = checked_inverse(g0, n);

    // d1[a][b][k] = d_k g_ab,  d2[a][b][k][m] = d_m d_k g_ab
    auto d1 = [&](int a, int b, int k) { return gj[a][b].grad[k].value; };
    auto d2 = [&](int a, int b, int k, int m) { return gj[a][b].grad[k].grad[m]; };

    // Lowered symbols G_ljk = 1/2 (d_j g_lk + d_k g_lj - d_l g_jk) and their derivatives.
    double G[3][3][3] = {};
    double dG[3][3][3][3] = {};
    for (int l = 0; l < n; ++l)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k) {
                G[l][j][k] = 0.5 * (d1(l, k, j) + d1(l, j, k) - d1(j, k, l));
                for (int m = 0; m < n; ++m)
                    dG[l][j][k][m] = 0.5 * (d2(l, k, j, m) + d2(l, j, k, m) - d2(j, k, l, m));
            }

    // d_m g^il = -g^ia d_m g_ab g^bl
    double dgi[3][3][3] = {};
    for (int i = 0; i < n; ++i)
        for (int l = 0; l < n; ++l)
            for (int m = 0; m < n; ++m) {
                double s = 0.0;
                for (int a = 0; a < n; ++a)
                    for (int b = 0; b < n; ++b) s += gi(i, a) * d1(a, b, m) * gi(b, l);
                dgi[i][l][m] = -s;
            }

    double Gam[3][3][3] = {};
    double dGam[3][3][3][3] = {};  // d_m Gamma^i_jk
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k) {
                double s = 0.0;
                for (int l = 0; l < n; ++l) s += gi(i, l) * G[l][j][k];
                Gam[i][j][k] = s;
                for (int m = 0; m < n; ++m) {
                    double t = 0.0;
                    for (int l = 0; l < n; ++l) t += dgi[i][l][m] * G[l][j][k] + gi(i, l) * dG[l][j][k][m];
                    dGam[i][j][k][m] = t;
                }
            }

    // R_jk = d_i G^i_jk - d_k G^i_ji + G^i_ip G^p_jk - G^i_kp G^p_ji
    double R = 0.0;
    for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k) {
            double Rjk = 0.0;
            for (int i = 0; i < n; ++i) {
                Rjk += dGam[i][j][k][i] - dGam[i][j][i][k];
                for (int p = 0; p < n; ++p) Rjk += Gam[i][i][p] * Gam[p][j][k] - Gam[i][k][p] * Gam[p][j][i];
            }
            R += gi(j, k) * Rjk;
        }
    return R;
}

double metric_compatibility_residual(const MetricField& g, const Vec3<double>& q, double h) {
    const int n = g.dim();
    const Christoffel G = christoffel(g, q);
    const Mat3<double> g0 = g(q);
    double worst = 0.0;
    for (int k = 0; k < n; ++k) {
        Vec3<double> qp = q, qm = q;
        qp[k] += h;
        qm[k] -= h;
        const Mat3<double> gp = g(qp), gm = g(qm);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                double r = (gp[i][j] - gm[i][j]) / (2.0 * h);
                for (int l = 0; l < n; ++l) r -= G(l, k, i) * g0[l][j] + G(l, k, j) * g0[i][l];
                worst = std::max(worst, std::abs(r));
            }
    }
    return worst;
}

double geodesic_residual(const MetricField& g, const Observable& T, const Trajectory& traj) {
    const int n = g.dim();
    if (T.dim() != n || traj.chart.dim != n) throw DimensionMismatch("metric, Hamiltonian and trajectory differ");
    if (traj.chart.kind != g.chart().kind)
        throw ArgumentError("trajectory must be expressed in the metric's chart");
    double worst = 0.0;
    for (const auto& z : traj.states) {
        const auto X = hamiltonian_vector_field(T, z);
        const auto DX = vector_field_jacobian(T, z);
        const int m = 2 * n;
        const Christoffel G = christoffel(g, z.q);
        for (int i = 0; i < n; ++i) {
            double acc = 0.0;  // qddot^i = sum_j DX[i][j] X[j]
            for (int j = 0; j < m; ++j) acc += DX[static_cast<std::size_t>(i * m + j)] * X[j];
            for (int j = 0; j < n; ++j)
                for (int k = 0; k < n; ++k) acc += G(i, j, k) * X[j] * X[k];
            worst = std::max(worst, std::abs(acc));
        }
    }
    return worst;
}

int homogeneity_degree(const Observable& F, Chart chart, const Vec3<double>& q) {
    static const double probes[3][3] = {{0.7, -0.3, 0.5}, {-1.1, 0.4, 0.9}, {0.2, 1.3, -0.6}};
    static const double scales[3] = {-2.0, 0.5, 3.0};
    const int n = chart.dim;
    for (int deg : {1, 2}) {
        bool ok = true;
        for (const auto& pr : probes) {
            PhasePoint z{chart, q, {}};
            for (int i = 0; i < n; ++i) z.p[i] = pr[i];
            const double f1 = evaluate(F, z);
            for (double s : scales) {
                PhasePoint zs = z;
                for (int i = 0; i < n; ++i) zs.p[i] = s * pr[i];
                const double fs = evaluate(F, zs);
                const double expect = deg == 1 ? s * f1 : s * s * f1;
                if (std::abs(fs - expect) > 1e-12 * (1.0 + std::abs(fs) + std::abs(expect))) ok = false;
            }
        }
        if (ok) return deg;
    }
    return 0;
}

KillingTensor extract_killing_tensor(const Observable& F, Chart chart, const Vec3<double>& q) {
    if (F.dim() != chart.dim) throw DimensionMismatch("observable and chart dimensions differ");
    const int deg = homogeneity_degree(F, chart, q);
    if (deg != 2) throw DegreeError(F.name() + " is not homogeneous quadratic in the momenta");
    const int n = chart.dim;
    PhasePoint z{chart, q, {}};
    const SecondOrder s = second_order(F, z);
    KillingTensor out;
    out.n = n;
    for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j) out.k[i][j] = out.k[j][i] = 0.25 * (s.hess(n + i, n + j) + s.hess(n + j, n + i));
    return out;
}

KillingCheck killing_check(const Observable& F, const Observable& T, const std::vector<PhasePoint>& samples) {
    KillingCheck out;
    for (const auto& z : samples) {
        const int deg = homogeneity_degree(F, z.chart, z.q);
        if (deg == 0) throw DegreeError(F.name() + " is neither linear nor quadratic homogeneous in p");
        // {F, 2T} = 2 {F, T}; scale doubles with it.
        const BracketValue b = poisson_bracket_scaled(F, T, z);
        const double v = 2.0 * std::abs(b.value);
        out.max_abs = std::max(out.max_abs, v);
        out.max_scaled = std::max(out.max_scaled, v / (1.0 + 2.0 * b.scale));
    }
    return out;
}

std::uint64_t killing_dimension(int n, int p) {
    if (n < 1 || p < 1) throw ArgumentError("killing_dimension needs n >= 1 and p >= 1");
    auto binom = [](std::uint64_t a, std::uint64_t b) {
        if (b > a) return std::uint64_t{0};
        b = std::min(b, a - b);
        std::uint64_t r = 1;
        for (std::uint64_t i = 1; i <= b; ++i) r = r * (a - b + i) / i;
        return r;
    };
    const auto N = static_cast<std::uint64_t>(n);
    const auto P = static_cast<std::uint64_t>(p);
    return binom(N + P, P + 1) * binom(N + P - 1, P) / N;
}

}  // namespace superint
