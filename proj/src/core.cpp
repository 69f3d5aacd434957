#include "superint/core.hpp"

#include <cmath>
#include <string>

namespace superint {

namespace {

void check_finite_point(const PhasePoint& z) {
    for (int i = 0; i < z.n(); ++i)
        if (!std::isfinite(z.q[i]) || !std::isfinite(z.p[i]))
            throw NonFiniteError("phase point has non-finite entries");
}

void check_dims(const Observable& f, const PhasePoint& z) {
    if (f.dim() != z.n())
        throw DimensionMismatch("observable " + f.name() + " lives on a " + std::to_string(f.dim()) +
                                "-dof phase space, point has " + std::to_string(z.n()));
}

template <class S>
void fill_seeds(const PhasePoint& z, Vec3<S>& q, Vec3<S>& p) {
    const int n = z.n();
    for (int i = 0; i < 3; ++i) {
        q[i] = S(z.q[i]);
        p[i] = S(z.p[i]);
    }
    for (int i = 0; i < n; ++i) {
        if constexpr (std::is_same_v<S, Jet1>) {
            q[i] = seed1(z.q[i], i);
            p[i] = seed1(z.p[i], n + i);
        } else {
            q[i] = seed2(z.q[i], i);
            p[i] = seed2(z.p[i], n + i);
        }
    }
}

Jet1 eval_jet1(const Observable& f, const PhasePoint& z) {
    check_dims(f, z);
    require_domain(f, z);
    Vec3<Jet1> q, p;
    fill_seeds(z, q, p);
    Jet1 r = f.eval_in<Jet1>(z.chart.kind, q, p);
    if (!all_finite(r)) throw NonFiniteError("non-finite derivative of " + f.name());
    return r;
}

}  // namespace

void require_domain(const Observable& f, const PhasePoint& z, double margin) {
    check_finite_point(z);
    if (!in_chart_domain(z, margin))
        throw DomainError("point outside the domain of chart " + chart_name(z.chart));
    if (!f.domain()) return;
    Vec3<double> qc = z.q;
    if (z.chart.kind != ChartKind::Cartesian) qc = to_cartesian_vars<double>(z.chart.kind, z.q, z.p).q;
    if (!f.domain()(qc, margin)) throw DomainError("point outside the domain of " + f.name());
}

double evaluate(const Observable& f, const PhasePoint& z) {
    check_dims(f, z);
    require_domain(f, z);
    double v = f(z);
    if (!std::isfinite(v)) throw NonFiniteError("non-finite value of " + f.name());
    return v;
}

ValueGrad value_and_grad(const Observable& f, const PhasePoint& z) {
    Jet1 r = eval_jet1(f, z);
    const int m = 2 * z.n();
    return {r.value, std::vector<double>(r.grad.begin(), r.grad.begin() + m)};
}

std::vector<double> grad_phase(const Observable& f, const PhasePoint& z) {
    return value_and_grad(f, z).grad;
}

SecondOrder second_order(const Observable& f, const PhasePoint& z) {
    check_dims(f, z);
    require_domain(f, z);
    Vec3<Jet2> q, p;
    fill_seeds(z, q, p);
    Jet2 r = f.eval_in<Jet2>(z.chart.kind, q, p);
    if (!all_finite(r)) throw NonFiniteError("non-finite second derivative of " + f.name());

    const int m = 2 * z.n();
    SecondOrder out;
    out.value = r.value.value;
    out.grad.assign(r.value.grad.begin(), r.value.grad.begin() + m);
    out.hess.size = m;
    out.hess.a.resize(static_cast<std::size_t>(m * m));
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) out.hess.a[static_cast<std::size_t>(i * m + j)] = r.grad[i].grad[j];
    return out;
}

BracketValue poisson_bracket_scaled(const Observable& f, const Observable& g, const PhasePoint& z) {
    if (f.dim() != g.dim())
        throw DimensionMismatch("bracket of " + f.name() + " and " + g.name() + " across phase spaces");
    const Jet1 a = eval_jet1(f, z);
    const Jet1 b = eval_jet1(g, z);
    const int n = z.n();
    BracketValue out;
    for (int i = 0; i < n; ++i) {
        const double t1 = a.grad[i] * b.grad[n + i];
        const double t2 = a.grad[n + i] * b.grad[i];
        out.value += t1 - t2;
        out.scale += std::abs(t1) + std::abs(t2);
    }
    return out;
}

double poisson_bracket(const Observable& f, const Observable& g, const PhasePoint& z) {
    return poisson_bracket_scaled(f, g, z).value;
}

std::vector<double> bracket_gradient(const Observable& g, const Observable& h, const PhasePoint& z) {
    if (g.dim() != h.dim())
        throw DimensionMismatch("bracket of " + g.name() + " and " + h.name() + " across phase spaces");
    const SecondOrder G = second_order(g, z);
    const SecondOrder H = second_order(h, z);
    const int n = z.n();
    const int m = 2 * n;
    std::vector<double> out(static_cast<std::size_t>(m), 0.0);
    for (int k = 0; k < m; ++k) {
        double s = 0.0;
        for (int i = 0; i < n; ++i) {
            s += G.hess(k, i) * H.grad[n + i] + G.grad[i] * H.hess(k, n + i);
            s -= G.hess(k, n + i) * H.grad[i] + G.grad[n + i] * H.hess(k, i);
        }
        out[k] = s;
    }
    return out;
}

BracketValue jacobi_residual(const Observable& f, const Observable& g, const Observable& h,
                             const PhasePoint& z) {
    const int n = z.n();
    auto outer = [n](const std::vector<double>& a, const std::vector<double>& b, BracketValue& acc) {
        for (int i = 0; i < n; ++i) {
            const double t1 = a[i] * b[n + i];
            const double t2 = a[n + i] * b[i];
            acc.value += t1 - t2;
            acc.scale += std::abs(t1) + std::abs(t2);
        }
    };
    BracketValue acc;
    outer(grad_phase(f, z), bracket_gradient(g, h, z), acc);
    outer(grad_phase(g, z), bracket_gradient(h, f, z), acc);
    outer(grad_phase(h, z), bracket_gradient(f, g, z), acc);
    return acc;
}

std::vector<double> hamiltonian_vector_field(const Observable& H, const PhasePoint& z) {
    const Jet1 r = eval_jet1(H, z);
    const int n = z.n();
    std::vector<double> out(static_cast<std::size_t>(2 * n));
    for (int i = 0; i < n; ++i) {
        out[i] = r.grad[n + i];
        out[n + i] = -r.grad[i];
    }
    return out;
}

std::vector<double> vector_field_jacobian(const Observable& H, const PhasePoint& z) {
    const SecondOrder s = second_order(H, z);
    const int n = z.n();
    const int m = 2 * n;
    std::vector<double> out(static_cast<std::size_t>(m * m));
    for (int j = 0; j < m; ++j) {
        for (int i = 0; i < n; ++i) {
            out[static_cast<std::size_t>(i * m + j)] = s.hess(n + i, j);
            out[static_cast<std::size_t>((n + i) * m + j)] = -s.hess(i, j);
        }
    }
    return out;
}

}  // namespace superint
