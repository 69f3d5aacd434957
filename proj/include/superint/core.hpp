#pragma once

// Phase-space calculus: exact gradients, Poisson brackets and Hamiltonian
// vector fields via forward-mode jets.
//
// Ordering of phase variables everywhere: (q^1..q^n, p_1..p_n).

#include <vector>

#include "superint/observable.hpp"

namespace superint {

// Tolerance policy for "equals zero" assertions: residual <= atol + rtol * scale.
inline constexpr double kAtol = 1e-10;
inline constexpr double kRtol = 1e-10;

inline bool within_tolerance(double residual, double scale, double atol = kAtol, double rtol = kRtol) {
    return residual <= atol + rtol * scale;
}

// Domain guard applied before every evaluation: chart domain of z and the
// observable's own predicate on the Cartesian projection, both with `margin`.
void require_domain(const Observable& f, const PhasePoint& z, double margin = 0.0);

// Checked evaluation (domain + finiteness).
double evaluate(const Observable& f, const PhasePoint& z);

// (df/dq, df/dp), exact to rounding.
std::vector<double> grad_phase(const Observable& f, const PhasePoint& z);

// Value and gradient in one pass.
struct ValueGrad {
    double value = 0.0;
    std::vector<double> grad;
};
ValueGrad value_and_grad(const Observable& f, const PhasePoint& z);

// Dense 2n x 2n Hessian (row-major) from nested jets.
struct Hessian {
    int size = 0;
    std::vector<double> a;
    double operator()(int i, int j) const { return a[static_cast<std::size_t>(i * size + j)]; }
};

struct SecondOrder {
    double value = 0.0;
    std::vector<double> grad;
    Hessian hess;
};
SecondOrder second_order(const Observable& f, const PhasePoint& z);

// Canonical bracket sum_i (df/dq^i dg/dp_i - df/dp_i dg/dq^i).
double poisson_bracket(const Observable& f, const Observable& g, const PhasePoint& z);

// Bracket value together with its cancellation scale: the sum of absolute
// values of the 2n products entering the bracket.
struct BracketValue {
    double value = 0.0;
    double scale = 0.0;
};
BracketValue poisson_bracket_scaled(const Observable& f, const Observable& g, const PhasePoint& z);

// Gradient of the function z -> {g, h}(z), exact through second-order jets.
std::vector<double> bracket_gradient(const Observable& g, const Observable& h, const PhasePoint& z);

// {f,{g,h}} + {g,{h,f}} + {h,{f,g}} with the matching cancellation scale.
BracketValue jacobi_residual(const Observable& f, const Observable& g, const Observable& h,
                             const PhasePoint& z);

// (qdot, pdot) = (dH/dp, -dH/dq).
std::vector<double> hamiltonian_vector_field(const Observable& H, const PhasePoint& z);

// Jacobian of the Hamiltonian vector field, 2n x 2n row-major.
std::vector<double> vector_field_jacobian(const Observable& H, const PhasePoint& z);

}  // namespace superint
