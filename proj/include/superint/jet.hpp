#pragma once

// Forward-mode differentiation jets over the phase-space variables.
//
// A Jet<T> carries a value and its gradient with respect to up to
// kMaxVars independent variables (q^1..q^n, p_1..p_n with n <= 3).
// Nesting (Jet<Jet<double>>) yields exact second derivatives.

#include <array>
#include <cmath>
#include <cstddef>
#include <type_traits>

namespace superint {

inline constexpr int kMaxVars = 6;

template <class T>
struct Jet {
    T value{};
    std::array<T, kMaxVars> grad{};

    Jet() = default;
    Jet(double v) : value(v) {}  // NOLINT: constants promote implicitly
    Jet(T v, const std::array<T, kMaxVars>& g) : value(std::move(v)), grad(g) {}

    Jet& operator+=(const Jet& o) {
        value += o.value;
        for (int i = 0; i < kMaxVars; ++i) grad[i] += o.grad[i];
        return *this;
    }
    Jet& operator-=(const Jet& o) {
        value -= o.value;
        for (int i = 0; i < kMaxVars; ++i) grad[i] -= o.grad[i];
        return *this;
    }
    Jet& operator*=(const Jet& o) { return *this = *this * o; }
    Jet& operator/=(const Jet& o) { return *this = *this / o; }
};

// The two jet levels used throughout.
using Jet1 = Jet<double>;
using Jet2 = Jet<Jet<double>>;

template <class S>
struct is_jet : std::false_type {};
template <class T>
struct is_jet<Jet<T>> : std::true_type {};

// ---- scalar overloads so generic code can call sqrt/sin/... unqualified ----

inline double sqrt(double x) { return std::sqrt(x); }
inline double sin(double x) { return std::sin(x); }
inline double cos(double x) { return std::cos(x); }
inline double exp(double x) { return std::exp(x); }
inline double log(double x) { return std::log(x); }
inline double atan2(double y, double x) { return std::atan2(y, x); }

inline double value_of(double x) { return x; }
template <class T>
double value_of(const Jet<T>& x) {
    return value_of(x.value);
}

inline bool all_finite(double x) { return std::isfinite(x); }
template <class T>
bool all_finite(const Jet<T>& x) {
    if (!all_finite(x.value)) return false;
    for (const auto& g : x.grad)
        if (!all_finite(g)) return false;
    return true;
}

// ---- arithmetic ----

template <class T>
Jet<T> operator-(const Jet<T>& a) {
    Jet<T> r;
    r.value = -a.value;
    for (int i = 0; i < kMaxVars; ++i) r.grad[i] = -a.grad[i];
    return r;
}
template <class T>
Jet<T> operator+(const Jet<T>& a) {
    return a;
}

template <class T>
Jet<T> operator+(const Jet<T>& a, const Jet<T>& b) {
    Jet<T> r;
    r.value = a.value + b.value;
    for (int i = 0; i < kMaxVars; ++i) r.grad[i] = a.grad[i] + b.grad[i];
    return r;
}
template <class T>
Jet<T> operator-(const Jet<T>& a, const Jet<T>& b) {
    Jet<T> r;
    r.value = a.value - b.value;
    for (int i = 0; i < kMaxVars; ++i) r.grad[i] = a.grad[i] - b.grad[i];
    return r;
}
template <class T>
Jet<T> operator*(const Jet<T>& a, const Jet<T>& b) {
    Jet<T> r;
    r.value = a.value * b.value;
    for (int i = 0; i < kMaxVars; ++i) r.grad[i] = a.grad[i] * b.value + a.value * b.grad[i];
    return r;
}
template <class T>
Jet<T> operator/(const Jet<T>& a, const Jet<T>& b) {
    Jet<T> r;
    T inv = 1.0 / b.value;
    r.value = a.value * inv;
    for (int i = 0; i < kMaxVars; ++i) r.grad[i] = (a.grad[i] - r.value * b.grad[i]) * inv;
    return r;
}

template <class T>
Jet<T> operator+(const Jet<T>& a, double b) {
    Jet<T> r = a;
    r.value = r.value + b;
    return r;
}
template <class T>
Jet<T> operator+(double a, const Jet<T>& b) {
    return b + a;
}
template <class T>
Jet<T> operator-(const Jet<T>& a, double b) {
    Jet<T> r = a;
    r.value = r.value - b;
    return r;
}
template <class T>
Jet<T> operator-(double a, const Jet<T>& b) {
    Jet<T> r = -b;
    r.value = a + r.value;
    return r;
}
template <class T>
Jet<T> operator*(const Jet<T>& a, double b) {
    Jet<T> r;
    r.value = a.value * b;
    for (int i = 0; i < kMaxVars; ++i) r.grad[i] = a.grad[i] * b;
    return r;
}
template <class T>
Jet<T> operator*(double a, const Jet<T>& b) {
    Jet<T> r;
    r.value = a * b.value;
    for (int i = 0; i < kMaxVars; ++i) r.grad[i] = a * b.grad[i];
    return r;
}
template <class T>
Jet<T> operator/(const Jet<T>& a, double b) {
    return a * (1.0 / b);
}
template <class T>
Jet<T> operator/(double a, const Jet<T>& b) {
    Jet<T> r;
    T inv = 1.0 / b.value;
    r.value = a * inv;
    T d = -(r.value * inv);
    for (int i = 0; i < kMaxVars; ++i) r.grad[i] = d * b.grad[i];
    return r;
}

// ---- elementary functions (chain rule through every level) ----

template <class T>
Jet<T> sqrt(const Jet<T>& a) {
    Jet<T> r;
    r.value = sqrt(a.value);
    T d = 0.5 / r.value;
    for (int i = 0; i < kMaxVars; ++i) r.grad[i] = d * a.grad[i];
    return r;
}
template <class T>
Jet<T> sin(const Jet<T>& a) {
    Jet<T> r;
    r.value = sin(a.value);
    T d = cos(a.value);
    for (int i = 0; i < kMaxVars; ++i) r.grad[i] = d * a.grad[i];
    return r;
}
template <class T>
Jet<T> cos(const Jet<T>& a) {
    Jet<T> r;
    r.value = cos(a.value);
    T d = -sin(a.value);
    for (int i = 0; i < kMaxVars; ++i) r.grad[i] = d * a.grad[i];
    return r;
}
template <class T>
Jet<T> exp(const Jet<T>& a) {
    Jet<T> r;
    r.value = exp(a.value);
    for (int i = 0; i < kMaxVars; ++i) r.grad[i] = r.value * a.grad[i];
    return r;
}
template <class T>
Jet<T> log(const Jet<T>& a) {
    Jet<T> r;
    r.value = log(a.value);
    T d = 1.0 / a.value;
    for (int i = 0; i < kMaxVars; ++i) r.grad[i] = d * a.grad[i];
    return r;
}
// d atan2(y, x) = (x dy - y dx) / (x^2 + y^2)
template <class T>
Jet<T> atan2(const Jet<T>& y, const Jet<T>& x) {
    Jet<T> r;
    r.value = atan2(y.value, x.value);
    T inv = 1.0 / (x.value * x.value + y.value * y.value);
    for (int i = 0; i < kMaxVars; ++i) r.grad[i] = (x.value * y.grad[i] - y.value * x.grad[i]) * inv;
    return r;
}

template <class S>
S square(const S& a) {
    return a * a;
}

// ---- seeding ----

// Independent variable `index` at value v.
inline Jet1 seed1(double v, int index) {
    Jet1 r(v);
    r.grad[index] = 1.0;
    return r;
}

// Independent variable seeded at both nesting levels (for Hessians).
inline Jet2 seed2(double v, int index) {
    Jet2 r;
    r.value = seed1(v, index);
    r.grad[index] = Jet1(1.0);
    return r;
}

}  // namespace superint
