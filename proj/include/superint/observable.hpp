#pragma once

#include <functional>
#include <optional>
#include <string>
#include <type_traits>

#include "superint/charts.hpp"
#include "superint/jet.hpp"

namespace superint {

// Admissible-set predicate on Cartesian configuration coordinates. `margin`
// is the minimum distance kept from every singular quantity.
using DomainPredicate = std::function<bool(const Vec3<double>& q_cart, double margin)>;

// A named scalar phase-space function, written in its native chart and
// evaluable on plain doubles and on first/second-order jets.
class Observable {
public:
    template <class S>
    using Fn = std::function<S(const Vec3<S>& q, const Vec3<S>& p)>;

    Observable() = default;

    // `f` must be a generic callable usable with S = double, Jet1, Jet2.
    template <class F>
    static Observable make(std::string name, Chart native, F f,
                           std::optional<int> degree_in_p = std::nullopt,
                           DomainPredicate domain = {}) {
        Observable o;
        o.name_ = std::move(name);
        o.native_ = native;
        o.degree_ = degree_in_p;
        o.domain_ = std::move(domain);
        o.fd_ = f;
        o.fj_ = f;
        o.fjj_ = f;
        return o;
    }

    const std::string& name() const { return name_; }
    Chart native_chart() const { return native_; }
    int dim() const { return native_.dim; }
    std::optional<int> degree_in_p() const { return degree_; }
    const DomainPredicate& domain() const { return domain_; }

    Observable renamed(std::string name) const {
        Observable o = *this;
        o.name_ = std::move(name);
        return o;
    }
    Observable with_domain(DomainPredicate d) const {
        Observable o = *this;
        o.domain_ = std::move(d);
        return o;
    }

    // Evaluate on variables expressed in chart `kind` (converted to the native
    // chart through Cartesian coordinates when they differ).
    template <class S>
    S eval_in(ChartKind kind, const Vec3<S>& q, const Vec3<S>& p) const {
        if (kind == native_.kind) return native_fn<S>()(q, p);
        auto v = convert_vars<S>(kind, native_.kind, q, p);
        return native_fn<S>()(v.q, v.p);
    }

    // Unchecked plain evaluation.
    double operator()(const PhasePoint& z) const { return eval_in<double>(z.chart.kind, z.q, z.p); }

private:
    template <class S>
    const Fn<S>& native_fn() const {
        if constexpr (std::is_same_v<S, double>) {
            return fd_;
        } else if constexpr (std::is_same_v<S, Jet1>) {
            return fj_;
        } else {
            static_assert(std::is_same_v<S, Jet2>, "unsupported scalar type");
            return fjj_;
        }
    }

    std::string name_;
    Chart native_{};
    std::optional<int> degree_;
    DomainPredicate domain_;
    Fn<double> fd_;
    Fn<Jet1> fj_;
    Fn<Jet2> fjj_;
};

// Scalar field on configuration space (potentials, masses, metric factors).
class ScalarField {
public:
    template <class S>
    using Fn = std::function<S(const Vec3<S>& q)>;

    ScalarField() = default;

    template <class F>
    static ScalarField make(std::string name, F f) {
        ScalarField s;
        s.name_ = std::move(name);
        s.fd_ = f;
        s.fj_ = f;
        s.fjj_ = f;
        return s;
    }

    const std::string& name() const { return name_; }

    template <class S>
    S eval(const Vec3<S>& q) const {
        if constexpr (std::is_same_v<S, double>) {
            return fd_(q);
        } else if constexpr (std::is_same_v<S, Jet1>) {
            return fj_(q);
        } else {
            return fjj_(q);
        }
    }
    double operator()(const Vec3<double>& q) const { return fd_(q); }

private:
    std::string name_;
    Fn<double> fd_;
    Fn<Jet1> fj_;
    Fn<Jet2> fjj_;
};

}  // namespace superint
