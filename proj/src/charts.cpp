#include "superint/charts.hpp"

#include <algorithm>
#include <cmath>

namespace superint {

std::string chart_name(Chart c) {
    switch (c.kind) {
        case ChartKind::Cartesian:
            return "Cartesian" + std::to_string(c.dim);
        case ChartKind::Cylindrical:
            return c.dim == 3 ? "Cylindrical" : "Polar";
        case ChartKind::ParabolicI:
            return c.dim == 3 ? "ParabolicCylI" : "ParabolicI";
        case ChartKind::ParabolicII:
            return c.dim == 3 ? "ParabolicCylII" : "ParabolicII";
    }
    return "?";
}

Chart chart_from_name(const std::string& name) {
    if (name == "Cartesian1") return Chart::cartesian(1);
    if (name == "Cartesian2") return Chart::cartesian(2);
    if (name == "Cartesian3") return Chart::cartesian(3);
    if (name == "Cylindrical") return Chart::cylindrical(3);
    if (name == "Polar") return Chart::cylindrical(2);
    if (name == "ParabolicCylI") return Chart::parabolic1(3);
    if (name == "ParabolicI") return Chart::parabolic1(2);
    if (name == "ParabolicCylII") return Chart::parabolic2(3);
    if (name == "ParabolicII") return Chart::parabolic2(2);
    throw ArgumentError("unknown chart '" + name + "'");
}

namespace {

void check_point(const PhasePoint& z) {
    const int n = z.n();
    if (n < 1 || n > 3) throw DimensionMismatch("phase point dimension must be 1..3");
    if (z.chart.kind != ChartKind::Cartesian && n < 2)
        throw DimensionMismatch("curvilinear charts need at least two coordinates");
    for (int i = 0; i < n; ++i)
        if (!std::isfinite(z.q[i]) || !std::isfinite(z.p[i]))
            throw NonFiniteError("phase point has non-finite entries");
}

}  // namespace

bool in_chart_domain(const PhasePoint& z, double margin) {
    switch (z.chart.kind) {
        case ChartKind::Cartesian:
            return true;
        case ChartKind::Cylindrical:
        case ChartKind::ParabolicI:
        case ChartKind::ParabolicII:
            return z.q[0] > margin;
    }
    return false;
}

bool in_chart_image(const Vec3<double>& q, ChartKind target, double margin) {
    const double r = std::hypot(q[0], q[1]);
    switch (target) {
        case ChartKind::Cartesian:
            return true;
        case ChartKind::Cylindrical:
            return r > margin;
        case ChartKind::ParabolicI:
            return r + q[0] > margin * margin && std::sqrt(r + q[0]) > margin;
        case ChartKind::ParabolicII:
            return r + q[1] > margin * margin && std::sqrt(r + q[1]) > margin;
    }
    return false;
}

PhasePoint to_cartesian(const PhasePoint& z, double margin) {
    check_point(z);
    if (!in_chart_domain(z, margin))
        throw DomainError("point outside the domain of chart " + chart_name(z.chart));
    auto v = to_cartesian_vars<double>(z.chart.kind, z.q, z.p);
    PhasePoint out{Chart::cartesian(z.n()), v.q, v.p};
    for (int i = z.n(); i < 3; ++i) out.q[i] = out.p[i] = 0.0;
    return out;
}

PhasePoint from_cartesian(const PhasePoint& z, Chart target, double margin) {
    check_point(z);
    if (z.chart.kind != ChartKind::Cartesian)
        throw ArgumentError("from_cartesian expects a Cartesian point");
    if (target.dim != z.n()) throw DimensionMismatch("target chart dimension differs from point");
    if (!in_chart_image(z.q, target.kind, margin))
        throw DomainError("point outside the image of chart " + chart_name(target));
    auto v = from_cartesian_vars<double>(target.kind, z.q, z.p);
    return {target, v.q, v.p};
}

PhasePoint convert(const PhasePoint& z, Chart target, double margin) {
    if (z.chart == target) return z;
    return from_cartesian(to_cartesian(z, margin), target, margin);
}

double symplectomorphism_check(Chart chart, const PhasePoint& z) {
    if (z.chart != chart) throw ArgumentError("point is not expressed in the checked chart");
    const PhasePoint c = to_cartesian(z);
    const int n = z.n();

    // Seed Cartesian variables and push them through the inverse map.
    Vec3<Jet1> q, p;
    for (int i = 0; i < 3; ++i) {
        q[i] = Jet1(c.q[i]);
        p[i] = Jet1(c.p[i]);
    }
    for (int i = 0; i < n; ++i) {
        q[i] = seed1(c.q[i], i);
        p[i] = seed1(c.p[i], n + i);
    }
    auto v = from_cartesian_vars<Jet1>(chart.kind, q, p);

    auto bracket = [n](const Jet1& f, const Jet1& g) {
        double s = 0.0;
        for (int i = 0; i < n; ++i) s += f.grad[i] * g.grad[n + i] - f.grad[n + i] * g.grad[i];
        return s;
    };

    double worst = 0.0;
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            const double delta = (i == j) ? 1.0 : 0.0;
            worst = std::max(worst, std::abs(bracket(v.q[i], v.p[j]) - delta));
            worst = std::max(worst, std::abs(bracket(v.q[i], v.q[j])));
            worst = std::max(worst, std::abs(bracket(v.p[i], v.p[j])));
        }
    }
    return worst;
}

}  // namespace superint
