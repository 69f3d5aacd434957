#include "superint/verify.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include <Eigen/Dense>

#include "json.hpp"
#include "superint/core.hpp"
#include "superint/geometry.hpp"

namespace superint {

namespace {

double rel(double residual, double scale) { return residual / (1.0 + scale); }

Check make_check(std::string name, std::string kind, double residual, double tol) {
    return {std::move(name), std::move(kind), residual, tol, residual <= tol};
}

std::string join(const std::vector<std::string>& v) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + v[i];
    return s;
}

Tier lower_tier(Tier t) {
    switch (t) {
        case Tier::PDMGeodesic:
            return Tier::Geodesic3D;
        case Tier::PDMPotential:
            return Tier::Potential3D;
        default:
            return t;
    }
}

// Compares two systems observable-by-observable (Hamiltonian, then integrals
// in declaration order) at the given points.
void compare_systems(const System& a, const System& b, const std::vector<PhasePoint>& pts, const std::string& tag,
                     double tol, std::vector<Check>& out) {
    auto one = [&](const Observable& fa, const Observable& fb) {
        double worst = 0.0;
        for (const auto& z : pts) {
            const double va = evaluate(fa, z);
            const double vb = evaluate(fb, z);
            worst = std::max(worst, rel(std::abs(va - vb), std::abs(va) + std::abs(vb)));
        }
        out.push_back(make_check(tag + ": " + fa.name() + " = " + fb.name(), "limit", worst, tol));
    };
    one(a.hamiltonian, b.hamiltonian);
    for (std::size_t i = 0; i < a.integrals.size() && i < b.integrals.size(); ++i) one(a.integrals[i], b.integrals[i]);
}

}  // namespace

// ---------------------------------------------------------------------------
// Sampling

SamplerOptions flow_sampler() {
    SamplerOptions o;
    o.lo = 0.8;
    o.hi = 1.2;
    o.pmax = 0.1;
    o.zmax = 0.2;
    return o;
}

PhasePoint sample_point(const System& sys, CounterRng& rng, const SamplerOptions& opt) {
    const int n = sys.dim;
    for (int attempt = 0; attempt < opt.max_attempts; ++attempt) {
        PhasePoint z{Chart::cartesian(n), {}, {}};
        z.q[0] = rng.uniform(opt.lo, opt.hi);
        z.q[1] = rng.uniform(opt.lo, opt.hi);
        const double zz = rng.uniform(-opt.zmax, opt.zmax);
        for (int i = 0; i < 3; ++i) z.p[i] = rng.uniform(-opt.pmax, opt.pmax);
        if (n == 3) {
            z.q[2] = zz;
        } else {
            z.p[2] = 0.0;
        }
        if (sys.domain && !sys.domain(z.q, opt.margin)) continue;
        bool ok = true;
        for (const Chart& c : sys.charts) ok = ok && in_chart_image(z.q, c.kind, opt.margin);
        if (ok) return z;
    }
    throw SamplerExhausted("no admissible point for " + sys.spec.label() + " after " +
                           std::to_string(opt.max_attempts) + " attempts");
}

std::vector<PhasePoint> sample_points(const System& sys, int count, std::uint64_t seed, const SamplerOptions& opt) {
    CounterRng rng(seed);
    std::vector<PhasePoint> out;
    out.reserve(static_cast<std::size_t>(std::max(count, 0)));
    for (int i = 0; i < count; ++i) out.push_back(sample_point(sys, rng, opt));
    return out;
}

std::vector<const Check*> VerificationReport::failures() const {
    std::vector<const Check*> out;
    for (const auto& c : checks)
        if (!c.pass) out.push_back(&c);
    return out;
}

// ---------------------------------------------------------------------------
// Brackets

InvolutionMatrix involution_matrix(const SystemSpec& spec, int samples, std::uint64_t seed) {
    const System sys = build_system(spec);
    const auto pts = sample_points(sys, samples, seed);
    std::vector<const Observable*> obs{&sys.hamiltonian};
    for (const auto& o : sys.integrals) obs.push_back(&o);

    InvolutionMatrix m;
    const std::size_t N = obs.size();
    for (const auto* o : obs) m.names.push_back(o->name());
    m.residual.assign(N, std::vector<double>(N, 0.0));
    m.declared.assign(N, std::vector<bool>(N, false));
    auto index = [&](const std::string& nm) {
        return static_cast<std::size_t>(std::find(m.names.begin(), m.names.end(), nm) - m.names.begin());
    };
    for (const auto& r : sys.relations) {
        if (r.kind != RelationKind::Zero) continue;
        const std::size_t i = index(r.lhs), j = index(r.rhs);
        if (i < N && j < N) m.declared[i][j] = m.declared[j][i] = true;
    }
    for (std::size_t i = 0; i < N; ++i)
        for (std::size_t j = i + 1; j < N; ++j) {
            double worst = 0.0;
            for (const auto& z : pts) {
                const BracketValue b = poisson_bracket_scaled(*obs[i], *obs[j], z);
                worst = std::max(worst, rel(std::abs(b.value), b.scale));
            }
            m.residual[i][j] = m.residual[j][i] = worst;
            if (m.declared[i][j] && worst > kBracketTol) m.pass = false;
        }
    return m;
}

std::vector<Check> bracket_checks(const System& sys, const std::vector<PhasePoint>& pts) {
    std::vector<Check> out;
    for (const auto& r : sys.relations) {
        if (r.kind != RelationKind::Zero) continue;
        const Observable& f = sys.get(r.lhs);
        const Observable& g = sys.get(r.rhs);
        double worst = 0.0;
        for (const auto& z : pts) {
            const BracketValue b = poisson_bracket_scaled(f, g, z);
            worst = std::max(worst, rel(std::abs(b.value), b.scale));
        }
        out.push_back(make_check("{" + r.lhs + "," + r.rhs + "} = 0", "bracket", worst, kBracketTol));
    }
    return out;
}

std::vector<Check> identity_checks(const System& sys, const std::vector<PhasePoint>& pts) {
    std::vector<Check> out;
    for (const auto& r : sys.relations) {
        if (r.kind == RelationKind::Zero) continue;
        const Observable& a = sys.get(r.lhs);
        const Observable& b = sys.get(r.rhs);
        double worst = 0.0;
        for (const auto& z : pts) {
            const double va = evaluate(a, z);
            const double vb = evaluate(b, z);
            if (r.kind == RelationKind::SumZeroWith) {
                worst = std::max(worst, rel(std::abs(va + vb), std::abs(va) + std::abs(vb)));
            } else {
                const double vt = evaluate(sys.get(r.target), z);
                worst = std::max(worst,
                                 rel(std::abs(vt - 0.5 * (va + vb)), std::abs(vt) + std::abs(va) + std::abs(vb)));
            }
        }
        const std::string name = r.kind == RelationKind::SumZeroWith
                                     ? r.lhs + " + " + r.rhs + " = 0"
                                     : r.target + " = (" + r.lhs + " + " + r.rhs + ")/2";
        out.push_back(make_check(name, "identity", worst, kIdentityTol));
    }
    return out;
}

std::vector<Check> identity_checks(const SystemSpec& spec, int samples, std::uint64_t seed) {
    const System sys = build_system(spec);
    return identity_checks(sys, sample_points(sys, samples, seed));
}

// ---------------------------------------------------------------------------
// Independence

RankResult rank_of_set(const System& sys, const std::vector<std::string>& names, const std::vector<PhasePoint>& points,
                       double cutoff) {
    RankResult r;
    r.expected = static_cast<int>(names.size());
    r.min_rank = r.expected;
    std::vector<const Observable*> obs;
    for (const auto& nm : names) obs.push_back(&sys.get(nm));
    for (const auto& z : points) {
        const int m = 2 * z.n();
        Eigen::MatrixXd J(static_cast<Eigen::Index>(obs.size()), m);
        for (std::size_t i = 0; i < obs.size(); ++i) {
            const auto g = grad_phase(*obs[i], z);
            for (int j = 0; j < m; ++j) J(static_cast<Eigen::Index>(i), j) = g[static_cast<std::size_t>(j)];
        }
        const Eigen::JacobiSVD<Eigen::MatrixXd> svd(J);
        const auto& s = svd.singularValues();
        int rank = 0;
        const double smax = s.size() ? s[0] : 0.0;
        for (Eigen::Index i = 0; i < s.size(); ++i)
            if (smax > 0.0 && s[i] >= cutoff * smax) ++rank;
        r.ranks.push_back(rank);
        r.min_rank = std::min(r.min_rank, rank);
        r.max_rank = std::max(r.max_rank, rank);
        if (rank == r.expected) ++r.full_rank_count;
    }
    if (points.empty()) r.min_rank = 0;
    return r;
}

RankResult independence_rank(const SystemSpec& spec, int samples, std::uint64_t seed) {
    const System sys = build_system(spec);
    return rank_of_set(sys, sys.independent, sample_points(sys, samples, seed));
}

bool independence_pass(const RankResult& r) {
    const int n = static_cast<int>(r.ranks.size());
    return n > 0 && r.full_rank_count >= n - n / 200;
}

// ---------------------------------------------------------------------------
// Limits

std::vector<Check> limit_check(const SystemSpec& spec, int samples, std::uint64_t seed) {
    std::vector<Check> out;
    const System sys = build_system(spec);
    const auto pts = sample_points(sys, samples, seed);
    const Family f = spec.family;

    if (has_mass(spec.tier)) {
        SystemSpec s0 = spec;
        s0.lambda = 0.0;
        SystemSpec lower = s0;
        lower.tier = lower_tier(spec.tier);
        lower.mutation.reset();
        s0.mutation.reset();
        const System sys0 = build_system(s0);
        const System low = build_system(lower);
        compare_systems(sys0, low, pts, "lambda=0", kLimitTol, out);

        // Continuity of the Hamiltonian in lambda.
        SystemSpec s1 = s0;
        s1.lambda = 1e-6;
        const System sys1 = build_system(s1);
        double worst = 0.0;
        for (const auto& z : pts) {
            const double a = evaluate(sys1.hamiltonian, z);
            const double b = evaluate(sys0.hamiltonian, z);
            worst = std::max(worst, rel(std::abs(a - b), std::abs(a) + std::abs(b)));
        }
        out.push_back(make_check("continuity: " + sys.hamiltonian.name() + "(lambda=1e-6) -> lambda=0", "continuity",
                                 worst, 1e-5));

        // Integrals carrying no mass term are lambda-independent.
        std::vector<int> idx;  // positions in the integral list: K1 K2 K3 J2 J3
        switch (f) {
            case Family::a:
                idx = {0, 3};
                break;
            case Family::b:
                idx = {0, 2};
                break;
            case Family::c:
                idx = {0, 1};
                break;
            case Family::d:
                idx = {0};
                break;
        }
        for (int i : idx) {
            const Observable& fa = sys.integrals[static_cast<std::size_t>(i)];
            const Observable& fb = low.integrals[static_cast<std::size_t>(i)];
            double w = 0.0;
            for (const auto& z : pts) {
                const double a = evaluate(fa, z);
                const double b = evaluate(fb, z);
                w = std::max(w, rel(std::abs(a - b), std::abs(a) + std::abs(b)));
            }
            out.push_back(make_check("lambda-independent: " + fa.name() + " = " + fb.name(), "limit", w, kLimitTol));
        }
    }

    if (has_potential(spec.tier)) {
        // (t, Z) -> 0 recovers the geodesic tier at the same lambda.
        SystemSpec s0 = spec;
        s0.t = {0.0, 0.0, 0.0};
        s0.zfun = ZProfile::zero();
        s0.mutation.reset();
        SystemSpec geo = s0;
        geo.tier = spec.tier == Tier::Potential3D ? Tier::Geodesic3D : Tier::PDMGeodesic;
        const System sys0 = build_system(s0);
        const System g = build_system(geo);
        auto cmp = [&](const Observable& fa, const Observable& fb, bool square) {
            double w = 0.0;
            for (const auto& z : pts) {
                const double a = evaluate(fa, z);
                double b = evaluate(fb, z);
                if (square) b = b * b;
                w = std::max(w, rel(std::abs(a - b), std::abs(a) + std::abs(b)));
            }
            out.push_back(make_check("t=0,Z=0: " + fa.name() + " = " + fb.name() + (square ? "^2" : ""), "limit", w,
                                     kLimitTol));
        };
        cmp(sys0.hamiltonian, g.hamiltonian, false);
        for (std::size_t i = 0; i < sys0.integrals.size(); ++i) cmp(sys0.integrals[i], g.integrals[i], i == 0);
    }
    return out;
}

// ---------------------------------------------------------------------------
// Reduction

ReductionResult reduction_check(Family f, const std::array<double, 3>& k, const std::array<double, 4>& z0,
                                double t_end, double h) {
    SystemSpec s2;
    s2.family = f;
    s2.tier = Tier::Euclidean2D;
    s2.k = k;
    SystemSpec s3 = s2;
    s3.tier = Tier::Geodesic3D;
    const System sys2 = build_system(s2);
    const System sys3 = build_system(s3);

    const double pz = std::sqrt(2.0);
    const PhasePoint a{Chart::cartesian(2), {z0[0], z0[1], 0.0}, {z0[2], z0[3], 0.0}};
    const PhasePoint b{Chart::cartesian(3), {z0[0], z0[1], 0.0}, {z0[2], z0[3], pz}};
    const Trajectory t2 = integrate(sys2.hamiltonian, a, t_end, h);
    const Trajectory t3 = integrate(sys3.hamiltonian, b, t_end, h);

    ReductionResult r;
    for (std::size_t i = 0; i < t2.size() && i < t3.size(); ++i) {
        const auto& u = t2.states[i];
        const auto& v = t3.states[i];
        for (int j = 0; j < 2; ++j) {
            r.sup_distance = std::max(r.sup_distance, std::abs(u.q[j] - v.q[j]));
            r.sup_distance = std::max(r.sup_distance, std::abs(u.p[j] - v.p[j]));
        }
        r.pz_drift = std::max(r.pz_drift, std::abs(v.p[2] - pz));
    }
    r.pass = r.sup_distance <= kReductionTol && r.pz_drift <= 1e-12;
    return r;
}

// ---------------------------------------------------------------------------
// Flow

FlowResult conservation_run(const SystemSpec& spec, std::uint64_t seed, double h, double t_end, Method method) {
    const System sys = build_system(spec);
    CounterRng rng(seed);
    const SamplerOptions box = flow_sampler();
    for (int attempt = 0;; ++attempt) {
        FlowResult fr;
        fr.start = sample_point(sys, rng, box);
        try {
            fr.traj = integrate(sys.hamiltonian, fr.start, t_end, h, method);
        } catch (const DomainExit&) {
            if (attempt >= 20) throw;
            continue;
        }
        std::vector<Observable> obs{sys.hamiltonian};
        obs.insert(obs.end(), sys.integrals.begin(), sys.integrals.end());
        monitor(fr.traj, obs);
        const std::string k1 = sys.dim == 3 ? sys.integrals.front().name() : "";
        for (const auto& d : fr.traj.summary) {
            const bool cyclic = !k1.empty() && d.name == k1;
            fr.checks.push_back(make_check("conservation " + d.name, "conservation", d.relative_drift,
                                           cyclic ? kCyclicDriftTol : kDriftTol));
        }
        return fr;
    }
}

// ---------------------------------------------------------------------------
// Suite

VerificationReport run_suite(const SystemSpec& spec, const SuiteOptions& opt) {
    VerificationReport rep;
    rep.system = spec;
    rep.seed = opt.seed;
    rep.samples = opt.samples;
    const System sys = build_system(spec);
    const auto pts = sample_points(sys, opt.samples, opt.seed);
    auto add = [&](std::vector<Check> v) { rep.checks.insert(rep.checks.end(), v.begin(), v.end()); };

    add(bracket_checks(sys, pts));
    add(identity_checks(sys, pts));

    {
        const RankResult r = rank_of_set(sys, sys.independent, pts);
        const int n = static_cast<int>(r.ranks.size());
        Check c = make_check("rank{" + join(sys.independent) + "} = " + std::to_string(r.expected), "independence",
                             static_cast<double>(n - r.full_rank_count), static_cast<double>(n / 200));
        c.pass = independence_pass(r);
        rep.checks.push_back(c);
    }
    if (!sys.dependent_probe.empty()) {
        const RankResult r = rank_of_set(sys, sys.dependent_probe, pts);
        int off = 0;
        for (int k : r.ranks) off += (k != 3);
        rep.checks.push_back(
            make_check("rank{" + join(sys.dependent_probe) + "} = 3", "dependence", static_cast<double>(off), 0.0));
    }

    for (const auto& [a, b] : sys.negative_controls) {
        double worst = 0.0;
        for (const auto& z : pts) {
            const BracketValue v = poisson_bracket_scaled(sys.get(a), sys.get(b), z);
            worst = std::max(worst, rel(std::abs(v.value), v.scale));
        }
        Check c = make_check("{" + a + "," + b + "} (undeclared)", "negative_control", worst, kBracketTol);
        c.pass = true;  // informational
        rep.checks.push_back(c);
    }

    // Chart-native expression vs its Cartesian pullback.
    for (const auto& o : sys.integrals) {
        if (o.native_chart().kind == ChartKind::Cartesian) continue;
        double worst = 0.0;
        for (const auto& z : pts) {
            const PhasePoint native = from_cartesian(z, o.native_chart());
            const double a = o(native);
            const double b = evaluate(o, z);
            worst = std::max(worst, rel(std::abs(a - b), std::abs(a) + std::abs(b)));
        }
        rep.checks.push_back(make_check("chart invariance " + o.name() + " (" + chart_name(o.native_chart()) + ")",
                                        "chart_invariance", worst, kBracketTol));
    }

    if (is_geodesic(spec.tier)) {
        double worst = 0.0;
        for (const auto& z : pts) {
            const double t0 = evaluate(sys.hamiltonian, z);
            for (double s : {-2.0, 0.5, 3.0}) {
                PhasePoint zs = z;
                for (int i = 0; i < 3; ++i) zs.p[i] *= s;
                const double ts = evaluate(sys.hamiltonian, zs);
                worst = std::max(worst, rel(std::abs(ts - s * s * t0), std::abs(ts) + s * s * std::abs(t0)));
            }
        }
        rep.checks.push_back(make_check("homogeneity " + sys.hamiltonian.name() + "(q, s p) = s^2 " +
                                            sys.hamiltonian.name(),
                                        "homogeneity", worst, 1e-13));
        for (const auto& o : sys.integrals) {
            const KillingCheck kc = killing_check(o, sys.hamiltonian, pts);
            rep.checks.push_back(make_check("killing " + o.name(), "killing", kc.max_scaled, kBracketTol));
        }
    }

    if (spec.family == Family::d && spec.tier != Tier::Euclidean2D) {
        const LrlForms l = lrl_forms(spec);
        auto cmp = [&](const Observable& a, const Observable& b) {
            double worst = 0.0;
            for (const auto& z : pts) {
                const double va = evaluate(a, z);
                const double vb = evaluate(b, z);
                worst = std::max(worst, rel(std::abs(va - vb), std::abs(va) + std::abs(vb)));
            }
            rep.checks.push_back(make_check("Runge-Lenz form " + a.name() + " (Cartesian)", "lrl", worst, kBracketTol));
        };
        cmp(l.k_parabolic, l.k_cartesian);
        cmp(l.j_parabolic, l.j_cartesian);
    }

    if (has_potential(spec.tier)) {
        std::vector<std::array<double, 2>> xy;
        for (const auto& z : pts) xy.push_back({z.q[0], z.q[1]});
        rep.checks.push_back(make_check("U_" + family_name(spec.family) + " separated forms = V(k:=t)", "u_identity",
                                        u_potential_identity_check(spec.family, spec.t, xy), 1e-13));
    }

    if (has_mass(spec.tier) || has_potential(spec.tier)) add(limit_check(spec, opt.samples, opt.seed));

    if (opt.flow) add(conservation_run(spec, opt.seed, opt.h, opt.t_end).checks);

    rep.overall = std::all_of(rep.checks.begin(), rep.checks.end(), [](const Check& c) { return c.pass; });
    return rep;
}

// ---------------------------------------------------------------------------

std::string format_residual(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string report_to_json(const VerificationReport& r) {
    nlohmann::ordered_json j;
    j["system"] = spec_to_json(r.system);
    j["seed"] = r.seed;
    j["samples"] = r.samples;
    nlohmann::ordered_json checks = nlohmann::ordered_json::array();
    for (const auto& c : r.checks) {
        nlohmann::ordered_json e;
        e["name"] = c.name;
        e["kind"] = c.kind;
        e["max_residual"] = format_residual(c.max_residual);
        e["tolerance"] = c.tolerance;
        e["pass"] = c.pass;
        checks.push_back(e);
    }
    j["checks"] = checks;
    j["overall"] = r.overall;
    return j.dump(2) + "\n";
}

}  // namespace superint
