#include "superint/catalog.hpp"

#include <algorithm>
#include <cmath>

#include "superint/core.hpp"

namespace superint {

namespace {

constexpr double kSqrt2 = 1.4142135623730951;

struct Coef {
    Family fam = Family::a;
    Tier tier = Tier::Geodesic3D;
    std::array<double, 3> k{};
    std::array<double, 3> t{};
    double lambda = 0.0;
    ZProfile zfun;
};

Coef coef_of(const SystemSpec& s) { return {s.family, s.tier, s.k, s.t, s.lambda, s.zfun}; }

Coef flipped(Coef c, const std::string& which) {
    if (which == "k1") c.k[0] = -c.k[0];
    else if (which == "k2") c.k[1] = -c.k[1];
    else if (which == "k3") c.k[2] = -c.k[2];
    else if (which == "t1") c.t[0] = -c.t[0];
    else if (which == "t2") c.t[1] = -c.t[1];
    else if (which == "t3") c.t[2] = -c.t[2];
    else if (which == "lambda") c.lambda = -c.lambda;
    else throw SpecError("unknown mutation coefficient '" + which + "'");
    return c;
}

// Full Hamiltonian of the tier in Cartesian variables.
template <class S>
S ham_cart(const Coef& c, const Vec3<S>& q, const Vec3<S>& p) {
    const S& x = q[0];
    const S& y = q[1];
    S V = family_potential(c.fam, c.k, x, y);
    if (c.tier == Tier::Euclidean2D) return 0.5 * (p[0] * p[0] + p[1] * p[1]) + V;
    S h = 0.5 * (p[0] * p[0] + p[1] * p[1] + V * (p[2] * p[2]));
    if (has_potential(c.tier)) h = h + family_potential(c.fam, c.t, x, y) + V * c.zfun(q[2]);
    if (has_mass(c.tier)) h = h / family_mass(c.fam, c.lambda, x, y);
    return h;
}

// H evaluated on variables given in chart `kind`.
template <class S>
S ham_in(const Coef& c, ChartKind kind, const Vec3<S>& q, const Vec3<S>& p) {
    if (kind == ChartKind::Cartesian) return ham_cart(c, q, p);
    auto v = to_cartesian_vars(kind, q, p);
    return ham_cart(c, v.q, v.p);
}

// p_z^2 + 2 Z(z): the combination every 3D integral carries.
template <class S>
S pz_block(const Coef& c, const Vec3<S>& q, const Vec3<S>& p) {
    return p[2] * p[2] + 2.0 * c.zfun(q[2]);
}

// ---- 3D integrals, most general form ----
// Each takes (coefficients of the integral, coefficients of H, q, p) in its
// native chart.

template <class S>
S k2_a(const Coef& c, const Coef& h, const Vec3<S>& q, const Vec3<S>& p) {
    const S& x = q[0];
    S x2 = x * x;
    S P = pz_block(c, q, p);
    return p[0] * p[0] + (0.5 * c.k[0] * x2 + c.k[1] / x2) * P + (c.t[0] * x2 + 2.0 * c.t[1] / x2) +
           2.0 * c.lambda * x2 * ham_cart(h, q, p);
}

template <class S>
S k3_a(const Coef& c, const Coef& h, const Vec3<S>& q, const Vec3<S>& p) {
    const S& y = q[1];
    S y2 = y * y;
    S P = pz_block(c, q, p);
    return p[1] * p[1] + (0.5 * c.k[0] * y2 + c.k[2] / y2) * P + (c.t[0] * y2 + 2.0 * c.t[2] / y2) +
           2.0 * c.lambda * y2 * ham_cart(h, q, p);
}

// cylindrical (r, phi, z)
template <class S>
S j2_a(const Coef& c, const Coef&, const Vec3<S>& q, const Vec3<S>& p) {
    S co = cos(q[1]);
    S si = sin(q[1]);
    S c2 = co * co;
    S s2 = si * si;
    S P = pz_block(c, q, p);
    return p[1] * p[1] + (c.k[1] / c2 + c.k[2] / s2) * P + (2.0 * c.t[1] / c2 + 2.0 * c.t[2] / s2);
}

template <class S>
S j3_a(const Coef& c, const Coef& h, const Vec3<S>& q, const Vec3<S>& p) {
    const S& r = q[0];
    S r2 = r * r;
    S P = pz_block(c, q, p);
    return r2 * (p[0] * p[0]) + 0.5 * c.k[0] * (r2 * r2) * P + c.t[0] * (r2 * r2) -
           2.0 * r2 * (1.0 - c.lambda * r2) * ham_in(h, ChartKind::Cylindrical, q, p);
}

template <class S>
S k2_b(const Coef& c, const Coef& h, const Vec3<S>& q, const Vec3<S>& p) {
    const S& x = q[0];
    S P = pz_block(c, q, p);
    return p[0] * p[0] + (2.0 * c.k[0] * (x * x) + c.k[2] * x) * P + (4.0 * c.t[0] * (x * x) + 2.0 * c.t[2] * x) +
           2.0 * c.lambda * x * ham_cart(h, q, p);
}

template <class S>
S k3_b(const Coef& c, const Coef&, const Vec3<S>& q, const Vec3<S>& p) {
    const S& y = q[1];
    S y2 = y * y;
    S P = pz_block(c, q, p);
    return p[1] * p[1] + (0.5 * c.k[0] * y2 + c.k[1] / y2) * P + (c.t[0] * y2 + 2.0 * c.t[1] / y2);
}

// parabolic I (tau, sigma, z)
template <class S>
S j2_b(const Coef& c, const Coef& h, const Vec3<S>& q, const Vec3<S>& p) {
    const S& u = q[0];
    S u2 = u * u;
    S u4 = u2 * u2;
    S u6 = u4 * u2;
    S P = pz_block(c, q, p);
    return p[0] * p[0] + (0.5 * c.k[0] * u6 + c.k[1] / u2 + 0.5 * c.k[2] * u4) * P +
           (c.t[0] * u6 + 2.0 * c.t[1] / u2 + c.t[2] * u4) -
           u2 * (2.0 - c.lambda * u2) * ham_in(h, ChartKind::ParabolicI, q, p);
}

template <class S>
S j3_b(const Coef& c, const Coef& h, const Vec3<S>& q, const Vec3<S>& p) {
    const S& v = q[1];
    S v2 = v * v;
    S v4 = v2 * v2;
    S v6 = v4 * v2;
    S P = pz_block(c, q, p);
    return p[1] * p[1] + (0.5 * c.k[0] * v6 + c.k[1] / v2 - 0.5 * c.k[2] * v4) * P +
           (c.t[0] * v6 + 2.0 * c.t[1] / v2 - c.t[2] * v4) -
           v2 * (2.0 + c.lambda * v2) * ham_in(h, ChartKind::ParabolicI, q, p);
}

// cylindrical
template <class S>
S k2_c(const Coef& c, const Coef&, const Vec3<S>& q, const Vec3<S>& p) {
    S co = cos(q[1]);
    S si = sin(q[1]);
    S s2 = si * si;
    S P = pz_block(c, q, p);
    return p[1] * p[1] + ((c.k[1] + c.k[2] * co) / s2) * P + (2.0 * c.t[1] + 2.0 * c.t[2] * co) / s2;
}

template <class S>
S k3_c(const Coef& c, const Coef& h, const Vec3<S>& q, const Vec3<S>& p) {
    const S& r = q[0];
    S P = pz_block(c, q, p);
    return (r * r) * (p[0] * p[0]) + c.k[0] * r * P + 2.0 * c.t[0] * r -
           2.0 * r * (r - c.lambda) * ham_in(h, ChartKind::Cylindrical, q, p);
}

// parabolic I
template <class S>
S j2_c(const Coef& c, const Coef& h, const Vec3<S>& q, const Vec3<S>& p) {
    S u2 = q[0] * q[0];
    S P = pz_block(c, q, p);
    return p[0] * p[0] + (c.k[0] + (c.k[1] - c.k[2]) / u2) * P + (2.0 * c.t[0] + 2.0 * (c.t[1] - c.t[2]) / u2) +
           2.0 * (c.lambda - u2) * ham_in(h, ChartKind::ParabolicI, q, p);
}

template <class S>
S j3_c(const Coef& c, const Coef& h, const Vec3<S>& q, const Vec3<S>& p) {
    S v2 = q[1] * q[1];
    S P = pz_block(c, q, p);
    return p[1] * p[1] + (c.k[0] + (c.k[1] + c.k[2]) / v2) * P + (2.0 * c.t[0] + 2.0 * (c.t[1] + c.t[2]) / v2) +
           2.0 * (c.lambda - v2) * ham_in(h, ChartKind::ParabolicI, q, p);
}

// parabolic I
template <class S>
S k2_d(const Coef& c, const Coef& h, const Vec3<S>& q, const Vec3<S>& p) {
    const S& u = q[0];
    S P = pz_block(c, q, p);
    return p[0] * p[0] + (c.k[0] + 2.0 * c.k[1] * u) * P + (2.0 * c.t[0] + 4.0 * c.t[1] * u) +
           2.0 * (c.lambda - u * u) * ham_in(h, ChartKind::ParabolicI, q, p);
}

template <class S>
S k3_d(const Coef& c, const Coef& h, const Vec3<S>& q, const Vec3<S>& p) {
    const S& v = q[1];
    S P = pz_block(c, q, p);
    return p[1] * p[1] + (c.k[0] + 2.0 * c.k[2] * v) * P + (2.0 * c.t[0] + 4.0 * c.t[2] * v) +
           2.0 * (c.lambda - v * v) * ham_in(h, ChartKind::ParabolicI, q, p);
}

// parabolic II (alpha, beta, z)
template <class S>
S j2_d(const Coef& c, const Coef& h, const Vec3<S>& q, const Vec3<S>& p) {
    const S& a = q[0];
    S P = pz_block(c, q, p);
    return p[0] * p[0] + (c.k[0] + kSqrt2 * (c.k[1] + c.k[2]) * a) * P +
           (2.0 * c.t[0] + 2.0 * kSqrt2 * (c.t[1] + c.t[2]) * a) +
           2.0 * (c.lambda - a * a) * ham_in(h, ChartKind::ParabolicII, q, p);
}

template <class S>
S j3_d(const Coef& c, const Coef& h, const Vec3<S>& q, const Vec3<S>& p) {
    const S& b = q[1];
    S P = pz_block(c, q, p);
    return p[1] * p[1] + (c.k[0] + kSqrt2 * (c.k[1] - c.k[2]) * b) * P +
           (2.0 * c.t[0] + 2.0 * kSqrt2 * (c.t[1] - c.t[2]) * b) +
           2.0 * (c.lambda - b * b) * ham_in(h, ChartKind::ParabolicII, q, p);
}

// ---- 2D integrals (Cartesian) ----

template <class S>
S ang_mom(const Vec3<S>& q, const Vec3<S>& p) {
    return q[0] * p[1] - q[1] * p[0];
}

template <class S>
S i2d(const Coef& c, int which, const Vec3<S>& q, const Vec3<S>& p) {
    const S& x = q[0];
    const S& y = q[1];
    const auto& k = c.k;
    switch (c.fam) {
        case Family::a:
            if (which == 1) return 0.5 * (p[0] * p[0]) + 0.5 * k[0] * (x * x) + k[1] / (x * x);
            if (which == 2) return 0.5 * (p[1] * p[1]) + 0.5 * k[0] * (y * y) + k[2] / (y * y);
            {
                S L = ang_mom(q, p);
                S yx = y / x;
                S xy = x / y;
                return L * L + 2.0 * k[1] * (yx * yx) + 2.0 * k[2] * (xy * xy);
            }
        case Family::b:
            if (which == 1) return 0.5 * (p[0] * p[0]) + 2.0 * k[0] * (x * x) + k[2] * x;
            if (which == 2) return 0.5 * (p[1] * p[1]) + 0.5 * k[0] * (y * y) + k[1] / (y * y);
            return ang_mom(q, p) * p[1] - k[0] * x * (y * y) + 2.0 * k[1] * x / (y * y) - 0.5 * k[2] * (y * y);
        case Family::c: {
            if (which == 1) return ham_cart(c, q, p);
            S r = sqrt(x * x + y * y);
            S L = ang_mom(q, p);
            S y2 = y * y;
            if (which == 2) return L * L + 2.0 * k[1] * (x * x) / y2 + 2.0 * k[2] * x * r / y2;
            return L * p[1] + k[0] * x / r + 2.0 * k[1] * x / y2 + k[2] * (2.0 * (x * x) + y2) / (y2 * r);
        }
        case Family::d: {
            if (which == 1) return ham_cart(c, q, p);
            S r = sqrt(x * x + y * y);
            S tau = sqrt(r + x);
            S sig = y / tau;
            S L = ang_mom(q, p);
            if (which == 2) return L * p[1] + (k[0] * x - k[1] * y * sig + k[2] * y * tau) / r;
            return L * p[0] + (-k[0] * y - k[1] * x * sig + k[2] * x * tau) / r;
        }
    }
    return S(0.0);
}

// ---- naming ----

std::string prefix(Tier t) {
    switch (t) {
        case Tier::Euclidean2D:
        case Tier::Geodesic3D:
            return "";
        case Tier::Potential3D:
            return "c";
        case Tier::PDMGeodesic:
            return "t";
        case Tier::PDMPotential:
            return "tc";
    }
    return "";
}

std::string ham_name(Tier t, Family f) {
    const std::string base = (t == Tier::Geodesic3D || t == Tier::PDMGeodesic) ? "T" : "H";
    return prefix(t) + base + "_" + family_name(f);
}

std::string int_name(Tier t, Family f, char letter, int idx) {
    return prefix(t) + std::string(1, letter) + "_" + family_name(f) + std::to_string(idx);
}

}  // namespace

// ---------------------------------------------------------------------------

std::string family_name(Family f) {
    switch (f) {
        case Family::a:
            return "a";
        case Family::b:
            return "b";
        case Family::c:
            return "c";
        case Family::d:
            return "d";
    }
    return "?";
}

std::string tier_name(Tier t) {
    switch (t) {
        case Tier::Euclidean2D:
            return "Euclidean2D";
        case Tier::Geodesic3D:
            return "Geodesic3D";
        case Tier::Potential3D:
            return "Potential3D";
        case Tier::PDMGeodesic:
            return "PDMGeodesic";
        case Tier::PDMPotential:
            return "PDMPotential";
    }
    return "?";
}

Family family_from_name(const std::string& s) {
    for (Family f : kFamilies)
        if (family_name(f) == s) return f;
    throw SpecError("unknown family '" + s + "'");
}

Tier tier_from_name(const std::string& s) {
    for (Tier t : kTiers)
        if (tier_name(t) == s) return t;
    throw SpecError("unknown tier '" + s + "'");
}

std::string relation_kind_name(RelationKind k) {
    switch (k) {
        case RelationKind::Zero:
            return "Zero";
        case RelationKind::SumZeroWith:
            return "SumZeroWith";
        case RelationKind::HalfSumEquals:
            return "HalfSumEquals";
    }
    return "?";
}

void SystemSpec::validate() const {
    auto finite3 = [](const std::array<double, 3>& a) {
        return std::all_of(a.begin(), a.end(), [](double v) { return std::isfinite(v); });
    };
    if (!finite3(k) || !finite3(t) || !std::isfinite(lambda))
        throw SpecError(label() + ": parameters must be finite");
    if (!has_potential(tier)) {
        if (t != std::array<double, 3>{0.0, 0.0, 0.0})
            throw SpecError(label() + ": t is only meaningful in potential tiers and must be zero");
        if (zfun.kind != ZProfile::Kind::Zero)
            throw SpecError(label() + ": Z(z) is only meaningful in potential tiers and must be Zero");
    }
    if (!has_mass(tier) && lambda != 0.0)
        throw SpecError(label() + ": lambda is only meaningful in PDM tiers and must be zero");
    if (zfun.kind == ZProfile::Kind::Polynomial &&
        !std::all_of(zfun.coeffs.begin(), zfun.coeffs.end(), [](double v) { return std::isfinite(v); }))
        throw SpecError(label() + ": Z coefficients must be finite");
}

std::string SystemSpec::label() const { return family_name(family) + "/" + tier_name(tier); }

SystemSpec default_spec(Family f, Tier t) {
    SystemSpec s;
    s.family = f;
    s.tier = t;
    s.k = {1.0, 0.5, 0.25};
    if (has_potential(t)) {
        s.t = {0.3, 0.2, 0.1};
        s.zfun = ZProfile::quadratic(0.5);
    }
    if (has_mass(t)) s.lambda = 0.1;
    return s;
}

std::vector<SystemSpec> all_default_specs() {
    std::vector<SystemSpec> out;
    for (Family f : kFamilies)
        for (Tier t : kTiers) out.push_back(default_spec(f, t));
    return out;
}

namespace {

std::array<double, 3> triple(const nlohmann::json& j, const char* key) {
    std::array<double, 3> out{0.0, 0.0, 0.0};
    if (!j.contains(key)) return out;
    const auto& a = j.at(key);
    if (!a.is_array() || a.size() != 3) throw SpecError(std::string("'") + key + "' must be an array of 3 numbers");
    for (std::size_t i = 0; i < 3; ++i) {
        if (!a[i].is_number()) throw SpecError(std::string("'") + key + "' must contain numbers");
        out[i] = a[i].get<double>();
    }
    return out;
}

ZProfile zprofile_from_json(const nlohmann::json& z) {
    if (!z.is_object() || !z.contains("kind") || !z.at("kind").is_string())
        throw SpecError("'z' must be an object with a string 'kind'");
    const std::string kind = z.at("kind").get<std::string>();
    auto num = [&](const char* key, double dflt) {
        if (!z.contains(key)) return dflt;
        if (!z.at(key).is_number()) throw SpecError(std::string("z.") + key + " must be a number");
        return z.at(key).get<double>();
    };
    if (kind == "zero") return ZProfile::zero();
    if (kind == "quadratic") return ZProfile::quadratic(num("c", 0.0));
    if (kind == "cosine") return ZProfile::cosine(num("c", 0.0), num("omega", 1.0));
    if (kind == "polynomial") {
        if (!z.contains("coeffs") || !z.at("coeffs").is_array()) throw SpecError("z.coeffs must be an array");
        std::vector<double> a;
        for (const auto& v : z.at("coeffs")) {
            if (!v.is_number()) throw SpecError("z.coeffs must contain numbers");
            a.push_back(v.get<double>());
        }
        return ZProfile::polynomial(std::move(a));
    }
    throw SpecError("unknown z kind '" + kind + "'");
}

}  // namespace

SystemSpec spec_from_json(const nlohmann::json& j) {
    if (!j.is_object()) throw SpecError("system spec must be a JSON object");
    for (const char* key : {"family", "tier"})
        if (!j.contains(key) || !j.at(key).is_string())
            throw SpecError(std::string("system spec needs a string '") + key + "'");
    SystemSpec s;
    s.family = family_from_name(j.at("family").get<std::string>());
    s.tier = tier_from_name(j.at("tier").get<std::string>());
    s.k = j.contains("k") ? triple(j, "k") : std::array<double, 3>{1.0, 0.5, 0.25};
    s.t = triple(j, "t");
    if (j.contains("lambda")) {
        if (!j.at("lambda").is_number()) throw SpecError("'lambda' must be a number");
        s.lambda = j.at("lambda").get<double>();
    }
    if (j.contains("z")) s.zfun = zprofile_from_json(j.at("z"));
    if (j.contains("mutation")) {
        const auto& m = j.at("mutation");
        if (!m.is_object() || !m.contains("observable") || !m.contains("flip") || !m.at("observable").is_string() ||
            !m.at("flip").is_string())
            throw SpecError("'mutation' must be {\"observable\": name, \"flip\": coefficient}");
        s.mutation = Mutation{m.at("observable").get<std::string>(), m.at("flip").get<std::string>()};
    }
    s.validate();
    return s;
}

nlohmann::ordered_json spec_to_json(const SystemSpec& s) {
    nlohmann::ordered_json j;
    j["family"] = family_name(s.family);
    j["tier"] = tier_name(s.tier);
    j["k"] = s.k;
    j["t"] = s.t;
    j["lambda"] = s.lambda;
    nlohmann::ordered_json z;
    switch (s.zfun.kind) {
        case ZProfile::Kind::Zero:
            z["kind"] = "zero";
            break;
        case ZProfile::Kind::Quadratic:
            z["kind"] = "quadratic";
            z["c"] = s.zfun.c;
            break;
        case ZProfile::Kind::Cosine:
            z["kind"] = "cosine";
            z["c"] = s.zfun.c;
            z["omega"] = s.zfun.omega;
            break;
        case ZProfile::Kind::Polynomial:
            z["kind"] = "polynomial";
            z["coeffs"] = s.zfun.coeffs;
            break;
    }
    j["z"] = z;
    if (s.mutation) j["mutation"] = {{"observable", s.mutation->observable}, {"flip", s.mutation->coefficient}};
    return j;
}

// ---------------------------------------------------------------------------

DomainPredicate family_domain(Family f, double lambda) {
    return [f, lambda](const Vec3<double>& q, double m) {
        const double x = q[0];
        const double y = q[1];
        const double r = std::hypot(x, y);
        if (!(r > m)) return false;
        bool ok = true;
        switch (f) {
            case Family::a:
                ok = std::abs(x) > m && std::abs(y) > m && std::abs(x) / r > m && std::abs(y) / r > m;
                break;
            case Family::b: {
                const double tau = std::sqrt(r + x);
                ok = std::abs(y) > m && tau > m && std::abs(y) / tau > m;
                break;
            }
            case Family::c: {
                const double tau = std::sqrt(r + x);
                ok = std::abs(y) > m && std::abs(y) / r > m && tau > m && std::abs(y) / tau > m;
                break;
            }
            case Family::d: {
                const double tau = std::sqrt(r + x);
                const double al = std::sqrt(r + y);
                ok = tau > m && al > m && (al + x / al) / kSqrt2 > m;
                break;
            }
        }
        if (!ok) return false;
        if (lambda != 0.0 && !(family_mass(f, lambda, x, y) > m)) return false;
        return true;
    };
}

const Observable& System::get(const std::string& name) const {
    if (hamiltonian.name() == name) return hamiltonian;
    for (const auto& o : integrals)
        if (o.name() == name) return o;
    for (const auto& o : auxiliary)
        if (o.name() == name) return o;
    throw UnknownObservable("system " + spec.label() + " has no observable '" + name + "'");
}

bool System::has(const std::string& name) const {
    try {
        (void)get(name);
        return true;
    } catch (const UnknownObservable&) {
        return false;
    }
}

std::vector<std::string> System::integral_names() const {
    std::vector<std::string> out;
    for (const auto& o : integrals) out.push_back(o.name());
    return out;
}

System build_system(const SystemSpec& spec) {
    spec.validate();
    const Coef base = coef_of(spec);
    const Family f = spec.family;
    const Tier tier = spec.tier;
    const int n = tier_dim(tier);
    const std::string fn = family_name(f);

    System sys;
    sys.spec = spec;
    sys.dim = n;
    sys.domain = family_domain(f, spec.lambda);

    bool mutation_used = false;
    auto coef_for = [&](const std::string& name) {
        if (spec.mutation && spec.mutation->observable == name) {
            mutation_used = true;
            return flipped(base, spec.mutation->coefficient);
        }
        return base;
    };

    const std::string hname = ham_name(tier, f);
    {
        const Coef ci = coef_for(hname);
        const std::optional<int> deg = is_geodesic(tier) ? std::optional<int>(2) : std::nullopt;
        sys.hamiltonian = Observable::make(
            hname, Chart::cartesian(n), [ci](const auto& q, const auto& p) { return ham_cart(ci, q, p); }, deg,
            sys.domain);
    }

    auto add = [&](Observable o) { sys.integrals.push_back(std::move(o)); };

    if (tier == Tier::Euclidean2D) {
        for (int i = 1; i <= 3; ++i) {
            const std::string nm = int_name(tier, f, 'I', i);
            const Coef ci = coef_for(nm);
            add(Observable::make(
                nm, Chart::cartesian(2), [ci, i](const auto& q, const auto& p) { return i2d(ci, i, q, p); },
                std::nullopt, sys.domain));
        }
        const std::string i1 = int_name(tier, f, 'I', 1), i2 = int_name(tier, f, 'I', 2),
                          i3 = int_name(tier, f, 'I', 3);
        if (f == Family::a || f == Family::b) {
            sys.independent = {i1, i2, i3};
            sys.relations.push_back({i1, i2, RelationKind::Zero, ""});
            sys.negative_controls.push_back({i1, i3});
        } else {
            sys.independent = {hname, i2, i3};
            sys.negative_controls.push_back({i2, i3});
        }
        sys.charts = {Chart::cartesian(2)};
        if (f == Family::a || f == Family::c) sys.charts.push_back(Chart::cylindrical(2));
        if (f == Family::b || f == Family::d) sys.charts.push_back(Chart::parabolic1(2));
    } else {
        const Chart cart = Chart::cartesian(3);
        const Chart cyl = Chart::cylindrical(3);
        const Chart par1 = Chart::parabolic1(3);
        const Chart par2 = Chart::parabolic2(3);
        const bool geo = is_geodesic(tier);
        const std::optional<int> quad = geo ? std::optional<int>(2) : std::nullopt;

        // K_r1: p_z (geodesic tiers) or p_z^2 + 2 Z(z) (potential tiers).
        {
            const std::string nm = int_name(tier, f, 'K', 1);
            const Coef ci = coef_for(nm);
            if (geo)
                add(Observable::make(
                    nm, cart, [](const auto&, const auto& p) { return p[2]; }, 1, sys.domain));
            else
                add(Observable::make(
                    nm, cart, [ci](const auto& q, const auto& p) { return pz_block(ci, q, p); }, std::nullopt,
                    sys.domain));
        }

        const std::string K2 = int_name(tier, f, 'K', 2), K3 = int_name(tier, f, 'K', 3);
        const std::string J2 = int_name(tier, f, 'J', 2), J3 = int_name(tier, f, 'J', 3);
        const Coef ch = base;
        auto mk = [&](const std::string& nm, Chart chart, auto body) {
            const Coef ci = coef_for(nm);
            add(Observable::make(
                nm, chart, [ci, ch, body](const auto& q, const auto& p) { return body(ci, ch, q, p); }, quad,
                sys.domain));
        };
#define SUPERINT_FORMULA(fnname) \
    [](const Coef& a, const Coef& b, const auto& q, const auto& p) { return fnname(a, b, q, p); }
        switch (f) {
            case Family::a:
                mk(K2, cart, SUPERINT_FORMULA(k2_a));
                mk(K3, cart, SUPERINT_FORMULA(k3_a));
                mk(J2, cyl, SUPERINT_FORMULA(j2_a));
                mk(J3, cyl, SUPERINT_FORMULA(j3_a));
                sys.charts = {cart, cyl};
                break;
            case Family::b:
                mk(K2, cart, SUPERINT_FORMULA(k2_b));
                mk(K3, cart, SUPERINT_FORMULA(k3_b));
                mk(J2, par1, SUPERINT_FORMULA(j2_b));
                mk(J3, par1, SUPERINT_FORMULA(j3_b));
                sys.charts = {cart, par1};
                break;
            case Family::c:
                mk(K2, cyl, SUPERINT_FORMULA(k2_c));
                mk(K3, cyl, SUPERINT_FORMULA(k3_c));
                mk(J2, par1, SUPERINT_FORMULA(j2_c));
                mk(J3, par1, SUPERINT_FORMULA(j3_c));
                sys.charts = {cyl, par1};
                break;
            case Family::d:
                mk(K2, par1, SUPERINT_FORMULA(k2_d));
                mk(K3, par1, SUPERINT_FORMULA(k3_d));
                mk(J2, par2, SUPERINT_FORMULA(j2_d));
                mk(J3, par2, SUPERINT_FORMULA(j3_d));
                sys.charts = {par1, par2};
                break;
        }
#undef SUPERINT_FORMULA

        const std::string K1 = int_name(tier, f, 'K', 1);
        if (f == Family::a || f == Family::b) {
            sys.independent = {K1, K2, K3, J2};
            sys.dependent_probe = {K1, K2, K3, hname};
            sys.relations.push_back({K1, K2, RelationKind::Zero, ""});
            sys.relations.push_back({K1, K3, RelationKind::Zero, ""});
            sys.relations.push_back({K2, K3, RelationKind::Zero, ""});
            sys.relations.push_back({K2, K3, RelationKind::HalfSumEquals, hname});
        } else {
            sys.independent = {hname, K1, K2, J2};
            sys.relations.push_back({K1, K2, RelationKind::Zero, ""});
            sys.relations.push_back({K2, K3, RelationKind::SumZeroWith, ""});
        }
        sys.relations.push_back({J2, J3, RelationKind::SumZeroWith, ""});
        sys.relations.push_back({K1, J2, RelationKind::Zero, ""});
        sys.negative_controls.push_back({K2, J2});
    }

    // Conservation: every integral commutes with the Hamiltonian.
    {
        std::vector<BracketRelation> cons;
        for (const auto& o : sys.integrals) cons.push_back({o.name(), hname, RelationKind::Zero, ""});
        sys.relations.insert(sys.relations.begin(), cons.begin(), cons.end());
    }

    // Auxiliary observables.
    {
        const Coef c = base;
        const Chart cart = Chart::cartesian(n);
        sys.auxiliary.push_back(Observable::make(
            "V_" + fn, cart, [c](const auto& q, const auto&) { return family_potential(c.fam, c.k, q[0], q[1]); },
            0, sys.domain));
        if (has_potential(tier)) {
            sys.auxiliary.push_back(Observable::make(
                "U_" + fn, cart,
                [c](const auto& q, const auto&) { return family_potential(c.fam, c.t, q[0], q[1]); }, 0,
                sys.domain));
            sys.auxiliary.push_back(Observable::make(
                "Z", cart, [c](const auto& q, const auto&) { return c.zfun(q[2]); }, 0, sys.domain));
        }
        if (has_mass(tier))
            sys.auxiliary.push_back(Observable::make(
                "mu_" + fn, cart,
                [c](const auto& q, const auto&) { return family_mass(c.fam, c.lambda, q[0], q[1]); }, 0,
                sys.domain));
        sys.auxiliary.push_back(Observable::make(
            "Lz", cart, [](const auto& q, const auto& p) { return ang_mom(q, p); }, 1, {}));
        sys.negative_controls.push_back({"Lz", hname});
    }

    if (spec.mutation && !mutation_used)
        throw SpecError("mutation targets unknown observable '" + spec.mutation->observable + "'");
    return sys;
}

double evaluate(const SystemSpec& spec, const std::string& name, const PhasePoint& z) {
    const System sys = build_system(spec);
    return evaluate(sys.get(name), z);
}

// ---------------------------------------------------------------------------

double u_potential_identity_check(Family f, const std::array<double, 3>& t,
                                  const std::vector<std::array<double, 2>>& points) {
    const auto& [t1, t2, t3] = t;
    double worst = 0.0;
    for (const auto& pt : points) {
        const double x = pt[0];
        const double y = pt[1];
        const double r = std::hypot(x, y);
        const double co = x / r;
        const double si = y / r;
        const double tau = std::sqrt(r + x);
        const double sig = y / tau;
        const double al = std::sqrt(r + y);
        const double be = x / al;
        double u1 = 0.0;
        double u2 = 0.0;
        switch (f) {
            case Family::a:
                u1 = (0.5 * t1 * x * x + t2 / (x * x)) + (0.5 * t1 * y * y + t3 / (y * y));
                u2 = 0.5 * t1 * r * r + (t2 / (co * co) + t3 / (si * si)) / (r * r);
                break;
            case Family::b: {
                u1 = (2.0 * t1 * x * x + t3 * x) + (0.5 * t1 * y * y + t2 / (y * y));
                const double s = tau * tau + sig * sig;
                u2 = (0.5 * t1 * (std::pow(tau, 6) + std::pow(sig, 6)) + t2 * (1.0 / (tau * tau) + 1.0 / (sig * sig)) +
                      0.5 * t3 * (std::pow(tau, 4) - std::pow(sig, 4))) /
                     s;
                break;
            }
            case Family::c: {
                u1 = t1 / r + (t2 + t3 * co) / (si * si * r * r);
                const double s = tau * tau + sig * sig;
                u2 = (2.0 * t1 + (t2 - t3) / (tau * tau) + (t2 + t3) / (sig * sig)) / s;
                break;
            }
            case Family::d: {
                u1 = 2.0 * (t1 + t2 * tau + t3 * sig) / (tau * tau + sig * sig);
                u2 = (2.0 * t1 + kSqrt2 * (t2 + t3) * al + kSqrt2 * (t2 - t3) * be) / (al * al + be * be);
                break;
            }
        }
        const double v = family_potential(f, t, x, y);
        const double scale = 1.0 + std::abs(v);
        worst = std::max({worst, std::abs(u1 - v) / scale, std::abs(u2 - v) / scale});
    }
    return worst;
}

// ---------------------------------------------------------------------------

LrlForms lrl_forms(const SystemSpec& spec) {
    if (spec.family != Family::d || spec.tier == Tier::Euclidean2D)
        throw SpecError("Runge-Lenz forms exist for the 3D family-d systems only");
    const System sys = build_system(spec);
    const Coef c = coef_of(spec);
    const Tier tier = spec.tier;
    const std::optional<int> quad = is_geodesic(tier) ? std::optional<int>(2) : std::nullopt;

    LrlForms out;
    out.k_parabolic = sys.get(int_name(tier, Family::d, 'K', 2));
    out.j_parabolic = sys.get(int_name(tier, Family::d, 'J', 2));

    // K_d2 = -2 L p_y - (k1 x - k2 y sigma + k3 y tau)/r P - 2 (t1 x - t2 y sigma + t3 y tau)/r - 2 lambda x H / r
    out.k_cartesian = Observable::make(
        "LRL_K", Chart::cartesian(3),
        [c](const auto& q, const auto& p) {
            const auto& x = q[0];
            const auto& y = q[1];
            auto r = sqrt(x * x + y * y);
            auto tau = sqrt(r + x);
            auto sig = y / tau;
            auto P = pz_block(c, q, p);
            return -2.0 * ang_mom(q, p) * p[1] - (c.k[0] * x - c.k[1] * y * sig + c.k[2] * y * tau) / r * P -
                   2.0 * (c.t[0] * x - c.t[1] * y * sig + c.t[2] * y * tau) / r -
                   2.0 * c.lambda * x * ham_cart(c, q, p) / r;
        },
        quad, sys.domain);

    // J_d2 = 2 L p_x - (k1 y + k2 x sigma - k3 x tau)/r P - 2 (t1 y + t2 x sigma - t3 x tau)/r - 2 lambda y H / r
    out.j_cartesian = Observable::make(
        "LRL_J", Chart::cartesian(3),
        [c](const auto& q, const auto& p) {
            const auto& x = q[0];
            const auto& y = q[1];
            auto r = sqrt(x * x + y * y);
            auto tau = sqrt(r + x);
            auto sig = y / tau;
            auto P = pz_block(c, q, p);
            return 2.0 * ang_mom(q, p) * p[0] - (c.k[0] * y + c.k[1] * x * sig - c.k[2] * x * tau) / r * P -
                   2.0 * (c.t[0] * y + c.t[1] * x * sig - c.t[2] * x * tau) / r -
                   2.0 * c.lambda * y * ham_cart(c, q, p) / r;
        },
        quad, sys.domain);
    return out;
}

}  // namespace superint
