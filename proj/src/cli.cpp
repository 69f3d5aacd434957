#include "superint/cli.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "superint/catalog.hpp"
#include "superint/core.hpp"
#include "superint/dynamics.hpp"
#include "superint/verify.hpp"

namespace superint {

namespace {

std::string num(double v) { return format_residual(v); }

SystemSpec load_spec(const std::string& path) {
    if (path.empty()) throw ArgumentError("--spec is required");
    std::ifstream in(path);
    if (!in) throw ArgumentError("cannot open spec file '" + path + "'");
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw SpecError("spec file '" + path + "' is not valid JSON: " + e.what());
    }
    return spec_from_json(j);
}

// Writes to the output file, or to `out` when no path is given.
void emit(const RunConfig& cfg, std::ostream& out, const std::string& text) {
    if (cfg.output_path.empty()) {
        out << text;
        return;
    }
    std::ofstream f(cfg.output_path, std::ios::binary);
    if (!f) throw ArgumentError("cannot write '" + cfg.output_path + "'");
    f << text;
}

PhasePoint initial_point(const RunConfig& cfg, int n) {
    if (static_cast<int>(cfg.initial.size()) != 2 * n)
        throw ArgumentError("--initial needs " + std::to_string(2 * n) + " values (q1..q" + std::to_string(n) +
                            ", p1..p" + std::to_string(n) + ")");
    const Chart chart = cfg.chart.empty() ? Chart::cartesian(n) : chart_from_name(cfg.chart);
    if (chart.dim != n) throw ArgumentError("chart " + cfg.chart + " does not match the system dimension");
    PhasePoint z{chart, {}, {}};
    for (int i = 0; i < n; ++i) {
        z.q[i] = cfg.initial[static_cast<std::size_t>(i)];
        z.p[i] = cfg.initial[static_cast<std::size_t>(n + i)];
    }
    for (double v : cfg.initial)
        if (!std::isfinite(v)) throw ArgumentError("--initial values must be finite");
    return z;
}

std::string trajectory_csv(const Trajectory& tr) {
    const int n = tr.chart.dim;
    std::ostringstream os;
    os << "t";
    for (int i = 1; i <= n; ++i) os << ",q" << i;
    for (int i = 1; i <= n; ++i) os << ",p" << i;
    for (const auto& [name, _] : tr.monitors) os << "," << csv_field(name);
    os << "\n";
    for (std::size_t k = 0; k < tr.size(); ++k) {
        os << num(tr.times[k]);
        for (int i = 0; i < n; ++i) os << "," << num(tr.states[k].q[i]);
        for (int i = 0; i < n; ++i) os << "," << num(tr.states[k].p[i]);
        for (const auto& m : tr.monitors) os << "," << num(m.second[k]);
        os << "\n";
    }
    return os.str();
}

std::string trajectory_json(const Trajectory& tr, const SystemSpec& spec, Method m, double h) {
    const int n = tr.chart.dim;
    nlohmann::ordered_json j;
    j["system"] = spec_to_json(spec);
    j["chart"] = chart_name(tr.chart);
    j["method"] = method_name(m);
    j["h"] = num(h);
    nlohmann::ordered_json times = nlohmann::ordered_json::array();
    nlohmann::ordered_json states = nlohmann::ordered_json::array();
    for (std::size_t k = 0; k < tr.size(); ++k) {
        times.push_back(num(tr.times[k]));
        nlohmann::ordered_json row = nlohmann::ordered_json::array();
        for (int i = 0; i < n; ++i) row.push_back(num(tr.states[k].q[i]));
        for (int i = 0; i < n; ++i) row.push_back(num(tr.states[k].p[i]));
        states.push_back(row);
    }
    j["t"] = times;
    j["states"] = states;
    nlohmann::ordered_json mon;
    for (const auto& [name, v] : tr.monitors) {
        nlohmann::ordered_json a = nlohmann::ordered_json::array();
        for (double x : v) a.push_back(num(x));
        mon[name] = a;
    }
    j["monitors"] = mon;
    nlohmann::ordered_json sum = nlohmann::ordered_json::array();
    for (const auto& d : tr.summary)
        sum.push_back({{"name", d.name},
                       {"initial", num(d.initial)},
                       {"max_abs_drift", num(d.max_abs_drift)},
                       {"relative_drift", num(d.relative_drift)}});
    j["summary"] = sum;
    return j.dump(2) + "\n";
}

int cmd_verify(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    const SystemSpec spec = load_spec(cfg.spec_path);
    SuiteOptions opt;
    opt.samples = cfg.samples;
    opt.seed = cfg.seed;
    opt.flow = cfg.flow;
    opt.h = cfg.h;
    opt.t_end = cfg.t_end.value_or(10.0);
    const VerificationReport rep = run_suite(spec, opt);
    emit(cfg, out, report_to_json(rep));
    for (const Check* c : rep.failures())
        err << "FAIL " << c->name << " (" << c->kind << "): " << num(c->max_residual) << " > " << num(c->tolerance)
            << "\n";
    return rep.overall ? kExitOk : kExitFail;
}

int cmd_integrate(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    const SystemSpec spec = load_spec(cfg.spec_path);
    const System sys = build_system(spec);
    const PhasePoint z0 = initial_point(cfg, sys.dim);
    const Method m = method_from_name(cfg.method);
    IntegrateOptions io;
    io.stride = cfg.stride;
    Trajectory tr;
    try {
        tr = integrate(sys.hamiltonian, z0, cfg.t_end.value_or(10.0), cfg.h, m, io);
    } catch (const DomainExit& e) {
        err << "domain exit at t=" << num(e.exit_time) << "\n";
        return kExitDomain;
    }
    std::vector<Observable> obs{sys.hamiltonian};
    obs.insert(obs.end(), sys.integrals.begin(), sys.integrals.end());
    monitor(tr, obs);
    const std::string fmt = cfg.format.empty() ? "csv" : cfg.format;
    emit(cfg, out, fmt == "json" ? trajectory_json(tr, spec, m, cfg.h) : trajectory_csv(tr));
    return kExitOk;
}

int cmd_brackets(const RunConfig& cfg, std::ostream& out) {
    const SystemSpec spec = load_spec(cfg.spec_path);
    const InvolutionMatrix m = involution_matrix(spec, cfg.samples, cfg.seed);
    std::ostringstream os;
    if (cfg.format == "json") {
        nlohmann::ordered_json j;
        j["system"] = spec_to_json(spec);
        j["names"] = m.names;
        nlohmann::ordered_json rows = nlohmann::ordered_json::array();
        for (std::size_t i = 0; i < m.names.size(); ++i) {
            nlohmann::ordered_json row = nlohmann::ordered_json::array();
            for (std::size_t k = 0; k < m.names.size(); ++k) row.push_back(num(m.residual[i][k]));
            rows.push_back(row);
        }
        j["residual"] = rows;
        j["pass"] = m.pass;
        os << j.dump(2) << "\n";
    } else {
        os << "max |{Fi,Fj}|/(1+scale) over " << cfg.samples << " samples, seed " << cfg.seed
           << " (* = declared zero)\n";
        os << std::setw(10) << "";
        for (const auto& n : m.names) os << std::setw(12) << n;
        os << "\n";
        for (std::size_t i = 0; i < m.names.size(); ++i) {
            os << std::setw(10) << m.names[i];
            for (std::size_t k = 0; k < m.names.size(); ++k) {
                std::ostringstream cell;
                if (i == k) {
                    cell << "-";
                } else {
                    cell << std::scientific << std::setprecision(1) << m.residual[i][k] << (m.declared[i][k] ? "*" : " ");
                }
                os << std::setw(12) << cell.str();
            }
            os << "\n";
        }
        os << (m.pass ? "declared relations: pass\n" : "declared relations: FAIL\n");
    }
    emit(cfg, out, os.str());
    return m.pass ? kExitOk : kExitFail;
}

int cmd_reduce(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    const SystemSpec spec = load_spec(cfg.spec_path);
    if (cfg.initial.size() != 4) throw ArgumentError("reduce-check needs --initial x y px py");
    const std::array<double, 4> z0{cfg.initial[0], cfg.initial[1], cfg.initial[2], cfg.initial[3]};
    ReductionResult r;
    try {
        r = reduction_check(spec.family, spec.k, z0, cfg.t_end.value_or(5.0), cfg.h);
    } catch (const DomainExit& e) {
        err << "domain exit at t=" << num(e.exit_time) << "\n";
        return kExitDomain;
    }
    nlohmann::ordered_json j;
    j["family"] = family_name(spec.family);
    j["k"] = spec.k;
    j["t_end"] = num(cfg.t_end.value_or(5.0));
    j["h"] = num(cfg.h);
    j["sup_distance"] = num(r.sup_distance);
    j["pz_drift"] = num(r.pz_drift);
    j["tolerance"] = kReductionTol;
    j["pass"] = r.pass;
    emit(cfg, out, j.dump(2) + "\n");
    return r.pass ? kExitOk : kExitFail;
}

int cmd_catalog(const RunConfig& cfg, std::ostream& out) {
    std::ostringstream os;
    if (cfg.format == "json") {
        nlohmann::ordered_json arr = nlohmann::ordered_json::array();
        for (const auto& spec : all_default_specs()) {
            const System s = build_system(spec);
            arr.push_back({{"family", family_name(spec.family)},
                           {"tier", tier_name(spec.tier)},
                           {"hamiltonian", s.hamiltonian.name()},
                           {"integrals", s.integral_names()},
                           {"independent", s.independent}});
        }
        os << arr.dump(2) << "\n";
    } else {
        for (const auto& spec : all_default_specs()) {
            const System s = build_system(spec);
            os << std::left << std::setw(16) << spec.label() << std::setw(7) << s.hamiltonian.name();
            for (const auto& n : s.integral_names()) os << " " << n;
            os << "\n";
        }
    }
    emit(cfg, out, os.str());
    return kExitOk;
}

}  // namespace

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
    std::string q = "\"";
    for (char c : s) {
        if (c == '"') q += '"';
        q += c;
    }
    return q + "\"";
}

int run(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    try {
        if (cfg.samples <= 0) throw ArgumentError("--samples must be positive");
        if (!(cfg.h > 0.0)) throw ArgumentError("--h must be positive");
        if (cfg.stride < 1) throw ArgumentError("--stride must be >= 1");
        if (!cfg.format.empty() && cfg.format != "json" && cfg.format != "csv")
            throw ArgumentError("--format must be json or csv");
        if (cfg.command == "verify") return cmd_verify(cfg, out, err);
        if (cfg.command == "integrate") return cmd_integrate(cfg, out, err);
        if (cfg.command == "brackets") return cmd_brackets(cfg, out);
        if (cfg.command == "reduce-check") return cmd_reduce(cfg, out, err);
        if (cfg.command == "catalog") return cmd_catalog(cfg, out);
        throw ArgumentError("unknown command '" + cfg.command + "'");
    } catch (const DomainExit& e) {
        err << "domain exit at t=" << num(e.exit_time) << "\n";
        return kExitDomain;
    } catch (const SpecError& e) {
        err << "error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const ArgumentError& e) {
        err << "error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const DomainError& e) {
        err << "error: " << e.what() << "\n";
        return kExitDomain;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kExitConfig;
    }
}

int cli_main(int argc, char** argv) {
    CLI::App app{"superint: verification laboratory for Eisenhart-lifted superintegrable systems"};
    app.require_subcommand(1);
    app.set_help_flag("--help", "print help");  // -h would clash with --h
    RunConfig cfg;

    auto common = [&](CLI::App* sub, bool needs_spec) {
        auto* o = sub->add_option("--spec", cfg.spec_path, "system spec (JSON)");
        if (needs_spec) o->required();
        sub->add_option("--output,-o", cfg.output_path, "output file (default stdout)");
        sub->add_option("--format", cfg.format, "json or csv");
    };

    auto* verify = app.add_subcommand("verify", "run the verification suite and write a JSON report");
    common(verify, true);
    verify->add_option("--seed", cfg.seed, "sampling seed")->default_val(42);
    verify->add_option("--samples", cfg.samples, "samples per check")->default_val(200);
    verify->add_option("--h", cfg.h, "flow step size")->default_val(1e-3);
    verify->add_option("--t-end", cfg.t_end, "flow length (default 10)");
    verify->add_flag("!--no-flow", cfg.flow, "skip the conservation run");

    auto* integ = app.add_subcommand("integrate", "integrate a Hamiltonian flow and export the trajectory");
    common(integ, true);
    integ->add_option("--initial", cfg.initial, "q1..qn p1..pn")->required()->expected(2, 6)->delimiter(',');
    integ->add_option("--chart", cfg.chart, "chart of --initial (Cartesian2, Cartesian3, Polar, Cylindrical, ...)");
    integ->add_option("--h", cfg.h, "step size")->default_val(1e-3);
    integ->add_option("--t-end", cfg.t_end, "final time (default 10)");
    integ->add_option("--method", cfg.method, "midpoint | gauss4 | rk4")->default_val("midpoint");
    integ->add_option("--stride", cfg.stride, "keep every stride-th step")->default_val(1);

    auto* br = app.add_subcommand("brackets", "print the involution matrix");
    common(br, true);
    br->add_option("--seed", cfg.seed, "sampling seed")->default_val(42);
    br->add_option("--samples", cfg.samples, "samples")->default_val(200);

    auto* red = app.add_subcommand("reduce-check", "compare the p_z = sqrt(2) lifted flow with the 2D flow");
    common(red, true);
    red->add_option("--initial", cfg.initial, "x y px py")->required()->expected(4)->delimiter(',');
    red->add_option("--h", cfg.h, "step size")->default_val(1e-3);
    red->add_option("--t-end", cfg.t_end, "final time (default 5)");

    auto* cat = app.add_subcommand("catalog", "list the 20 catalog systems and their integrals");
    cat->add_option("--output,-o", cfg.output_path, "output file (default stdout)");
    cat->add_option("--format", cfg.format, "text (default) or json");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitConfig;
    }
    cfg.command = app.get_subcommands().front()->get_name();
    return run(cfg, std::cout, std::cerr);
}

}  // namespace superint
