#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace superint {

// Exit codes.
inline constexpr int kExitOk = 0;
inline constexpr int kExitFail = 1;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitDomain = 3;

struct RunConfig {
    std::string command;  // verify | integrate | brackets | reduce-check | catalog
    std::string spec_path;
    unsigned long long seed = 42;
    int samples = 200;
    double h = 1e-3;
    std::optional<double> t_end;  // integrate: 10, reduce-check: 5, verify flow: 10
    std::vector<double> initial;  // 2n values (q..., p...)
    std::string chart;            // chart of `initial`; default Cartesian
    std::string output_path;      // empty: stdout
    std::string format;           // json | csv (default: csv for integrate, json otherwise)
    std::string method = "midpoint";
    bool flow = true;             // verify: include the conservation run
    int stride = 1;               // integrate: keep every stride-th step
};

int run(const RunConfig& cfg, std::ostream& out, std::ostream& err);

// Parses argv with CLI11 and runs; used by the `superint` binary.
int cli_main(int argc, char** argv);

// RFC-4180 field quoting.
std::string csv_field(const std::string& s);

}  // namespace superint
