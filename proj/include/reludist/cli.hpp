#pragma once

#include "reludist/parallel.hpp"
#include "reludist/report.hpp"

#include <cstdint>
#include <iosfwd>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

namespace reludist::cli {

inline constexpr int exit_ok = 0;
inline constexpr int exit_validation = 1;
inline constexpr int exit_runtime = 2;
inline constexpr int exit_refutation_failed = 3;

/// Every parameter of one CLI run. Angles are radians (`--deg` converts command-line values).
struct run_config {
    std::string subcommand;
    std::size_t n{ 64 };
    std::size_t m{ 1024 };
    double theta{ std::numbers::pi / 2.0 };
    std::size_t trials{ 400 };
    std::size_t layers{ 1 };
    std::size_t grid{ 181 };
    std::uint64_t seed{ 0 };
    std::string out;  ///< empty: standard output
    std::string format{ "csv" };
    double z_accept{ 4.0 };
    double z_reject{ 10.0 };
    double norm_x{ 1.0 };
    double norm_y{ 1.0 };
    std::string claim{ "both" };
    std::vector<std::size_t> m_list{ 64, 128, 256, 512, 1024, 2048, 4096, 8192 };
    std::vector<std::size_t> widths;  ///< depth sweep; empty means {m}
    std::size_t classes{ 2 };
    std::size_t points_per_class{ 20 };
    double intra_max{ std::numbers::pi / 12.0 };
    double inter_min{ std::numbers::pi / 3.0 };
    std::size_t g_samples{ 100000 };
    std::vector<std::vector<double>> points;  ///< mean width set; empty means {e1, e2} in R^n

    friend bool operator==(const run_config &, const run_config &) = default;
};

inline const std::vector<std::string> subcommands{ "psi",   "expect",   "mc",    "refute",    "theta-sweep", "concentration",
                                                   "angle", "separate", "depth", "meanwidth", "selftest" };

/// Thrown for invalid parameters; the message names the offending flag.
class usage_error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

[[nodiscard]] nlohmann::ordered_json to_json(const run_config &config);

/// Reads a configuration object; keys missing from `j` keep the values of `base`.
[[nodiscard]] run_config from_json(const nlohmann::json &j, run_config base = {});

/// Throws usage_error on the first invalid parameter.
void validate(const run_config &config);

/// Executes a validated configuration and returns the report plus the exit code it implies.
struct run_result {
    report_document report;
    int exit_code{ exit_ok };
};

[[nodiscard]] run_result execute(const run_config &config, execution exec = {});

/// Full command-line entry point: parses args (without the program name), writes the report to
/// --out or `out`, diagnostics to `err`, and returns the process exit code.
int run(const std::vector<std::string> &args, std::ostream &out, std::ostream &err);

}  // namespace reludist::cli
