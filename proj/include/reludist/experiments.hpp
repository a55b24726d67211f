#pragma once

#include "reludist/estimators.hpp"
#include "reludist/geometry.hpp"
#include "reludist/parallel.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace reludist {

enum class sweep_kind { theta, concentration, depth };

/// One row of an experiment sweep.
///
/// For theta and concentration sweeps the analytic columns are the two rival expectations of the
/// squared output distance and the bounds are the [1/4 d^2, 1/2 d^2] envelope. For depth sweeps
/// `analytic_corrected` holds the iterated angle-map cosine, `analytic_original` is NaN (there is no
/// rival angle law) and the bounds are the admissible cosine range.
struct sweep_record {
    sweep_kind kind{ sweep_kind::theta };
    double theta{};
    std::size_t m{};
    std::size_t trials{};
    std::size_t layers{ 1 };
    moment_estimate empirical;
    double analytic_corrected{};
    double analytic_original{};
    double bound_lower{};
    double bound_upper{};
    std::optional<double> rms_deviation;  // concentration only
    std::optional<double> max_deviation;  // concentration only
};

/// Unit vectors e_1 and cos(theta) e_1 + sin(theta) e_2 in R^n (n >= 2).
struct vector_pair {
    real_vector x;
    real_vector y;
};

[[nodiscard]] vector_pair unit_pair(std::size_t n, double theta);

/// Squared-distance estimates along an angle grid. Every grid point reuses `master_seed`, so the
/// whole curve is drawn from the same layers.
[[nodiscard]] std::vector<sweep_record> theta_sweep(std::span<const double> theta_grid, std::size_t m, std::size_t trials,
                                                    std::uint64_t master_seed, std::size_t n = 64, execution exec = {});

/// k equally spaced angles on [0, pi] (k = 1 gives {0}).
[[nodiscard]] std::vector<double> uniform_angle_grid(std::size_t points);

/// Deviation of single realizations from the corrected expectation, per layer width.
[[nodiscard]] std::vector<sweep_record> concentration_sweep(std::span<const std::size_t> m_list, double theta,
                                                            std::size_t trials, std::uint64_t master_seed,
                                                            std::size_t n = 64, execution exec = {});

/// Least-squares slope of log(rms_deviation) against log(m); absent with fewer than two records.
[[nodiscard]] std::optional<double> loglog_slope(std::span<const sweep_record> records);

struct class_config {
    std::size_t ambient_dim{ 64 };
    std::size_t classes{ 2 };
    std::size_t points_per_class{ 20 };
    double intra_angle_max{};  ///< max angle between a point and its class center
    double inter_angle_min{};  ///< min angle between two class centers
    std::uint64_t master_seed{};
};

inline constexpr std::size_t center_attempt_cap = 100000;

struct labeled_points {
    std::vector<real_vector> points;
    std::vector<std::size_t> labels;
    std::vector<real_vector> centers;
};

/// Unit-norm points around greedily placed class centers; throws infeasible_geometry_error when the
/// centers cannot be placed within center_attempt_cap draws.
[[nodiscard]] labeled_points generate_classes(const class_config &config);

/// Pairwise distance statistics of one pair group. Empty groups leave every field absent.
struct distance_summary {
    std::optional<double> mean_intra;
    std::optional<double> mean_inter;
    std::optional<double> min_inter;
    std::optional<double> max_intra;
};

struct separation_report {
    distance_summary pre;
    distance_summary post;                 ///< post distances are per-pair means over trials
    std::optional<double> ratio_intra;     ///< mean over intra pairs of E||out diff||^2 / ||in diff||^2
    std::optional<double> ratio_inter;
    std::size_t intra_pairs{};
    std::size_t inter_pairs{};
    std::size_t m{};
    std::size_t layers{};
    std::size_t trials{};
};

/// Runs labeled points through `layers` random ReLU layers of width m and compares pair groups.
[[nodiscard]] separation_report separation_on(const labeled_points &data, std::size_t m, std::size_t layers,
                                              std::size_t trials, std::uint64_t master_seed, execution exec = {});

[[nodiscard]] separation_report separation_experiment(const class_config &config, std::size_t m, std::size_t layers,
                                                      std::size_t trials, std::uint64_t master_seed, execution exec = {});

/// cos of the angle after 0..depth applications of theta -> arccos(cos theta + psi(theta)).
[[nodiscard]] std::vector<double> angle_map_cosines(double theta, std::size_t depth);

/// Output-angle cosine after each depth 0..layers_max. A single width is reused for every layer;
/// otherwise widths[k] is the width of layer k + 1.
[[nodiscard]] std::vector<sweep_record> depth_sweep(double theta, std::span<const std::size_t> widths,
                                                    std::size_t layers_max, std::size_t trials, std::uint64_t master_seed,
                                                    std::size_t n = 64, execution exec = {});

}  // namespace reludist
