#pragma once

#include "reludist/geometry.hpp"
#include "reludist/parallel.hpp"

#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

namespace reludist {

/// Monte Carlo mean with its standard error (sample standard deviation / sqrt(trials)).
struct moment_estimate {
    double mean{};
    double std_error{};
    std::uint64_t trials{};
    std::uint64_t master_seed{};
};

/// Reduces per-trial values in ascending index order. Requires at least two values.
[[nodiscard]] moment_estimate summarize(std::span<const double> values, std::uint64_t master_seed);

/// Seed of the layer used by trial `trial` of an estimator run with `master_seed`.
[[nodiscard]] std::uint64_t trial_seed(std::uint64_t master_seed, std::uint64_t trial) noexcept;

/// Per-trial realizations ||relu(M_t x) - relu(M_t y)||^2, M_t seeded by trial_seed(master_seed, t).
[[nodiscard]] std::vector<double> sq_dist_trials(std::span<const double> x, std::span<const double> y, std::size_t m,
                                                 std::size_t trials, std::uint64_t master_seed, execution exec = {});

/// Estimates E||relu(Mx) - relu(My)||^2 over `trials` independent m-row layers.
[[nodiscard]] moment_estimate mc_sq_dist(std::span<const double> x, std::span<const double> y, std::size_t m,
                                         std::size_t trials, std::uint64_t master_seed, execution exec = {});

struct output_cos_estimate {
    moment_estimate estimate;
    std::uint64_t degenerate_trials{};  ///< trials with an all-zero output vector, excluded from the mean
};

/// Estimates E cos angle(relu(Mx), relu(My)).
[[nodiscard]] output_cos_estimate mc_output_cos(std::span<const double> x, std::span<const double> y, std::size_t m,
                                                std::size_t trials, std::uint64_t master_seed, execution exec = {});

/// Planar oracle for the cross term: mean of relu(g.u) relu(g.v) for a standard 2-D Gaussian g,
/// u = (1, 0), v = (cos theta, sin theta). Targets (cos theta + psi(theta)) / 2.
[[nodiscard]] moment_estimate cross_term_mc_2d(double theta, std::size_t trials, std::uint64_t master_seed);

inline constexpr std::size_t default_simpson_panels = std::size_t{ 1 } << 14;

/// Composite Simpson value of the integral of sin(t) sin(t + theta) over [0, pi - theta].
[[nodiscard]] double quadrature_cross_integral(double theta, std::size_t panels = default_simpson_panels);

enum class verdict { supports_corrected, supports_original, inconclusive };

[[nodiscard]] std::string_view to_string(verdict v) noexcept;

struct verdict_thresholds {
    double z_accept{ 4.0 };
    double z_reject{ 10.0 };
};

struct zscore_verdict {
    double z_corrected{};
    double z_original{};
    verdict outcome{ verdict::inconclusive };
    moment_estimate estimate;
    double corrected{};
    double original{};
};

[[nodiscard]] verdict classify(double z_corrected, double z_original, verdict_thresholds thresholds) noexcept;

/// Conservative standard error of mc_sq_dist: per-row terms are bounded by (m_i^T(x - y))^2, so the
/// per-trial variance is at most 3 ||x - y||^4 / m.
[[nodiscard]] double predicted_sq_dist_stderr(double sq_dist, std::size_t m, std::size_t trials) noexcept;

/// Z-scores of the Monte Carlo mean against both rival expectations. Throws hypotheses_too_close_error
/// when psi < 0.01 or |x||y| psi < 5 * predicted_sq_dist_stderr.
[[nodiscard]] zscore_verdict refutation_test(std::span<const double> x, std::span<const double> y, std::size_t m,
                                             std::size_t trials, std::uint64_t master_seed,
                                             verdict_thresholds thresholds = {}, execution exec = {});

/// Gaussian mean width of a finite set: mean over g of sup_{x,y in K} <g, x - y> = max <g,x> - min <g,x>.
[[nodiscard]] moment_estimate mean_width_estimate(const std::vector<real_vector> &points, std::size_t g_samples,
                                                  std::uint64_t master_seed);

}  // namespace reludist
