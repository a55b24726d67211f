#pragma once

#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

namespace reludist {

using real_vector = std::vector<double>;

/// Derived quantities of a pair of nonzero vectors.
struct pair_geometry {
    double norm_x{};
    double norm_y{};
    double cos_theta{};
    double theta{};    ///< radians in [0, pi]
    double psi{};      ///< psi(theta) in [0, 1]
    double sq_dist{};  ///< ||x - y||^2
};

/// Which expectation of the single-layer squared output distance is evaluated.
///  - corrected: 1/2 ||x-y||^2 - ||x|| ||y|| psi
///  - original:  1/2 ||x-y||^2 + ||x|| ||y|| psi  (the disputed claim)
enum class claim { corrected, original };

[[nodiscard]] std::string_view to_string(claim c) noexcept;

struct distance_claim {
    claim variant{};
    double value{};
};

struct envelope {
    double lower{};
    double upper{};
};

/// Tolerance below which out-of-range angles are treated as rounding and clamped.
inline constexpr double angle_slack = 1e-12;

/// Validates an angle against [0, pi]; values within angle_slack are clamped, others throw domain_error.
[[nodiscard]] double checked_angle(double theta);

/// Geometry of a pair of vectors. Throws dimension_mismatch_error or zero_vector_error.
[[nodiscard]] pair_geometry angle_between(std::span<const double> x, std::span<const double> y);

/// Geometry of a pair described by its angle and norms rather than coordinates.
[[nodiscard]] pair_geometry geometry_from_angle(double theta, double norm_x, double norm_y);

/// psi(theta) = (sin theta - theta cos theta) / pi.
[[nodiscard]] double psi_of_angle(double theta);

[[nodiscard]] distance_claim expected_sq_dist(const pair_geometry &geom, claim variant);

/// E[relu(m_i^T x) relu(m_i^T y)] for one row of an m-row layer with N(0, 1/m) entries,
/// written as (|x||y| / 2m) (cos theta + psi(theta)).
[[nodiscard]] double cross_term_closed_form(double theta, double norm_x, double norm_y, std::uint64_t m);

/// The same cross term in its integrated form, (|x||y| / (m pi)) [(pi/2) cos theta + (sin theta - theta cos theta)/2].
[[nodiscard]] double cross_term_integral_form(double theta, double norm_x, double norm_y, std::uint64_t m);

/// Predicted cosine of the output angle after one random ReLU layer: cos theta + psi(theta).
[[nodiscard]] double expected_output_cos(double theta);

/// One step of the angle map theta -> arccos(cos theta + psi(theta)).
[[nodiscard]] double next_angle(double theta);

/// Deterministic envelope [1/4 d^2, 1/2 d^2] of the corrected expectation.
[[nodiscard]] envelope shrinkage_bounds(const pair_geometry &geom);

/// E||relu(Mx) - relu(My)||^2 / ||x - y||^2 for unit-norm x, y at angle theta.
[[nodiscard]] double unit_shrinkage_ratio(double theta);

}  // namespace reludist
