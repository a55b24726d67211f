#include "reludist/geometry.hpp"

#include "reludist/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace reludist {

namespace {

constexpr double pi = std::numbers::pi;

// Below this angle sin(t) - t cos(t) loses most of its digits to cancellation.
constexpr double psi_series_cutoff = 0.1;

double dot(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        s += a[i] * b[i];
    }
    return s;
}

}  // namespace

std::string_view to_string(const claim c) noexcept {
    switch (c) {
        case claim::corrected:
            return "Corrected";
        case claim::original:
            return "OriginalClaim";
    }
    return "unknown";
}

double checked_angle(const double theta) {
    if (!(theta >= -angle_slack && theta <= pi + angle_slack)) {
        throw domain_error("angle " + std::to_string(theta) + " is outside [0, pi]");
    }
    return std::clamp(theta, 0.0, pi);
}

pair_geometry angle_between(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size()) {
        throw dimension_mismatch_error("vectors have dimensions " + std::to_string(x.size()) + " and " + std::to_string(y.size()));
    }
    if (x.empty()) {
        throw dimension_mismatch_error("vectors must have dimension >= 1");
    }
    const double xx = dot(x, x);
    const double yy = dot(y, y);
    if (xx == 0.0 || yy == 0.0) {
        throw zero_vector_error("angle is undefined for a zero vector");
    }
    double sq_dist = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double d = x[i] - y[i];
        sq_dist += d * d;
    }

    pair_geometry g;
    g.norm_x = std::sqrt(xx);
    g.norm_y = std::sqrt(yy);
    // sqrt(fl(a * a)) == a exactly, so identical inputs give cos_theta == 1
    g.cos_theta = std::clamp(dot(x, y) / std::sqrt(xx * yy), -1.0, 1.0);
    g.theta = std::acos(g.cos_theta);
    g.psi = psi_of_angle(g.theta);
    g.sq_dist = sq_dist;
    return g;
}

pair_geometry geometry_from_angle(const double theta, const double norm_x, const double norm_y) {
    if (!(norm_x >= 0.0) || !(norm_y >= 0.0) || !std::isfinite(norm_x) || !std::isfinite(norm_y)) {
        throw domain_error("norms must be finite and nonnegative");
    }
    pair_geometry g;
    g.theta = checked_angle(theta);
    g.norm_x = norm_x;
    g.norm_y = norm_y;
    g.cos_theta = std::cos(g.theta);
    g.psi = psi_of_angle(g.theta);
    g.sq_dist = std::max(0.0, norm_x * norm_x + norm_y * norm_y - 2.0 * norm_x * norm_y * g.cos_theta);
    return g;
}

double psi_of_angle(double theta) {
    theta = checked_angle(theta);
    if (theta < psi_series_cutoff) {
        // sin t - t cos t = t^3/3 - t^5/30 + t^7/840 - t^9/45360 + ...
        const double t2 = theta * theta;
        const double series = t2 * (1.0 / 3.0 - t2 * (1.0 / 30.0 - t2 * (1.0 / 840.0 - t2 / 45360.0)));
        return theta * series / pi;
    }
    return (std::sin(theta) - theta * std::cos(theta)) / pi;
}

distance_claim expected_sq_dist(const pair_geometry &geom, const claim variant) {
    const double angular = geom.norm_x * geom.norm_y * geom.psi;
    const double half = 0.5 * geom.sq_dist;
    const double value = variant == claim::corrected ? half - angular : half + angular;
    return { variant, std::max(0.0, value) };
}

double cross_term_closed_form(double theta, const double norm_x, const double norm_y, const std::uint64_t m) {
    theta = checked_angle(theta);
    if (m == 0) {
        throw invalid_argument_error("layer width m must be >= 1");
    }
    return norm_x * norm_y / (2.0 * static_cast<double>(m)) * (std::cos(theta) + psi_of_angle(theta));
}

double cross_term_integral_form(double theta, const double norm_x, const double norm_y, const std::uint64_t m) {
    theta = checked_angle(theta);
    if (m == 0) {
        throw invalid_argument_error("layer width m must be >= 1");
    }
    const double c = std::cos(theta);
    const double integral = 0.5 * pi * c + 0.5 * (std::sin(theta) - theta * c);
    return norm_x * norm_y / (static_cast<double>(m) * pi) * integral;
}

double expected_output_cos(double theta) {
    theta = checked_angle(theta);
    return std::clamp(std::cos(theta) + psi_of_angle(theta), 0.0, 1.0);
}

double next_angle(const double theta) {
    return std::acos(expected_output_cos(theta));
}

envelope shrinkage_bounds(const pair_geometry &geom) {
    return { 0.25 * geom.sq_dist, 0.5 * geom.sq_dist };
}

double unit_shrinkage_ratio(double theta) {
    theta = checked_angle(theta);
    if (theta < 1e-6) {
        return 0.5;
    }
    // 1 - cos t = 2 sin^2(t/2) without cancellation
    const double half_sin = std::sin(0.5 * theta);
    return 0.5 - psi_of_angle(theta) / (4.0 * half_sin * half_sin);
}

}  // namespace reludist
