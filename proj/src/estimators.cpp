#include "reludist/estimators.hpp"

#include "reludist/errors.hpp"
#include "reludist/random_layer.hpp"
#include "reludist/rng.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

namespace reludist {

namespace {

constexpr double min_distinguishable_psi = 0.01;
constexpr double separation_in_stderrs = 5.0;

void require_trials(const std::size_t trials) {
    if (trials < 2) {
        throw invalid_argument_error("at least 2 trials are needed for a standard error, got " + std::to_string(trials));
    }
}

void require_pair(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size()) {
        throw dimension_mismatch_error("vectors have dimensions " + std::to_string(x.size()) + " and " + std::to_string(y.size()));
    }
    if (x.empty()) {
        throw dimension_mismatch_error("vectors must have dimension >= 1");
    }
}

double z_score(const double mean, const double target, const double std_error) {
    const double diff = mean - target;
    if (std_error > 0.0) {
        return diff / std_error;
    }
    if (diff == 0.0) {
        return 0.0;
    }
    return diff > 0.0 ? std::numeric_limits<double>::infinity() : -std::numeric_limits<double>::infinity();
}

}  // namespace

moment_estimate summarize(std::span<const double> values, const std::uint64_t master_seed) {
    require_trials(values.size());
    const double count = static_cast<double>(values.size());
    double sum = 0.0;
    for (const double v : values) {
        sum += v;
    }
    const double mean = sum / count;
    double sq = 0.0;
    for (const double v : values) {
        const double d = v - mean;
        sq += d * d;
    }
    const double variance = sq / (count - 1.0);
    return { mean, std::sqrt(variance / count), values.size(), master_seed };
}

std::uint64_t trial_seed(const std::uint64_t master_seed, const std::uint64_t trial) noexcept {
    return rng::derive_seed(master_seed, trial);
}

std::vector<double> sq_dist_trials(std::span<const double> x, std::span<const double> y, const std::size_t m,
                                   const std::size_t trials, const std::uint64_t master_seed, const execution exec) {
    require_pair(x, y);
    std::vector<double> values(trials);
    parallel_for(trials, exec, [&](const std::size_t t) {
        const auto p = project_pair(trial_seed(master_seed, t), m, x, y);
        double s = 0.0;
        for (std::size_t i = 0; i < m; ++i) {
            const double d = relu(p.mx[i]) - relu(p.my[i]);
            s += d * d;
        }
        values[t] = s;
    });
    return values;
}

moment_estimate mc_sq_dist(std::span<const double> x, std::span<const double> y, const std::size_t m, const std::size_t trials,
                           const std::uint64_t master_seed, const execution exec) {
    require_trials(trials);
    return summarize(sq_dist_trials(x, y, m, trials, master_seed, exec), master_seed);
}

output_cos_estimate mc_output_cos(std::span<const double> x, std::span<const double> y, const std::size_t m,
                                  const std::size_t trials, const std::uint64_t master_seed, const execution exec) {
    require_pair(x, y);
    require_trials(trials);
    if (squared_norm(x) == 0.0 || squared_norm(y) == 0.0) {
        throw zero_vector_error("output angle is undefined for a zero input");
    }
    std::vector<double> values(trials);
    std::vector<char> usable(trials, 0);
    parallel_for(trials, exec, [&](const std::size_t t) {
        const auto p = project_pair(trial_seed(master_seed, t), m, x, y);
        double xx = 0.0;
        double yy = 0.0;
        double xy = 0.0;
        for (std::size_t i = 0; i < m; ++i) {
            const double a = relu(p.mx[i]);
            const double b = relu(p.my[i]);
            xx += a * a;
            yy += b * b;
            xy += a * b;
        }
        if (xx > 0.0 && yy > 0.0) {
            values[t] = std::clamp(xy / std::sqrt(xx * yy), -1.0, 1.0);
            usable[t] = 1;
        }
    });

    std::vector<double> kept;
    kept.reserve(trials);
    for (std::size_t t = 0; t < trials; ++t) {
        if (usable[t] != 0) {
            kept.push_back(values[t]);
        }
    }
    if (kept.empty()) {
        throw all_trials_degenerate_error("every trial produced a zero output vector");
    }
    const std::uint64_t degenerate = trials - kept.size();
    if (kept.size() == 1) {
        // a single usable trial has no spread estimate
        return { { kept.front(), std::numeric_limits<double>::infinity(), 1, master_seed }, degenerate };
    }
    return { summarize(kept, master_seed), degenerate };
}

moment_estimate cross_term_mc_2d(double theta, const std::size_t trials, const std::uint64_t master_seed) {
    theta = checked_angle(theta);
    require_trials(trials);
    const double c = std::cos(theta);
    const double s = std::sin(theta);
    rng::stream draws{ master_seed };
    std::vector<double> values(trials);
    for (auto &v : values) {
        const double g1 = draws.normal();
        const double g2 = draws.normal();
        v = relu(g1) * relu(g1 * c + g2 * s);
    }
    return summarize(values, master_seed);
}

double quadrature_cross_integral(double theta, const std::size_t panels) {
    theta = checked_angle(theta);
    if (panels < 2 || panels % 2 != 0) {
        throw invalid_argument_error("Simpson's rule needs an even panel count >= 2");
    }
    const double upper = std::numbers::pi - theta;
    if (upper <= 0.0) {
        return 0.0;
    }
    const auto f = [theta](const double t) { return std::sin(t) * std::sin(t + theta); };
    const double h = upper / static_cast<double>(panels);
    double odd = 0.0;
    double even = 0.0;
    for (std::size_t k = 1; k < panels; ++k) {
        const double v = f(h * static_cast<double>(k));
        if (k % 2 == 1) {
            odd += v;
        } else {
            even += v;
        }
    }
    return h / 3.0 * (f(0.0) + 4.0 * odd + 2.0 * even + f(upper));
}

std::string_view to_string(const verdict v) noexcept {
    switch (v) {
        case verdict::supports_corrected:
            return "SupportsCorrected";
        case verdict::supports_original:
            return "SupportsOriginal";
        case verdict::inconclusive:
            return "Inconclusive";
    }
    return "unknown";
}

verdict classify(const double z_corrected, const double z_original, const verdict_thresholds thresholds) noexcept {
    const double zc = std::fabs(z_corrected);
    const double zo = std::fabs(z_original);
    if (zc <= thresholds.z_accept && zo >= thresholds.z_reject) {
        return verdict::supports_corrected;
    }
    if (zo <= thresholds.z_accept && zc >= thresholds.z_reject) {
        return verdict::supports_original;
    }
    return verdict::inconclusive;
}

double predicted_sq_dist_stderr(const double sq_dist, const std::size_t m, const std::size_t trials) noexcept {
    return std::sqrt(3.0 / (static_cast<double>(m) * static_cast<double>(trials))) * sq_dist;
}

zscore_verdict refutation_test(std::span<const double> x, std::span<const double> y, const std::size_t m,
                               const std::size_t trials, const std::uint64_t master_seed, const verdict_thresholds thresholds,
                               const execution exec) {
    const pair_geometry geom = angle_between(x, y);
    require_trials(trials);
    if (m == 0) {
        throw invalid_argument_error("layer width m must be >= 1");
    }
    const double gap = geom.norm_x * geom.norm_y * geom.psi;
    const double predicted = predicted_sq_dist_stderr(geom.sq_dist, m, trials);
    if (geom.psi < min_distinguishable_psi || gap < separation_in_stderrs * predicted) {
        // gap >= 5 sqrt(3 / (m T)) d^2  <=>  T >= 75 d^4 / (m gap^2)
        std::uint64_t required = 0;
        if (gap > 0.0 && geom.psi >= min_distinguishable_psi) {
            const double d2 = geom.sq_dist;
            required = static_cast<std::uint64_t>(std::ceil(75.0 * d2 * d2 / (static_cast<double>(m) * gap * gap)));
        }
        throw hypotheses_too_close_error("corrected and original expectations differ by " + std::to_string(2.0 * gap)
                                             + ", too little to separate at " + std::to_string(trials) + " trials"
                                             + (required > 0 ? "; about " + std::to_string(required) + " trials are needed"
                                                             : "; no trial count suffices for this pair"),
                                         required);
    }

    zscore_verdict result;
    result.estimate = mc_sq_dist(x, y, m, trials, master_seed, exec);
    result.corrected = expected_sq_dist(geom, claim::corrected).value;
    result.original = expected_sq_dist(geom, claim::original).value;
    result.z_corrected = z_score(result.estimate.mean, result.corrected, result.estimate.std_error);
    result.z_original = z_score(result.estimate.mean, result.original, result.estimate.std_error);
    result.outcome = classify(result.z_corrected, result.z_original, thresholds);
    return result;
}

moment_estimate mean_width_estimate(const std::vector<real_vector> &points, const std::size_t g_samples,
                                    const std::uint64_t master_seed) {
    if (points.size() < 2) {
        throw too_few_points_error("mean width needs at least 2 points, got " + std::to_string(points.size()));
    }
    const std::size_t n = points.front().size();
    for (const auto &p : points) {
        if (p.size() != n || n == 0) {
            throw dimension_mismatch_error("all points must share one nonzero dimension");
        }
        if (!std::all_of(p.begin(), p.end(), [](const double v) { return std::isfinite(v); })) {
            throw invalid_argument_error("points must be finite");
        }
    }
    require_trials(g_samples);

    rng::stream draws{ master_seed };
    std::vector<double> g(n);
    std::vector<double> values(g_samples);
    for (auto &v : values) {
        for (double &gi : g) {
            gi = draws.normal();
        }
        double hi = -std::numeric_limits<double>::infinity();
        double lo = std::numeric_limits<double>::infinity();
        for (const auto &p : points) {
            double s = 0.0;
            for (std::size_t k = 0; k < n; ++k) {
                s += g[k] * p[k];
            }
            hi = std::max(hi, s);
            lo = std::min(lo, s);
        }
        v = hi - lo;
    }
    return summarize(values, master_seed);
}

}  // namespace reludist
