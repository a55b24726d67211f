#include "reludist/experiments.hpp"

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

// keeps class sampling streams apart from trial streams derived from the same seed
constexpr std::uint64_t class_stream_tag = 0x636c6173736573ULL;

void require(const bool ok, const std::string &message) {
    if (!ok) {
        throw invalid_argument_error(message);
    }
}

sweep_record distance_record(const sweep_kind kind, const double theta, const vector_pair &pair, const std::size_t m,
                             const moment_estimate &empirical) {
    const pair_geometry geom = angle_between(pair.x, pair.y);
    const envelope bounds = shrinkage_bounds(geom);
    sweep_record r;
    r.kind = kind;
    r.theta = theta;
    r.m = m;
    r.trials = empirical.trials;
    r.layers = 1;
    r.empirical = empirical;
    r.analytic_corrected = expected_sq_dist(geom, claim::corrected).value;
    r.analytic_original = expected_sq_dist(geom, claim::original).value;
    r.bound_lower = bounds.lower;
    r.bound_upper = bounds.upper;
    return r;
}

real_vector random_unit_vector(rng::stream &draws, const std::size_t n) {
    real_vector v(n);
    for (;;) {
        for (double &c : v) {
            c = draws.normal();
        }
        const double norm = std::sqrt(squared_norm(v));
        if (norm > 0.0) {
            for (double &c : v) {
                c /= norm;
            }
            return v;
        }
    }
}

double unit_angle(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) {
        s += a[k] * b[k];
    }
    return std::acos(std::clamp(s, -1.0, 1.0));
}

// Unit vector orthogonal to the unit vector `center`.
real_vector orthogonal_direction(rng::stream &draws, std::span<const double> center) {
    for (;;) {
        real_vector u = random_unit_vector(draws, center.size());
        double proj = 0.0;
        for (std::size_t k = 0; k < u.size(); ++k) {
            proj += u[k] * center[k];
        }
        for (std::size_t k = 0; k < u.size(); ++k) {
            u[k] -= proj * center[k];
        }
        const double norm = std::sqrt(squared_norm(u));
        if (norm > 1e-8) {
            for (double &c : u) {
                c /= norm;
            }
            return u;
        }
    }
}

struct group_accumulator {
    double sum{};
    double min{ std::numeric_limits<double>::infinity() };
    double max{ -std::numeric_limits<double>::infinity() };
    std::size_t count{};

    void add(const double v) {
        sum += v;
        min = std::min(min, v);
        max = std::max(max, v);
        ++count;
    }

    [[nodiscard]] std::optional<double> mean() const {
        return count == 0 ? std::nullopt : std::optional<double>{ sum / static_cast<double>(count) };
    }
};

distance_summary summarize_groups(const group_accumulator &intra, const group_accumulator &inter) {
    distance_summary s;
    s.mean_intra = intra.mean();
    s.mean_inter = inter.mean();
    if (inter.count > 0) {
        s.min_inter = inter.min;
    }
    if (intra.count > 0) {
        s.max_intra = intra.max;
    }
    return s;
}

}  // namespace

vector_pair unit_pair(const std::size_t n, double theta) {
    theta = checked_angle(theta);
    require(n >= 2, "a pair at a prescribed angle needs ambient dimension n >= 2");
    vector_pair p{ real_vector(n, 0.0), real_vector(n, 0.0) };
    p.x[0] = 1.0;
    p.y[0] = std::cos(theta);
    p.y[1] = std::sin(theta);
    return p;
}

std::vector<double> uniform_angle_grid(const std::size_t points) {
    require(points >= 1, "an angle grid needs at least one point");
    std::vector<double> grid(points, 0.0);
    for (std::size_t k = 1; k < points; ++k) {
        grid[k] = std::numbers::pi * static_cast<double>(k) / static_cast<double>(points - 1);
    }
    return grid;
}

std::vector<sweep_record> theta_sweep(std::span<const double> theta_grid, const std::size_t m, const std::size_t trials,
                                      const std::uint64_t master_seed, const std::size_t n, const execution exec) {
    std::vector<sweep_record> records;
    records.reserve(theta_grid.size());
    for (const double theta : theta_grid) {
        const vector_pair pair = unit_pair(n, theta);
        const moment_estimate est = mc_sq_dist(pair.x, pair.y, m, trials, master_seed, exec);
        records.push_back(distance_record(sweep_kind::theta, checked_angle(theta), pair, m, est));
    }
    return records;
}

std::vector<sweep_record> concentration_sweep(std::span<const std::size_t> m_list, double theta, const std::size_t trials,
                                              const std::uint64_t master_seed, const std::size_t n, const execution exec) {
    require(!m_list.empty(), "m_list must not be empty");
    for (std::size_t k = 0; k < m_list.size(); ++k) {
        require(m_list[k] >= 1, "layer widths must be >= 1");
        require(k == 0 || m_list[k] > m_list[k - 1], "m_list must be strictly increasing");
    }
    theta = checked_angle(theta);
    const vector_pair pair = unit_pair(n, theta);

    std::vector<sweep_record> records;
    for (std::size_t k = 0; k < m_list.size(); ++k) {
        const std::uint64_t seed = rng::derive_seed(master_seed, k);
        const std::vector<double> values = sq_dist_trials(pair.x, pair.y, m_list[k], trials, seed, exec);
        sweep_record r = distance_record(sweep_kind::concentration, theta, pair, m_list[k], summarize(values, seed));
        double sq = 0.0;
        double worst = 0.0;
        for (const double v : values) {
            const double dev = std::fabs(v - r.analytic_corrected);
            sq += dev * dev;
            worst = std::max(worst, dev);
        }
        r.rms_deviation = std::sqrt(sq / static_cast<double>(values.size()));
        r.max_deviation = worst;
        records.push_back(r);
    }
    return records;
}

std::optional<double> loglog_slope(std::span<const sweep_record> records) {
    std::vector<double> xs;
    std::vector<double> ys;
    for (const auto &r : records) {
        if (r.rms_deviation && *r.rms_deviation > 0.0 && r.m > 0) {
            xs.push_back(std::log(static_cast<double>(r.m)));
            ys.push_back(std::log(*r.rms_deviation));
        }
    }
    if (xs.size() < 2) {
        return std::nullopt;
    }
    const double count = static_cast<double>(xs.size());
    double mx = 0.0;
    double my = 0.0;
    for (std::size_t k = 0; k < xs.size(); ++k) {
        mx += xs[k];
        my += ys[k];
    }
    mx /= count;
    my /= count;
    double sxy = 0.0;
    double sxx = 0.0;
    for (std::size_t k = 0; k < xs.size(); ++k) {
        sxy += (xs[k] - mx) * (ys[k] - my);
        sxx += (xs[k] - mx) * (xs[k] - mx);
    }
    if (sxx == 0.0) {
        return std::nullopt;
    }
    return sxy / sxx;
}

labeled_points generate_classes(const class_config &config) {
    require(config.ambient_dim >= 2, "ambient dimension must be >= 2");
    require(config.classes >= 1, "at least one class is required");
    require(config.points_per_class >= 1, "at least one point per class is required");
    require(config.intra_angle_max > 0.0 && config.intra_angle_max < config.inter_angle_min
                && config.inter_angle_min <= std::numbers::pi,
            "class angles must satisfy 0 < intra_angle_max < inter_angle_min <= pi");

    labeled_points out;
    const std::uint64_t class_seed = rng::derive_seed(config.master_seed, class_stream_tag);
    rng::stream center_draws{ rng::derive_seed(class_seed, 0) };
    std::size_t attempts = 0;
    while (out.centers.size() < config.classes) {
        if (attempts == center_attempt_cap) {
            throw infeasible_geometry_error("placed only " + std::to_string(out.centers.size()) + " of "
                                            + std::to_string(config.classes) + " class centers at pairwise angle >= "
                                            + std::to_string(config.inter_angle_min) + " in R^"
                                            + std::to_string(config.ambient_dim) + " after "
                                            + std::to_string(center_attempt_cap) + " attempts");
        }
        ++attempts;
        real_vector candidate = random_unit_vector(center_draws, config.ambient_dim);
        const bool separated = std::all_of(out.centers.begin(), out.centers.end(), [&](const real_vector &c) {
            return unit_angle(c, candidate) >= config.inter_angle_min;
        });
        if (separated) {
            out.centers.push_back(std::move(candidate));
        }
    }

    rng::stream point_draws{ rng::derive_seed(class_seed, 1) };
    for (std::size_t c = 0; c < config.classes; ++c) {
        const real_vector &center = out.centers[c];
        for (std::size_t k = 0; k < config.points_per_class; ++k) {
            const real_vector u = orthogonal_direction(point_draws, center);
            const double alpha = config.intra_angle_max * point_draws.uniform();
            real_vector p(config.ambient_dim);
            for (std::size_t d = 0; d < p.size(); ++d) {
                p[d] = std::cos(alpha) * center[d] + std::sin(alpha) * u[d];
            }
            const double norm = std::sqrt(squared_norm(p));
            for (double &v : p) {
                v /= norm;
            }
            out.points.push_back(std::move(p));
            out.labels.push_back(c);
        }
    }
    return out;
}

separation_report separation_on(const labeled_points &data, const std::size_t m, const std::size_t layers,
                                const std::size_t trials, const std::uint64_t master_seed, const execution exec) {
    require(data.points.size() == data.labels.size(), "every point needs a label");
    require(m >= 1, "layer width m must be >= 1");
    require(layers >= 1, "at least one layer is required");
    require(trials >= 1, "at least one trial is required");
    const std::size_t count = data.points.size();
    const std::size_t n = count == 0 ? 0 : data.points.front().size();
    for (const auto &p : data.points) {
        if (p.size() != n) {
            throw dimension_mismatch_error("all points must share one dimension");
        }
    }

    struct pair_index {
        std::size_t i;
        std::size_t j;
    };
    std::vector<pair_index> pairs;
    for (std::size_t i = 0; i < count; ++i) {
        for (std::size_t j = i + 1; j < count; ++j) {
            pairs.push_back({ i, j });
        }
    }

    // per-trial squared output distances, indexed [trial][pair]
    std::vector<std::vector<double>> post_sq(trials);
    if (!pairs.empty()) {
        parallel_for(trials, exec, [&](const std::size_t t) {
            const std::uint64_t seed = trial_seed(master_seed, t);
            std::vector<real_vector> current = data.points;
            std::size_t width = n;
            for (std::size_t k = 0; k < layers; ++k) {
                const gaussian_layer layer = gaussian_layer::sample(width, m, rng::derive_seed(seed, k));
                for (auto &v : current) {
                    v = relu_forward(layer, v);
                }
                width = m;
            }
            auto &out = post_sq[t];
            out.resize(pairs.size());
            for (std::size_t p = 0; p < pairs.size(); ++p) {
                out[p] = squared_distance(current[pairs[p].i], current[pairs[p].j]);
            }
        });
    }

    group_accumulator pre_intra;
    group_accumulator pre_inter;
    group_accumulator post_intra;
    group_accumulator post_inter;
    group_accumulator ratio_intra;
    group_accumulator ratio_inter;
    separation_report report;
    for (std::size_t p = 0; p < pairs.size(); ++p) {
        const bool same = data.labels[pairs[p].i] == data.labels[pairs[p].j];
        const double pre_sq = squared_distance(data.points[pairs[p].i], data.points[pairs[p].j]);
        double mean_sq = 0.0;
        double mean_dist = 0.0;
        for (std::size_t t = 0; t < trials; ++t) {
            mean_sq += post_sq[t][p];
            mean_dist += std::sqrt(post_sq[t][p]);
        }
        mean_sq /= static_cast<double>(trials);
        mean_dist /= static_cast<double>(trials);

        (same ? pre_intra : pre_inter).add(std::sqrt(pre_sq));
        (same ? post_intra : post_inter).add(mean_dist);
        if (pre_sq > 0.0) {
            (same ? ratio_intra : ratio_inter).add(mean_sq / pre_sq);
        }
        ++(same ? report.intra_pairs : report.inter_pairs);
    }
    report.pre = summarize_groups(pre_intra, pre_inter);
    report.post = summarize_groups(post_intra, post_inter);
    report.ratio_intra = ratio_intra.mean();
    report.ratio_inter = ratio_inter.mean();
    report.m = m;
    report.layers = layers;
    report.trials = trials;
    return report;
}

separation_report separation_experiment(const class_config &config, const std::size_t m, const std::size_t layers,
                                        const std::size_t trials, const std::uint64_t master_seed, const execution exec) {
    return separation_on(generate_classes(config), m, layers, trials, master_seed, exec);
}

std::vector<double> angle_map_cosines(double theta, const std::size_t depth) {
    theta = checked_angle(theta);
    std::vector<double> cosines{ std::cos(theta) };
    for (std::size_t k = 0; k < depth; ++k) {
        cosines.push_back(expected_output_cos(theta));
        theta = next_angle(theta);
    }
    return cosines;
}

std::vector<sweep_record> depth_sweep(double theta, std::span<const std::size_t> widths, const std::size_t layers_max,
                                      const std::size_t trials, const std::uint64_t master_seed, const std::size_t n,
                                      const execution exec) {
    theta = checked_angle(theta);
    require(!widths.empty(), "at least one layer width is required");
    require(widths.size() == 1 || widths.size() >= layers_max,
            "widths must hold one value or one value per layer (" + std::to_string(layers_max) + ")");
    require(std::all_of(widths.begin(), widths.end(), [](const std::size_t w) { return w >= 1; }), "layer widths must be >= 1");
    require(trials >= 2, "at least 2 trials are needed for a standard error");
    const auto width_at = [&](const std::size_t layer) { return widths.size() == 1 ? widths.front() : widths[layer]; };

    const vector_pair pair = unit_pair(n, theta);
    const pair_geometry input = angle_between(pair.x, pair.y);
    const std::vector<double> predicted = angle_map_cosines(theta, layers_max);

    // cosines[t][L - 1] for L = 1..layers_max; NaN marks a zero output vector
    std::vector<std::vector<double>> cosines(trials, std::vector<double>(layers_max));
    parallel_for(trials, exec, [&](const std::size_t t) {
        const std::uint64_t seed = trial_seed(master_seed, t);
        real_vector x = pair.x;
        real_vector y = pair.y;
        for (std::size_t k = 0; k < layers_max; ++k) {
            auto p = project_pair(rng::derive_seed(seed, k), width_at(k), x, y);
            double xx = 0.0;
            double yy = 0.0;
            double xy = 0.0;
            for (std::size_t i = 0; i < p.mx.size(); ++i) {
                p.mx[i] = relu(p.mx[i]);
                p.my[i] = relu(p.my[i]);
                xx += p.mx[i] * p.mx[i];
                yy += p.my[i] * p.my[i];
                xy += p.mx[i] * p.my[i];
            }
            cosines[t][k] = (xx > 0.0 && yy > 0.0) ? std::clamp(xy / std::sqrt(xx * yy), -1.0, 1.0)
                                                    : std::numeric_limits<double>::quiet_NaN();
            x = std::move(p.mx);
            y = std::move(p.my);
        }
    });

    std::vector<sweep_record> records;
    sweep_record base;
    base.kind = sweep_kind::depth;
    base.theta = theta;
    base.m = n;
    base.trials = trials;
    base.layers = 0;
    base.empirical = { input.cos_theta, 0.0, trials, master_seed };
    base.analytic_corrected = predicted[0];
    base.analytic_original = std::numeric_limits<double>::quiet_NaN();
    base.bound_lower = -1.0;
    base.bound_upper = 1.0;
    records.push_back(base);

    for (std::size_t k = 0; k < layers_max; ++k) {
        std::vector<double> kept;
        for (std::size_t t = 0; t < trials; ++t) {
            if (!std::isnan(cosines[t][k])) {
                kept.push_back(cosines[t][k]);
            }
        }
        if (kept.size() < 2) {
            throw all_trials_degenerate_error("fewer than two trials kept a nonzero output at depth " + std::to_string(k + 1));
        }
        sweep_record r = base;
        r.m = width_at(k);
        r.layers = k + 1;
        r.empirical = summarize(kept, master_seed);
        r.trials = kept.size();
        r.analytic_corrected = predicted[k + 1];
        r.bound_lower = 0.0;
        records.push_back(r);
    }
    return records;
}

}  // namespace reludist
