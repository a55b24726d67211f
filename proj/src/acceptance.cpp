#include "reludist/acceptance.hpp"

#include "reludist/cli.hpp"
#include "reludist/estimators.hpp"
#include "reludist/experiments.hpp"
#include "reludist/geometry.hpp"
#include "reludist/random_layer.hpp"
#include "reludist/rng.hpp"

#include <chrono>
#include <cmath>
#include <functional>
#include <numbers>
#include <sstream>

namespace reludist {

namespace {

constexpr double pi = std::numbers::pi;

struct outcome {
    bool passed;
    std::string detail;
};

std::string num(const double v) {
    std::ostringstream s;
    s.precision(6);
    s << v;
    return s.str();
}

real_vector basis(const std::size_t n, const std::size_t k) {
    real_vector v(n, 0.0);
    v[k] = 1.0;
    return v;
}

// 1. relu(Mx) - relu(-Mx) = Mx entrywise, so the antipodal squared distance is ||Mx||^2 exactly.
outcome antipodal_identity(const execution) {
    constexpr std::size_t n = 64;
    constexpr std::size_t m = 1024;
    constexpr std::size_t draws = 100;
    double worst_rel = 0.0;
    std::vector<double> ratios;
    for (std::size_t k = 0; k < draws; ++k) {
        const gaussian_layer layer = sample_layer(n, m, rng::derive_seed(1, k));
        rng::stream xs{ rng::derive_seed(2, k) };
        real_vector x(n);
        for (double &v : x) {
            v = xs.normal();
        }
        real_vector neg = x;
        for (double &v : neg) {
            v = -v;
        }
        const double realized = sq_dist_realization(layer, x, neg);
        const double mx = squared_norm(linear_forward(layer, x));
        worst_rel = std::max(worst_rel, std::fabs(realized - mx) / mx);
        ratios.push_back(realized / squared_norm(x));
    }
    const moment_estimate est = summarize(ratios, 0);
    const pair_geometry unit = angle_between(basis(2, 0), real_vector{ -1.0, 0.0 });
    const double corrected = expected_sq_dist(unit, claim::corrected).value;
    const double original = expected_sq_dist(unit, claim::original).value;
    const bool ok = worst_rel <= 1e-12 && corrected == 1.0 && original == 3.0 && std::fabs(est.mean - 1.0) <= 4.0 * est.std_error
                    && std::fabs(est.mean - 3.0) >= 10.0 * est.std_error;
    return { ok, "max rel err " + num(worst_rel) + ", mean ||out||^2/||x||^2 " + num(est.mean) + " +- " + num(est.std_error)
                     + ", corrected " + num(corrected) + ", original " + num(original) };
}

// 2. Unit orthogonal pair separates 1 - 1/pi from 1 + 1/pi.
outcome orthogonal_discrimination(const execution exec) {
    const real_vector x = basis(64, 0);
    const real_vector y = basis(64, 1);
    const zscore_verdict v = refutation_test(x, y, 1024, 400, 0, {}, exec);
    const double se = v.estimate.std_error;
    const bool ok = std::fabs(v.estimate.mean - (1.0 - 1.0 / pi)) <= 4.0 * se && std::fabs(v.estimate.mean - (1.0 + 1.0 / pi)) >= 10.0 * se
                    && v.outcome == verdict::supports_corrected;
    return { ok, "mean " + num(v.estimate.mean) + " +- " + num(se) + ", z_corrected " + num(v.z_corrected) + ", z_original "
                     + num(v.z_original) + ", verdict " + std::string(to_string(v.outcome)) };
}

// 3. Closed form, Simpson quadrature and planar Monte Carlo agree on the cross term.
outcome cross_term_triple(const execution) {
    bool ok = true;
    double worst_quad = 0.0;
    double worst_z = 0.0;
    for (int k = 0; k <= 6; ++k) {
        const double theta = pi * k / 6.0;
        const double closed = cross_term_closed_form(theta, 1.0, 1.0, 1);
        const double quad_err = std::fabs(quadrature_cross_integral(theta) - pi * closed);
        const moment_estimate mc = cross_term_mc_2d(theta, 100000, rng::derive_seed(3, static_cast<std::uint64_t>(k)));
        const double diff = std::fabs(mc.mean - closed);
        ok = ok && quad_err <= 1e-9 && diff <= 4.0 * mc.std_error;
        worst_quad = std::max(worst_quad, quad_err);
        if (mc.std_error > 0.0) {
            worst_z = std::max(worst_z, diff / mc.std_error);
        }
    }
    return { ok, "max |quadrature - closed| " + num(worst_quad) + ", max MC |z| " + num(worst_z) };
}

// 4. Output cosine follows cos theta + psi(theta).
outcome angle_law(const execution exec) {
    const std::vector<double> grid = uniform_angle_grid(181);
    double worst = 0.0;
    double lowest = 1.0;
    double highest = 0.0;
    for (const double theta : grid) {
        const vector_pair pair = unit_pair(64, theta);
        const output_cos_estimate est = mc_output_cos(pair.x, pair.y, 4096, 100, 0, exec);
        worst = std::max(worst, std::fabs(est.estimate.mean - expected_output_cos(theta)));
        lowest = std::min(lowest, est.estimate.mean);
        highest = std::max(highest, est.estimate.mean);
    }
    const bool ok = worst <= 0.02 && lowest >= -0.02 && highest <= 1.0;
    return { ok, "sup deviation " + num(worst) + ", empirical range [" + num(lowest) + ", " + num(highest) + "]" };
}

// 5. Corrected expectation inside [d^2/4, d^2/2]; MC means inside the envelope widened by 3 stderr.
outcome envelope_check(const execution exec) {
    constexpr std::size_t n = 8;
    rng::stream draws{ 5 };
    const auto ball_point = [&] {
        real_vector v(n);
        for (double &c : v) {
            c = draws.normal();
        }
        const double scale = std::pow(draws.uniform(), 1.0 / static_cast<double>(n)) / std::sqrt(squared_norm(v));
        for (double &c : v) {
            c *= scale;
        }
        return v;
    };
    std::size_t analytic_misses = 0;
    std::size_t mc_misses = 0;
    for (std::size_t k = 0; k < 100; ++k) {
        const real_vector x = ball_point();
        const real_vector y = ball_point();
        const pair_geometry g = angle_between(x, y);
        const envelope b = shrinkage_bounds(g);
        const double corrected = expected_sq_dist(g, claim::corrected).value;
        if (!(b.lower <= corrected && corrected <= b.upper)) {
            ++analytic_misses;
        }
        const moment_estimate est = mc_sq_dist(x, y, 512, 40, rng::derive_seed(6, k), exec);
        if (!(est.mean >= b.lower - 3.0 * est.std_error && est.mean <= b.upper + 3.0 * est.std_error)) {
            ++mc_misses;
        }
    }
    return { analytic_misses == 0 && mc_misses == 0,
             std::to_string(analytic_misses) + " analytic and " + std::to_string(mc_misses) + " Monte Carlo envelope violations" };
}

// 6. Unit shrinkage ratio strictly decreasing from 1/2 to 1/4.
outcome shrinkage_monotone(const execution) {
    const std::vector<double> grid = uniform_angle_grid(181);
    bool decreasing = true;
    double prev = unit_shrinkage_ratio(grid.front());
    for (std::size_t k = 1; k < grid.size(); ++k) {
        const double r = unit_shrinkage_ratio(grid[k]);
        decreasing = decreasing && r < prev;
        prev = r;
    }
    const double start = unit_shrinkage_ratio(0.0);
    const double end = unit_shrinkage_ratio(pi);
    const bool ok = decreasing && std::fabs(start - 0.5) <= 1e-9 && std::fabs(end - 0.25) <= 1e-9;
    return { ok, std::string(decreasing ? "strictly decreasing" : "NOT strictly decreasing") + ", ratio(0) " + num(start)
                     + ", ratio(pi) " + num(end) };
}

// 7. RMS deviation of single realizations shrinks like m^-1/2.
outcome concentration_scaling(const execution exec) {
    const std::vector<std::size_t> m_list{ 64, 128, 256, 512, 1024, 2048, 4096, 8192 };
    const auto records = concentration_sweep(m_list, pi / 2.0, 200, 0, 64, exec);
    const auto slope = loglog_slope(records);
    const bool ok = slope && *slope >= -0.6 && *slope <= -0.4;
    return { ok, "log-log slope " + (slope ? num(*slope) : std::string("absent")) };
}

// 8. Inter-class pairs shrink more than intra-class pairs.
outcome class_separation(const execution exec) {
    const class_config config{ 64, 2, 20, 15.0 * pi / 180.0, 60.0 * pi / 180.0, 0 };
    const separation_report report = separation_experiment(config, 2048, 1, 50, 0, exec);
    if (!report.ratio_inter || !report.ratio_intra) {
        return { false, "a pair group is empty" };
    }
    const double inter = *report.ratio_inter;
    const double intra = *report.ratio_intra;
    const auto in_band = [](const double r) { return r >= 0.23 && r <= 0.52; };
    const bool ok = inter < intra - 0.02 && in_band(inter) && in_band(intra);
    return { ok, "ratio inter " + num(inter) + ", ratio intra " + num(intra) };
}

// 9. Mean width of {e1, e2} is E|g1 - g2| = 2 / sqrt(pi).
outcome mean_width(const execution) {
    const std::vector<real_vector> points{ basis(64, 0), basis(64, 1) };
    const moment_estimate est = mean_width_estimate(points, 100000, 0);
    const double target = 2.0 / std::sqrt(pi);
    const bool ok = std::fabs(est.mean - target) <= 4.0 * est.std_error;
    return { ok, "estimate " + num(est.mean) + " +- " + num(est.std_error) + " vs " + num(target) };
}

// 10. Identical configurations give byte-identical output at any worker count.
outcome determinism(const execution) {
    const std::vector<std::vector<std::string>> runs{
        { "theta-sweep", "--grid", "13", "--m", "256", "--trials", "20", "--seed", "9", "--format", "json" },
        { "refute", "--m", "512", "--trials", "50", "--theta", "2.5", "--format", "json" },
        { "separate", "--n", "16", "--points-per-class", "5", "--m", "128", "--trials", "6", "--format", "csv" },
        { "depth", "--theta", "3", "--m", "128", "--layers", "3", "--trials", "5", "--format", "json" },
    };
    for (const auto &args : runs) {
        std::string first;
        for (const unsigned workers : { 1U, 3U }) {
            std::vector<std::string> full = args;
            full.insert(full.end(), { "--workers", std::to_string(workers) });
            std::ostringstream out;
            std::ostringstream err;
            const int code = cli::run(full, out, err);
            if (code != cli::exit_ok) {
                return { false, args.front() + " exited with " + std::to_string(code) + ": " + err.str() };
            }
            if (workers == 1) {
                first = out.str();
            } else if (out.str() != first) {
                return { false, args.front() + " output differs between 1 and 3 workers" };
            }
        }
    }
    return { true, std::to_string(runs.size()) + " subcommands byte-identical across worker counts" };
}

struct criterion {
    int id;
    const char *name;
    double time_limit;  // seconds; 0 when unconstrained
    outcome (*check)(execution);
};

}  // namespace

std::vector<criterion_result> run_acceptance(const execution exec) {
    static constexpr criterion criteria[] = {
        { 1, "antipodal refutation (exact)", 5.0, antipodal_identity },
        { 2, "orthogonal-pair discrimination", 10.0, orthogonal_discrimination },
        { 3, "cross-term triple agreement", 0.0, cross_term_triple },
        { 4, "angle law", 0.0, angle_law },
        { 5, "shrinkage envelope", 0.0, envelope_check },
        { 6, "shrinkage monotonicity", 0.0, shrinkage_monotone },
        { 7, "concentration scaling", 60.0, concentration_scaling },
        { 8, "class-separation refutation", 0.0, class_separation },
        { 9, "mean width", 0.0, mean_width },
        { 10, "determinism", 0.0, determinism },
    };
    std::vector<criterion_result> results;
    for (const auto &c : criteria) {
        const auto start = std::chrono::steady_clock::now();
        outcome o{ false, "" };
        try {
            o = c.check(exec);
        } catch (const std::exception &e) {
            o = { false, std::string("threw: ") + e.what() };
        }
        const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        if (c.time_limit > 0.0 && seconds >= c.time_limit) {
            o.passed = false;
            o.detail += "; exceeded " + num(c.time_limit) + " s";
        }
        results.push_back({ c.id, c.name, o.passed, o.detail, seconds });
    }
    return results;
}

std::string format_result(const criterion_result &r) {
    std::ostringstream s;
    s.precision(3);
    s << (r.passed ? "[PASS] " : "[FAIL] ") << r.id << ' ' << r.name << " (" << std::fixed << r.seconds << " s): " << r.detail;
    return s.str();
}

}  // namespace reludist
