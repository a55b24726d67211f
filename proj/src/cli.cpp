#include "reludist/cli.hpp"

#include "reludist/acceptance.hpp"
#include "reludist/errors.hpp"
#include "reludist/estimators.hpp"
#include "reludist/experiments.hpp"
#include "reludist/geometry.hpp"

#include "CLI11.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <ostream>
#include <set>

namespace reludist::cli {

namespace {

using ojson = nlohmann::ordered_json;

constexpr double degrees = std::numbers::pi / 180.0;

std::string describe(const std::string &subcommand) {
    static const std::map<std::string, std::string> text{
        { "psi", "psi(theta) for one angle" },
        { "expect", "closed-form expected squared output distance and its envelope" },
        { "mc", "Monte Carlo squared output distance for a pair at --theta" },
        { "refute", "z-score test of the two rival expectations" },
        { "theta-sweep", "squared distance over a grid of angles" },
        { "concentration", "deviation from the expectation versus layer width" },
        { "angle", "Monte Carlo output-angle cosine for a pair at --theta" },
        { "separate", "pairwise shrinkage on synthetic angular classes" },
        { "depth", "output-angle cosine through a stack of layers" },
        { "meanwidth", "Gaussian mean width of a finite point set" },
        { "selftest", "run every acceptance check" },
    };
    return text.at(subcommand);
}

[[noreturn]] void fail(const std::string &flag, const std::string &message) {
    throw usage_error(flag + ": " + message);
}

template <typename T>
void read_unsigned(const nlohmann::json &j, const char *key, const char *flag, T &target) {
    if (!j.contains(key)) {
        return;
    }
    if (!j.at(key).is_number_unsigned()) {
        fail(flag, "expected a nonnegative integer");
    }
    target = j.at(key).get<T>();
}

void read_double(const nlohmann::json &j, const char *key, const char *flag, double &target) {
    if (!j.contains(key)) {
        return;
    }
    if (!j.at(key).is_number()) {
        fail(flag, "expected a number");
    }
    target = j.at(key).get<double>();
}

void read_string(const nlohmann::json &j, const char *key, const char *flag, std::string &target) {
    if (!j.contains(key)) {
        return;
    }
    if (!j.at(key).is_string()) {
        fail(flag, "expected a string");
    }
    target = j.at(key).get<std::string>();
}

void read_size_list(const nlohmann::json &j, const char *key, const char *flag, std::vector<std::size_t> &target) {
    if (!j.contains(key)) {
        return;
    }
    const auto &v = j.at(key);
    if (!v.is_array() || !std::all_of(v.begin(), v.end(), [](const auto &e) { return e.is_number_unsigned(); })) {
        fail(flag, "expected an array of nonnegative integers");
    }
    target = v.get<std::vector<std::size_t>>();
}

void read_points(const nlohmann::json &j, std::vector<std::vector<double>> &target) {
    if (!j.contains("points")) {
        return;
    }
    const auto &v = j.at("points");
    const auto numeric_row = [](const auto &r) {
        return r.is_array() && std::all_of(r.begin(), r.end(), [](const auto &e) { return e.is_number(); });
    };
    if (!v.is_array() || !std::all_of(v.begin(), v.end(), numeric_row)) {
        fail("--points", "expected an array of numeric arrays");
    }
    target = v.get<std::vector<std::vector<double>>>();
}

double parse_double(const std::string &text, const std::string &flag) {
    double value = 0.0;
    const char *first = text.data();
    const char *last = text.data() + text.size();
    while (first != last && *first == ' ') {
        ++first;
    }
    const auto res = std::from_chars(first, last, value);
    if (res.ec != std::errc{} || res.ptr != last) {
        fail(flag, "'" + text + "' is not a number");
    }
    return value;
}

// "1,0;0,1" -> {{1, 0}, {0, 1}}
std::vector<std::vector<double>> parse_points(const std::string &text) {
    std::vector<std::vector<double>> points;
    std::size_t start = 0;
    while (start <= text.size()) {
        const std::size_t end = std::min(text.find(';', start), text.size());
        std::vector<double> p;
        std::size_t s = start;
        while (s <= end) {
            const std::size_t e = std::min(text.find(',', s), end);
            p.push_back(parse_double(text.substr(s, e - s), "--points"));
            s = e + 1;
        }
        points.push_back(std::move(p));
        start = end + 1;
    }
    return points;
}

real_vector scaled(real_vector v, const double factor) {
    for (double &c : v) {
        c *= factor;
    }
    return v;
}

std::string verdict_name(const verdict v) {
    return std::string(to_string(v));
}

}  // namespace

nlohmann::ordered_json to_json(const run_config &c) {
    ojson j = ojson::object();
    j["subcommand"] = c.subcommand;
    j["n"] = c.n;
    j["m"] = c.m;
    j["theta"] = c.theta;
    j["trials"] = c.trials;
    j["layers"] = c.layers;
    j["grid"] = c.grid;
    j["seed"] = c.seed;
    j["out"] = c.out;
    j["format"] = c.format;
    j["z_accept"] = c.z_accept;
    j["z_reject"] = c.z_reject;
    j["norm_x"] = c.norm_x;
    j["norm_y"] = c.norm_y;
    j["claim"] = c.claim;
    j["m_list"] = c.m_list;
    j["widths"] = c.widths;
    j["classes"] = c.classes;
    j["points_per_class"] = c.points_per_class;
    j["intra_max"] = c.intra_max;
    j["inter_min"] = c.inter_min;
    j["g_samples"] = c.g_samples;
    j["points"] = c.points;
    return j;
}

run_config from_json(const nlohmann::json &j, run_config base) {
    static const std::set<std::string> known{ "subcommand", "n",         "m",         "theta",   "trials",           "layers",
                                              "grid",       "seed",      "out",       "format",  "z_accept",         "z_reject",
                                              "norm_x",     "norm_y",    "claim",     "m_list",  "widths",           "classes",
                                              "points_per_class",        "intra_max", "inter_min", "g_samples",      "points" };
    if (!j.is_object()) {
        fail("--config", "configuration must be a JSON object");
    }
    for (const auto &[key, value] : j.items()) {
        if (known.count(key) == 0) {
            fail("--config", "unknown configuration key '" + key + "'");
        }
    }
    read_string(j, "subcommand", "subcommand", base.subcommand);
    read_unsigned(j, "n", "--n", base.n);
    read_unsigned(j, "m", "--m", base.m);
    read_double(j, "theta", "--theta", base.theta);
    read_unsigned(j, "trials", "--trials", base.trials);
    read_unsigned(j, "layers", "--layers", base.layers);
    read_unsigned(j, "grid", "--grid", base.grid);
    read_unsigned(j, "seed", "--seed", base.seed);
    read_string(j, "out", "--out", base.out);
    read_string(j, "format", "--format", base.format);
    read_double(j, "z_accept", "--z-accept", base.z_accept);
    read_double(j, "z_reject", "--z-reject", base.z_reject);
    read_double(j, "norm_x", "--norm-x", base.norm_x);
    read_double(j, "norm_y", "--norm-y", base.norm_y);
    read_string(j, "claim", "--claim", base.claim);
    read_size_list(j, "m_list", "--m-list", base.m_list);
    read_size_list(j, "widths", "--widths", base.widths);
    read_unsigned(j, "classes", "--classes", base.classes);
    read_unsigned(j, "points_per_class", "--points-per-class", base.points_per_class);
    read_double(j, "intra_max", "--intra-max", base.intra_max);
    read_double(j, "inter_min", "--inter-min", base.inter_min);
    read_unsigned(j, "g_samples", "--g-samples", base.g_samples);
    read_points(j, base.points);
    return base;
}

void validate(const run_config &c) {
    if (std::find(subcommands.begin(), subcommands.end(), c.subcommand) == subcommands.end()) {
        fail("subcommand", "unknown subcommand '" + c.subcommand + "'");
    }
    if (c.format != "csv" && c.format != "json") {
        fail("--format", "must be csv or json");
    }
    if (c.claim != "corrected" && c.claim != "original" && c.claim != "both") {
        fail("--claim", "must be corrected, original or both");
    }
    if (c.n < 2) {
        fail("--n", "must be >= 2");
    }
    if (c.m < 1) {
        fail("--m", "must be >= 1");
    }
    if (c.trials < 2) {
        fail("--trials", "must be >= 2");
    }
    if (c.layers < 1) {
        fail("--layers", "must be >= 1");
    }
    if (c.grid < 1) {
        fail("--grid", "must be >= 1");
    }
    if (!(c.theta >= -angle_slack && c.theta <= std::numbers::pi + angle_slack)) {
        fail("--theta", "must lie in [0, pi] radians");
    }
    if (!(c.norm_x >= 0.0 && std::isfinite(c.norm_x))) {
        fail("--norm-x", "must be finite and >= 0");
    }
    if (!(c.norm_y >= 0.0 && std::isfinite(c.norm_y))) {
        fail("--norm-y", "must be finite and >= 0");
    }
    if (!(c.z_accept > 0.0 && std::isfinite(c.z_accept))) {
        fail("--z-accept", "must be a positive number");
    }
    if (!(c.z_reject >= c.z_accept && std::isfinite(c.z_reject))) {
        fail("--z-reject", "must be finite and >= --z-accept");
    }
    if (c.m_list.empty()) {
        fail("--m-list", "must not be empty");
    }
    for (std::size_t k = 0; k < c.m_list.size(); ++k) {
        if (c.m_list[k] < 1 || (k > 0 && c.m_list[k] <= c.m_list[k - 1])) {
            fail("--m-list", "must be strictly increasing positive integers");
        }
    }
    if (std::any_of(c.widths.begin(), c.widths.end(), [](const std::size_t w) { return w < 1; })) {
        fail("--widths", "must be positive integers");
    }
    if (c.widths.size() > 1 && c.widths.size() < c.layers) {
        fail("--widths", "needs one width, or one width per layer (" + std::to_string(c.layers) + ")");
    }
    if (c.classes < 1) {
        fail("--classes", "must be >= 1");
    }
    if (c.points_per_class < 1) {
        fail("--points-per-class", "must be >= 1");
    }
    if (!(c.intra_max > 0.0)) {
        fail("--intra-max", "must be > 0");
    }
    if (!(c.inter_min > c.intra_max && c.inter_min <= std::numbers::pi)) {
        fail("--inter-min", "must exceed --intra-max and be <= pi");
    }
    if (c.g_samples < 2) {
        fail("--g-samples", "must be >= 2");
    }
    if (!c.points.empty()) {
        if (c.points.size() < 2) {
            fail("--points", "needs at least 2 points");
        }
        const std::size_t dim = c.points.front().size();
        for (const auto &p : c.points) {
            if (p.size() != dim || dim == 0) {
                fail("--points", "all points need the same nonzero dimension");
            }
            if (!std::all_of(p.begin(), p.end(), [](const double v) { return std::isfinite(v); })) {
                fail("--points", "coordinates must be finite");
            }
        }
    }
}

run_result execute(const run_config &c, const execution exec) {
    validate(c);
    run_result result;
    report_document &doc = result.report;
    doc.config = to_json(c);
    const double theta = checked_angle(c.theta);

    if (c.subcommand == "psi") {
        doc.columns = { "theta", "psi" };
        doc.records.push_back(row{ { "theta", theta }, { "psi", psi_of_angle(theta) } });
    } else if (c.subcommand == "expect") {
        const pair_geometry g = geometry_from_angle(theta, c.norm_x, c.norm_y);
        const envelope b = shrinkage_bounds(g);
        doc.columns = { "theta", "norm_x", "norm_y", "sq_dist", "psi" };
        row r{ { "theta", theta }, { "norm_x", c.norm_x }, { "norm_y", c.norm_y }, { "sq_dist", g.sq_dist }, { "psi", g.psi } };
        if (c.claim != "original") {
            doc.columns.emplace_back("analytic_corrected");
            r["analytic_corrected"] = expected_sq_dist(g, claim::corrected).value;
        }
        if (c.claim != "corrected") {
            doc.columns.emplace_back("analytic_original");
            r["analytic_original"] = expected_sq_dist(g, claim::original).value;
        }
        doc.columns.emplace_back("bound_lower");
        doc.columns.emplace_back("bound_upper");
        r["bound_lower"] = b.lower;
        r["bound_upper"] = b.upper;
        doc.records.push_back(std::move(r));
    } else if (c.subcommand == "mc" || c.subcommand == "refute") {
        const vector_pair unit = unit_pair(c.n, theta);
        const real_vector x = scaled(unit.x, c.norm_x);
        const real_vector y = scaled(unit.y, c.norm_y);
        row r{ { "theta", theta }, { "n", c.n }, { "m", c.m }, { "trials", c.trials }, { "norm_x", c.norm_x }, { "norm_y", c.norm_y } };
        doc.columns = { "theta", "n", "m", "trials", "norm_x", "norm_y", "mc_mean", "mc_stderr", "analytic_corrected",
                        "analytic_original" };
        if (c.subcommand == "mc") {
            const moment_estimate est = mc_sq_dist(x, y, c.m, c.trials, c.seed, exec);
            const pair_geometry g = angle_between(x, y);
            const envelope b = shrinkage_bounds(g);
            r["mc_mean"] = est.mean;
            r["mc_stderr"] = est.std_error;
            r["analytic_corrected"] = expected_sq_dist(g, claim::corrected).value;
            r["analytic_original"] = expected_sq_dist(g, claim::original).value;
            r["bound_lower"] = b.lower;
            r["bound_upper"] = b.upper;
            doc.columns.emplace_back("bound_lower");
            doc.columns.emplace_back("bound_upper");
        } else {
            const zscore_verdict v = refutation_test(x, y, c.m, c.trials, c.seed, { c.z_accept, c.z_reject }, exec);
            r["mc_mean"] = v.estimate.mean;
            r["mc_stderr"] = v.estimate.std_error;
            r["analytic_corrected"] = v.corrected;
            r["analytic_original"] = v.original;
            r["z_corrected"] = v.z_corrected;
            r["z_original"] = v.z_original;
            r["verdict"] = verdict_name(v.outcome);
            doc.columns.insert(doc.columns.end(), { "z_corrected", "z_original", "verdict" });
            doc.verdict = verdict_name(v.outcome);
            if (v.outcome != verdict::supports_corrected) {
                result.exit_code = exit_refutation_failed;
            }
        }
        doc.records.push_back(std::move(r));
    } else if (c.subcommand == "theta-sweep") {
        const std::vector<double> grid = c.grid == 1 ? std::vector<double>{ theta } : uniform_angle_grid(c.grid);
        doc.columns = sweep_columns(sweep_kind::theta);
        for (const auto &rec : theta_sweep(grid, c.m, c.trials, c.seed, c.n, exec)) {
            doc.records.push_back(to_row(rec));
        }
    } else if (c.subcommand == "concentration") {
        const auto records = concentration_sweep(c.m_list, theta, c.trials, c.seed, c.n, exec);
        doc.columns = sweep_columns(sweep_kind::concentration);
        for (const auto &rec : records) {
            doc.records.push_back(to_row(rec));
        }
        const auto slope = loglog_slope(records);
        doc.summary = ojson::object();
        doc.summary["slope"] = slope ? ojson(*slope) : ojson(nullptr);
    } else if (c.subcommand == "angle") {
        const vector_pair pair = unit_pair(c.n, theta);
        const output_cos_estimate est = mc_output_cos(pair.x, pair.y, c.m, c.trials, c.seed, exec);
        doc.columns = { "theta", "n", "m", "trials", "mc_mean", "mc_stderr", "predicted_cos", "degenerate_trials" };
        doc.records.push_back(row{ { "theta", theta },
                                   { "n", c.n },
                                   { "m", c.m },
                                   { "trials", est.estimate.trials },
                                   { "mc_mean", est.estimate.mean },
                                   { "mc_stderr", est.estimate.std_error },
                                   { "predicted_cos", expected_output_cos(theta) },
                                   { "degenerate_trials", est.degenerate_trials } });
    } else if (c.subcommand == "separate") {
        const class_config cfg{ c.n, c.classes, c.points_per_class, c.intra_max, c.inter_min, c.seed };
        doc.columns = separation_columns();
        doc.records.push_back(to_row(separation_experiment(cfg, c.m, c.layers, c.trials, c.seed, exec)));
    } else if (c.subcommand == "depth") {
        const std::vector<std::size_t> widths = c.widths.empty() ? std::vector<std::size_t>{ c.m } : c.widths;
        doc.columns = sweep_columns(sweep_kind::depth);
        for (const auto &rec : depth_sweep(theta, widths, c.layers, c.trials, c.seed, c.n, exec)) {
            doc.records.push_back(to_row(rec));
        }
    } else if (c.subcommand == "meanwidth") {
        std::vector<real_vector> points = c.points;
        if (points.empty()) {
            points.assign(2, real_vector(c.n, 0.0));
            points[0][0] = 1.0;
            points[1][1] = 1.0;
        }
        const moment_estimate est = mean_width_estimate(points, c.g_samples, c.seed);
        doc.columns = { "points", "dim", "g_samples", "mean_width", "stderr" };
        doc.records.push_back(row{ { "points", points.size() },
                                   { "dim", points.front().size() },
                                   { "g_samples", est.trials },
                                   { "mean_width", est.mean },
                                   { "stderr", est.std_error } });
    } else if (c.subcommand == "selftest") {
        doc.columns = { "id", "name", "passed", "seconds", "detail" };
        bool all_passed = true;
        for (const auto &res : run_acceptance(exec)) {
            all_passed = all_passed && res.passed;
            doc.records.push_back(row{ { "id", res.id },
                                       { "name", res.name },
                                       { "passed", res.passed },
                                       { "seconds", res.seconds },
                                       { "detail", res.detail } });
        }
        if (!all_passed) {
            result.exit_code = exit_runtime;
        }
    }
    return result;
}

int run(const std::vector<std::string> &args, std::ostream &out, std::ostream &err) {
    CLI::App app{ "Distance and angle distortion of random Gaussian ReLU layers" };
    app.require_subcommand(1, 1);

    run_config flags;
    std::string config_path;
    std::string points_text;
    bool deg = false;
    unsigned workers = 0;
    std::vector<std::pair<CLI::Option *, std::function<void(run_config &)>>> setters;
    const auto bind = [&](const std::string &name, auto member, const std::string &help) {
        CLI::Option *opt = app.add_option(name, flags.*member, help);
        setters.emplace_back(opt, [&flags, member](run_config &target) { target.*member = flags.*member; });
        return opt;
    };

    bind("--n", &run_config::n, "ambient dimension of the input pair (default 64)");
    bind("--m", &run_config::m, "layer width (default 1024)");
    CLI::Option *theta_opt = bind("--theta", &run_config::theta, "pair angle, radians unless --deg (default pi/2)");
    bind("--trials", &run_config::trials, "Monte Carlo trials (default 400)");
    bind("--layers", &run_config::layers, "number of layers for separate/depth (default 1)");
    bind("--grid", &run_config::grid, "points of the [0, pi] grid for theta-sweep (default 181)");
    bind("--seed", &run_config::seed, "master seed (default 0)");
    bind("--out", &run_config::out, "output file (default standard output)");
    bind("--format", &run_config::format, "csv or json (default csv)");
    bind("--z-accept", &run_config::z_accept, "max |z| of the supported hypothesis (default 4)");
    bind("--z-reject", &run_config::z_reject, "min |z| of the rejected hypothesis (default 10)");
    bind("--norm-x", &run_config::norm_x, "norm of the first vector (default 1)");
    bind("--norm-y", &run_config::norm_y, "norm of the second vector (default 1)");
    bind("--claim", &run_config::claim, "corrected, original or both (default both)");
    bind("--m-list", &run_config::m_list, "layer widths for concentration")->delimiter(',');
    bind("--widths", &run_config::widths, "layer widths for depth (default m)")->delimiter(',');
    bind("--classes", &run_config::classes, "number of classes (default 2)");
    bind("--points-per-class", &run_config::points_per_class, "points per class (default 20)");
    CLI::Option *intra_opt = bind("--intra-max", &run_config::intra_max, "max point-to-center angle (default 15 deg)");
    CLI::Option *inter_opt = bind("--inter-min", &run_config::inter_min, "min center-to-center angle (default 60 deg)");
    bind("--g-samples", &run_config::g_samples, "Gaussian samples for meanwidth (default 100000)");
    CLI::Option *points_opt = app.add_option("--points", points_text, "meanwidth point set, e.g. \"1,0;0,1\"");
    app.add_flag("--deg", deg, "read --theta, --intra-max and --inter-min in degrees");
    app.add_option("--config", config_path, "JSON file with configuration keys; flags take precedence");
    app.add_option("--workers", workers, "worker threads (default: hardware concurrency)");

    for (const auto &name : subcommands) {
        app.add_subcommand(name, describe(name))->fallthrough();
    }

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(std::move(reversed));
    } catch (const CLI::CallForHelp &) {
        out << app.help();
        return exit_ok;
    } catch (const CLI::ParseError &e) {
        err << "error: " << e.what() << '\n';
        return exit_validation;
    }

    run_config config;
    try {
        if (!config_path.empty()) {
            std::ifstream in(config_path);
            if (!in) {
                fail("--config", "cannot open '" + config_path + "'");
            }
            nlohmann::json parsed;
            try {
                parsed = nlohmann::json::parse(in);
            } catch (const nlohmann::json::exception &e) {
                fail("--config", std::string("invalid JSON: ") + e.what());
            }
            config = from_json(parsed, config);
        }
        if (deg) {
            for (CLI::Option *opt : { theta_opt, intra_opt, inter_opt }) {
                if (opt->count() > 0) {
                    if (opt == theta_opt) {
                        flags.theta *= degrees;
                    } else if (opt == intra_opt) {
                        flags.intra_max *= degrees;
                    } else {
                        flags.inter_min *= degrees;
                    }
                }
            }
        }
        for (auto &[opt, set] : setters) {
            if (opt->count() > 0) {
                set(config);
            }
        }
        if (points_opt->count() > 0) {
            config.points = parse_points(points_text);
        }
        config.subcommand = app.get_subcommands().front()->get_name();
        validate(config);
    } catch (const usage_error &e) {
        err << "error: " << e.what() << '\n';
        return exit_validation;
    }

    run_result result;
    try {
        result = execute(config, execution{ workers });
    } catch (const hypotheses_too_close_error &e) {
        err << "error: " << e.what() << '\n';
        return exit_runtime;
    } catch (const usage_error &e) {
        err << "error: " << e.what() << '\n';
        return exit_validation;
    } catch (const std::exception &e) {
        err << "error: " << e.what() << '\n';
        return exit_runtime;
    }

    const std::string payload = config.format == "json" ? emit_json(result.report) : emit_csv(result.report);
    if (config.out.empty()) {
        out << payload;
    } else {
        std::ofstream file(config.out, std::ios::binary);
        if (!(file << payload)) {
            err << "error: cannot write '" << config.out << "'\n";
            return exit_runtime;
        }
    }
    if (result.report.verdict) {
        err << "verdict: " << *result.report.verdict << '\n';
    }
    return result.exit_code;
}

}  // namespace reludist::cli
