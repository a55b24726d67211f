#include "reludist/errors.hpp"
#include "reludist/experiments.hpp"
#include "reludist/geometry.hpp"
#include "reludist/random_layer.hpp"

#include "gtest/gtest.h"

#include <cmath>
#include <numbers>
#include <vector>

using namespace reludist;

namespace {

constexpr double pi = std::numbers::pi;
constexpr double deg = pi / 180.0;

double angle_of(const real_vector &a, const real_vector &b) {
    return angle_between(a, b).theta;
}

}  // namespace

TEST(UnitPair, Construction) {
    const auto p = unit_pair(5, pi / 3.0);
    EXPECT_EQ(p.x.size(), 5U);
    EXPECT_NEAR(angle_of(p.x, p.y), pi / 3.0, 1e-15);
    EXPECT_NEAR(squared_norm(p.y), 1.0, 1e-15);
    EXPECT_THROW((void) unit_pair(1, 0.5), invalid_argument_error);
    EXPECT_THROW((void) unit_pair(4, -0.5), domain_error);
}

TEST(UniformAngleGrid, Endpoints) {
    EXPECT_EQ(uniform_angle_grid(1), std::vector<double>{ 0.0 });
    const auto g = uniform_angle_grid(181);
    ASSERT_EQ(g.size(), 181U);
    EXPECT_EQ(g.front(), 0.0);
    EXPECT_EQ(g.back(), pi);
    EXPECT_NEAR(g[90], pi / 2.0, 1e-15);
}

TEST(ThetaSweep, ZeroAngle) {
    const std::vector<double> grid{ 0.0 };
    const auto records = theta_sweep(grid, 64, 10, 0);
    ASSERT_EQ(records.size(), 1U);
    EXPECT_EQ(records[0].empirical.mean, 0.0);
    EXPECT_EQ(records[0].analytic_corrected, 0.0);
    EXPECT_EQ(records[0].analytic_original, 0.0);
}

TEST(ThetaSweep, AntipodalAngle) {
    const std::vector<double> grid{ pi };
    const auto records = theta_sweep(grid, 1024, 400, 0);
    ASSERT_EQ(records.size(), 1U);
    const auto &r = records[0];
    EXPECT_LE(std::abs(r.empirical.mean - 1.0), 4.0 * r.empirical.std_error);
    EXPECT_DOUBLE_EQ(r.analytic_original, 3.0);
    EXPECT_EQ(r.trials, 400U);
    EXPECT_EQ(r.m, 1024U);
}

TEST(ThetaSweep, FullGridSeparatesClaims) {
    const auto grid = uniform_angle_grid(181);
    const auto records = theta_sweep(grid, 4096, 100, 0);
    ASSERT_EQ(records.size(), 181U);
    double max_corrected = 0.0;
    double min_original = 1e300;
    std::size_t separated = 0;
    for (const auto &r : records) {
        max_corrected = std::max(max_corrected, std::abs(r.empirical.mean - r.analytic_corrected));
        EXPECT_LE(std::abs(r.empirical.mean - r.analytic_corrected), 4.5 * r.empirical.std_error + 1e-15) << r.theta;
        if (r.theta >= pi / 4.0) {
            const double gap = std::abs(r.empirical.mean - r.analytic_original);
            // the two claims differ by 2 psi, which only reaches 0.1 slightly above pi/4
            const double reachable = std::min(0.1, 2.0 * psi_of_angle(r.theta));
            EXPECT_GE(gap, reachable - 4.0 * r.empirical.std_error) << r.theta;
            if (2.0 * psi_of_angle(r.theta) >= 0.1 + 8.0 * r.empirical.std_error) {
                min_original = std::min(min_original, gap);
                ++separated;
            }
        }
    }
    EXPECT_LE(max_corrected, 0.02);
    EXPECT_GE(separated, 130U);
    EXPECT_GE(min_original, 0.1);
}

TEST(ThetaSweep, ClaimGapAtQuarterTurnIsBelowOneTenth) {
    // frozen with mpmath: 2 psi(pi/4)
    EXPECT_NEAR(2.0 * psi_of_angle(pi / 4.0), 0.0966047674852792, 1e-15);
}

TEST(ThetaSweep, EmpiricalMeansIncreaseWithAngle) {
    // shared layers across the grid make neighbouring estimates strongly correlated
    const auto grid = uniform_angle_grid(37);
    const auto records = theta_sweep(grid, 512, 50, 3);
    for (std::size_t k = 1; k < records.size(); ++k) {
        const double noise = 2.0 * std::max(records[k].empirical.std_error, records[k - 1].empirical.std_error);
        EXPECT_GT(records[k].empirical.mean, records[k - 1].empirical.mean - noise) << records[k].theta;
        EXPECT_GT(records[k].analytic_corrected, records[k - 1].analytic_corrected);
    }
    EXPECT_GT(records.back().empirical.mean, records[records.size() / 2].empirical.mean);
    EXPECT_GT(records[records.size() / 2].empirical.mean, records[1].empirical.mean);
}

TEST(ThetaSweep, BoundsBracketCorrected) {
    const auto records = theta_sweep(uniform_angle_grid(91), 16, 2, 0, 4);
    for (const auto &r : records) {
        EXPECT_LE(r.bound_lower, r.analytic_corrected + 1e-15);
        EXPECT_LE(r.analytic_corrected, r.bound_upper);
    }
}

TEST(ThetaSweep, RejectsInvalidGrid) {
    const std::vector<double> grid{ 0.5, 4.0 };
    EXPECT_THROW((void) theta_sweep(grid, 16, 4, 0), domain_error);
}

TEST(ThetaSweep, PureFunctionOfInputs) {
    const auto grid = uniform_angle_grid(7);
    const auto a = theta_sweep(grid, 64, 10, 5, 16, execution{ 1 });
    const auto b = theta_sweep(grid, 64, 10, 5, 16, execution{ 3 });
    for (std::size_t k = 0; k < a.size(); ++k) {
        EXPECT_EQ(a[k].empirical.mean, b[k].empirical.mean);
        EXPECT_EQ(a[k].empirical.std_error, b[k].empirical.std_error);
    }
}

TEST(ConcentrationSweep, WiderLayersDeviateLess) {
    const std::vector<std::size_t> widths{ 64, 4096 };
    const auto records = concentration_sweep(widths, pi / 2.0, 100, 0);
    ASSERT_EQ(records.size(), 2U);
    ASSERT_TRUE(records[0].rms_deviation && records[1].rms_deviation);
    EXPECT_LT(*records[1].rms_deviation, *records[0].rms_deviation);
    EXPECT_GE(*records[0].max_deviation, *records[0].rms_deviation);
}

TEST(ConcentrationSweep, SingleWidthHasNoSlope) {
    const std::vector<std::size_t> widths{ 256 };
    const auto records = concentration_sweep(widths, pi / 2.0, 20, 0);
    ASSERT_EQ(records.size(), 1U);
    EXPECT_FALSE(loglog_slope(records).has_value());
}

TEST(ConcentrationSweep, SlopeNearMinusOneHalf) {
    std::vector<std::size_t> widths;
    for (std::size_t m = 64; m <= 8192; m *= 2) {
        widths.push_back(m);
    }
    const auto records = concentration_sweep(widths, pi / 2.0, 200, 0);
    const auto slope = loglog_slope(records);
    ASSERT_TRUE(slope.has_value());
    EXPECT_GE(*slope, -0.6);
    EXPECT_LE(*slope, -0.4);
}

TEST(ConcentrationSweep, RequiresIncreasingWidths) {
    const std::vector<std::size_t> widths{ 128, 64 };
    EXPECT_THROW((void) concentration_sweep(widths, 1.0, 10, 0), invalid_argument_error);
    const std::vector<std::size_t> repeated{ 64, 64 };
    EXPECT_THROW((void) concentration_sweep(repeated, 1.0, 10, 0), invalid_argument_error);
}

TEST(LoglogSlope, ExactPowerLaw) {
    std::vector<sweep_record> records(4);
    for (std::size_t k = 0; k < 4; ++k) {
        records[k].m = std::size_t{ 1 } << (k + 4);
        records[k].rms_deviation = 3.0 / std::sqrt(static_cast<double>(records[k].m));
    }
    EXPECT_NEAR(*loglog_slope(records), -0.5, 1e-12);
}

TEST(GenerateClasses, TwoClassesInThreeDimensions) {
    class_config cfg;
    cfg.ambient_dim = 3;
    cfg.classes = 2;
    cfg.points_per_class = 10;
    cfg.intra_angle_max = 0.1;
    cfg.inter_angle_min = pi / 2.0;
    cfg.master_seed = 4;
    const auto data = generate_classes(cfg);
    ASSERT_EQ(data.points.size(), 20U);
    ASSERT_EQ(data.centers.size(), 2U);
    EXPECT_GE(angle_of(data.centers[0], data.centers[1]), pi / 2.0 - 1e-12);
    for (std::size_t k = 0; k < data.points.size(); ++k) {
        EXPECT_NEAR(squared_norm(data.points[k]), 1.0, 1e-12);
        EXPECT_LE(angle_of(data.points[k], data.centers[data.labels[k]]), 0.1 + 1e-9);
    }
}

TEST(GenerateClasses, PropertiesOnRandomConfigs) {
    for (std::uint64_t seed = 0; seed < 30; ++seed) {
        class_config cfg;
        cfg.ambient_dim = 2 + seed % 7;
        cfg.classes = 1 + seed % 3;
        cfg.points_per_class = 1 + seed % 5;
        cfg.intra_angle_max = 0.05 + 0.01 * static_cast<double>(seed % 10);
        cfg.inter_angle_min = 0.5 + 0.02 * static_cast<double>(seed);
        cfg.master_seed = seed;
        const auto data = generate_classes(cfg);
        ASSERT_EQ(data.points.size(), cfg.classes * cfg.points_per_class);
        for (std::size_t a = 0; a < data.centers.size(); ++a) {
            for (std::size_t b = a + 1; b < data.centers.size(); ++b) {
                EXPECT_GE(angle_of(data.centers[a], data.centers[b]), cfg.inter_angle_min - 1e-12);
            }
        }
        for (std::size_t i = 0; i < data.points.size(); ++i) {
            EXPECT_LE(angle_of(data.points[i], data.centers[data.labels[i]]), cfg.intra_angle_max + 1e-9);
            for (std::size_t j = i + 1; j < data.points.size(); ++j) {
                if (data.labels[i] == data.labels[j]) {
                    EXPECT_LE(angle_of(data.points[i], data.points[j]), 2.0 * cfg.intra_angle_max + 1e-9);
                }
            }
        }
    }
}

TEST(GenerateClasses, SingleClassIsFeasible) {
    class_config cfg;
    cfg.ambient_dim = 3;
    cfg.classes = 1;
    cfg.points_per_class = 5;
    cfg.intra_angle_max = 0.2;
    cfg.inter_angle_min = pi;
    const auto data = generate_classes(cfg);
    EXPECT_EQ(data.points.size(), 5U);
    EXPECT_EQ(data.centers.size(), 1U);
}

TEST(GenerateClasses, TooManyClassesIsInfeasible) {
    class_config cfg;
    cfg.ambient_dim = 3;
    cfg.classes = 40;
    cfg.points_per_class = 1;
    cfg.intra_angle_max = 0.1;
    cfg.inter_angle_min = pi / 2.0;
    EXPECT_THROW((void) generate_classes(cfg), infeasible_geometry_error);
}

TEST(GenerateClasses, InvalidAngles) {
    class_config cfg;
    cfg.intra_angle_max = 0.5;
    cfg.inter_angle_min = 0.4;
    EXPECT_THROW((void) generate_classes(cfg), invalid_argument_error);
    cfg.intra_angle_max = 0.0;
    EXPECT_THROW((void) generate_classes(cfg), invalid_argument_error);
    cfg.intra_angle_max = 0.1;
    cfg.inter_angle_min = 4.0;
    EXPECT_THROW((void) generate_classes(cfg), invalid_argument_error);
}

TEST(SeparationExperiment, InterPairsShrinkMore) {
    class_config cfg;
    cfg.ambient_dim = 64;
    cfg.classes = 2;
    cfg.points_per_class = 20;
    cfg.intra_angle_max = 15.0 * deg;
    cfg.inter_angle_min = 60.0 * deg;
    const auto report = separation_experiment(cfg, 2048, 1, 50, 0);
    ASSERT_TRUE(report.ratio_inter && report.ratio_intra);
    EXPECT_LT(*report.ratio_inter, *report.ratio_intra - 0.02);
    for (const double r : { *report.ratio_inter, *report.ratio_intra }) {
        EXPECT_GE(r, 0.25 - 0.02);
        EXPECT_LE(r, 0.5 + 0.02);
    }
    EXPECT_EQ(report.intra_pairs, 2U * 190U);
    EXPECT_EQ(report.inter_pairs, 400U);
    EXPECT_GE(*report.pre.min_inter, 0.0);
    EXPECT_LT(*report.post.mean_inter, *report.pre.mean_inter);
}

TEST(SeparationExperiment, SwappedGeometryReversesInequality) {
    // same-label pairs are antipodal, cross-label pairs mix small and large angles
    const real_vector a{ 1.0, 0.0 };
    const real_vector b{ std::cos(0.1), std::sin(0.1) };
    labeled_points data;
    data.points = { a, real_vector{ -a[0], -a[1] }, b, real_vector{ -b[0], -b[1] } };
    data.labels = { 0, 0, 1, 1 };
    data.centers = { a, b };
    const auto report = separation_on(data, 2048, 1, 50, 0);
    ASSERT_TRUE(report.ratio_inter && report.ratio_intra);
    EXPECT_GT(*report.ratio_inter, *report.ratio_intra + 0.02);
    EXPECT_NEAR(*report.ratio_intra, 0.25, 0.02);
}

TEST(SeparationExperiment, DegenerateGroupsAreAbsent) {
    class_config cfg;
    cfg.ambient_dim = 8;
    cfg.classes = 1;
    cfg.points_per_class = 1;
    cfg.intra_angle_max = 0.1;
    cfg.inter_angle_min = 1.0;
    const auto report = separation_experiment(cfg, 64, 1, 5, 0);
    EXPECT_EQ(report.intra_pairs, 0U);
    EXPECT_EQ(report.inter_pairs, 0U);
    EXPECT_FALSE(report.ratio_intra.has_value());
    EXPECT_FALSE(report.ratio_inter.has_value());
    EXPECT_FALSE(report.pre.mean_intra.has_value());
    EXPECT_FALSE(report.post.min_inter.has_value());
}

TEST(SeparationExperiment, OneClassHasNoInterGroup) {
    class_config cfg;
    cfg.ambient_dim = 8;
    cfg.classes = 1;
    cfg.points_per_class = 4;
    cfg.intra_angle_max = 0.3;
    cfg.inter_angle_min = 1.0;
    const auto report = separation_experiment(cfg, 64, 2, 5, 0);
    EXPECT_EQ(report.intra_pairs, 6U);
    EXPECT_TRUE(report.ratio_intra.has_value());
    EXPECT_FALSE(report.ratio_inter.has_value());
    EXPECT_FALSE(report.pre.mean_inter.has_value());
}

TEST(SeparationExperiment, Deterministic) {
    class_config cfg;
    cfg.ambient_dim = 16;
    cfg.classes = 3;
    cfg.points_per_class = 4;
    cfg.intra_angle_max = 0.2;
    cfg.inter_angle_min = 1.0;
    cfg.master_seed = 9;
    const auto a = separation_experiment(cfg, 128, 2, 6, 1, execution{ 1 });
    const auto b = separation_experiment(cfg, 128, 2, 6, 1, execution{ 4 });
    EXPECT_EQ(*a.ratio_inter, *b.ratio_inter);
    EXPECT_EQ(*a.ratio_intra, *b.ratio_intra);
    EXPECT_EQ(*a.post.max_intra, *b.post.max_intra);
}

TEST(AngleMap, CosinesFromAntipodalStart) {
    // frozen with mpmath
    const std::vector<double> expected{ -1.0, 0.0, 0.3183098861837907, 0.4937310902003715, 0.6048257201129445,
                                        0.6809535333557363, 0.7359463506276367 };
    const auto got = angle_map_cosines(pi, 6);
    ASSERT_EQ(got.size(), 7U);
    for (std::size_t k = 0; k < got.size(); ++k) {
        EXPECT_NEAR(got[k], expected[k], 1e-12) << k;
    }
    for (std::size_t k = 1; k < got.size(); ++k) {
        EXPECT_GT(got[k], got[k - 1]);
        EXPECT_LT(got[k], 1.0);
    }
}

TEST(DepthSweep, ZeroLayersIsExactInputCosine) {
    const std::vector<std::size_t> widths{ 32 };
    const auto records = depth_sweep(1.2, widths, 0, 2, 0);
    ASSERT_EQ(records.size(), 1U);
    EXPECT_DOUBLE_EQ(records[0].empirical.mean, std::cos(1.2));
    EXPECT_EQ(records[0].empirical.std_error, 0.0);
    EXPECT_EQ(records[0].layers, 0U);
}

TEST(DepthSweep, OneLayerAntipodal) {
    const std::vector<std::size_t> widths{ 4096 };
    const auto records = depth_sweep(pi, widths, 1, 20, 0);
    ASSERT_EQ(records.size(), 2U);
    EXPECT_NEAR(records[1].analytic_corrected, 0.0, 1e-15);
    EXPECT_NEAR(records[1].empirical.mean, 0.0, 0.02);
    EXPECT_LE(std::abs(records[1].empirical.mean), 4.0 * records[1].empirical.std_error + 1e-12);
}

TEST(DepthSweep, FiveLayersTrackIterates) {
    const std::vector<std::size_t> widths{ 4096 };
    const auto records = depth_sweep(pi, widths, 5, 2, 0);
    ASSERT_EQ(records.size(), 6U);
    for (std::size_t k = 1; k < records.size(); ++k) {
        EXPECT_GT(records[k].analytic_corrected, records[k - 1].analytic_corrected);
        EXPECT_NEAR(records[k].empirical.mean, records[k].analytic_corrected, 0.05) << k;
        EXPECT_LE(records[k].bound_lower, records[k].analytic_corrected);
        EXPECT_LE(records[k].analytic_corrected, records[k].bound_upper);
        EXPECT_TRUE(std::isnan(records[k].analytic_original));
    }
}

TEST(DepthSweep, PerLayerWidths) {
    const std::vector<std::size_t> widths{ 256, 512, 128 };
    const auto records = depth_sweep(pi / 2.0, widths, 3, 4, 0, 8);
    ASSERT_EQ(records.size(), 4U);
    EXPECT_EQ(records[1].m, 256U);
    EXPECT_EQ(records[2].m, 512U);
    EXPECT_EQ(records[3].m, 128U);
    const std::vector<std::size_t> too_few{ 256, 512 };
    EXPECT_THROW((void) depth_sweep(pi / 2.0, too_few, 3, 4, 0), invalid_argument_error);
    const std::vector<std::size_t> none{};
    EXPECT_THROW((void) depth_sweep(pi / 2.0, none, 3, 4, 0), invalid_argument_error);
}
