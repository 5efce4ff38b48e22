#include "peerimex/error.hpp"
#include "peerimex/optimizer.hpp"
#include "peerimex/tableau_io.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>

using namespace peerimex;

TEST(Parameters, RowWiseMapping) {
    EXPECT_EQ(parameter_count(2), 1u);
    EXPECT_EQ(parameter_count(4), 6u);
    const std::vector<double> p = {1, 2, 3, 4, 5, 6};
    const Matrix s2 = s2_from_parameters(4, p);
    EXPECT_EQ(s2(1, 0), 1.0);
    EXPECT_EQ(s2(2, 0), 2.0);
    EXPECT_EQ(s2(2, 1), 3.0);
    EXPECT_EQ(s2(3, 0), 4.0);
    EXPECT_EQ(s2(3, 2), 6.0);
    EXPECT_TRUE(is_strictly_lower(s2));
    EXPECT_EQ(parameters_from_s2(s2), p);
    try {
        (void)s2_from_parameters(3, {1.0, 2.0});
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::invalid_argument);
    }
}

TEST(Parameters, InitialPointIsRecentValueExtrapolation) {
    const auto base = base_of(bdf_to_peer(2), 90.0);
    const auto p0 = initial_parameters(base);
    ASSERT_EQ(p0.size(), 1u);
    EXPECT_NEAR(p0[0], 2.0, 1e-14);
    // mu = 2 recovers IMEX-BDF2, so c0 is its c_ex
    EXPECT_NEAR(reference_constant_c0(base), error_constants(bdf_to_peer(2)).extrapolation, 1e-14);
    EXPECT_NEAR(reference_constant_c0(base), std::sqrt(58.0) / 36.0, 1e-14);
}

TEST(Objective, ZeroPenaltyAtStart) {
    for (int s = 2; s <= 4; ++s) {
        const auto base = base_of(bdf_to_peer(s));
        Objective obj(base, ObjectiveOptions{.n_rays = 32});
        const auto b = obj.evaluate(initial_parameters(base));
        EXPECT_LT(std::abs(b.c_ex - b.c0), 1e-13) << s;
        EXPECT_EQ(b.penalty, 0.0) << s;
        EXPECT_DOUBLE_EQ(b.value, -b.area);
        EXPECT_DOUBLE_EQ(obj.weight(), 1.5 * std::pow(10.0, s));
    }
}

TEST(Objective, CachesEvaluations) {
    const auto base = base_of(bdf_to_peer(2), 90.0);
    Objective obj(base, ObjectiveOptions{.n_rays = 32});
    const auto a = obj.evaluate({1.5});
    const auto b = obj.evaluate({1.5 + 1e-13});
    EXPECT_EQ(obj.cache_hits(), 1u);
    EXPECT_EQ(a.value, b.value);
    (void)obj.evaluate({1.6});
    EXPECT_EQ(obj.cache_hits(), 1u);
}

TEST(Objective, BreakdownAddsUp) {
    const auto base = base_of(bdf_to_peer(2), 90.0);
    Objective obj(base, ObjectiveOptions{.n_rays = 32});
    const auto b = obj.evaluate({1.2});
    EXPECT_NEAR(b.penalty, obj.weight() * std::abs(b.c_ex - b.c0), 1e-12);
    EXPECT_NEAR(b.value, -b.area + b.penalty, 1e-12);
    EXPECT_GT(b.area, 0.0);
}

TEST(Optimize, NotWorseThanStart) {
    const auto base = base_of(bdf_to_peer(2), 90.0);
    OptimizeOptions o;
    o.objective.n_rays = 40;
    o.final_rays = 40;
    int seen = 0;
    o.on_iteration = [&](const IterationRecord&) { ++seen; };
    const auto r = optimize_s2(base, o);
    EXPECT_LE(r.search.value, r.start.value);
    EXPECT_GT(seen, 0);
    EXPECT_EQ(r.tableau.stages(), 2);
    EXPECT_NEAR(r.tableau.extrapolation_curr()(1, 0), r.p[0], 0.0);
}

TEST(Optimize, LogFormat) {
    EXPECT_EQ(iteration_log_header(), "iter,value,area,c_ex,penalty");
    IterationRecord rec;
    rec.iteration = 3;
    rec.breakdown.value = -1.0;
    const auto line = iteration_log_line(rec);
    EXPECT_EQ(line.rfind("3,", 0), 0u);
    EXPECT_EQ(std::count(line.begin(), line.end(), ','), 4);
}

TEST(Optimize, LoadBaseWithAngle) {
    const auto path = std::filesystem::temp_directory_path() / "peerimex_base_test.json";
    {
        std::ofstream f(path);
        f << R"({"name":"b2","s":2,"c":[0.5,1],"P":[[-0.3333333333333333,1.3333333333333333],)"
             R"([-0.4444444444444444,1.4444444444444444]],"R":[[0.3333333333333333,0],)"
             R"([0.4444444444444444,0.3333333333333333]],"alpha":88.5})";
    }
    const auto base = load_base(path);
    EXPECT_EQ(base.stages(), 2);
    EXPECT_DOUBLE_EQ(base.alpha_deg, 88.5);
    std::filesystem::remove(path);
}
