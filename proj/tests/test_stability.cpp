#include "peerimex/error.hpp"
#include "peerimex/stability.hpp"
#include "peerimex/tableau_io.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

using namespace peerimex;

TEST(StabilityMatrix, OriginGivesP) {
    for (const auto& name : builtin_names()) {
        const auto t = builtin(name);
        const ComplexMatrix m = stability_matrix(t, {}, {});
        EXPECT_LE((m - t.propagation().cast<Complex>()).cwiseAbs().maxCoeff(), 1e-14) << name;
    }
}

TEST(StabilityMatrix, EulerScalar) {
    const auto t = builtin("imex-euler");
    std::mt19937 rng(3);
    std::uniform_real_distribution<double> d(-2.0, 2.0);
    for (int k = 0; k < 20; ++k) {
        const Complex z0{d(rng), d(rng)}, z1{d(rng) - 2.5, d(rng)};
        EXPECT_LE(std::abs(stability_matrix(t, z0, z1)(0, 0) - (1.0 + z0) / (1.0 - z1)), 1e-14);
    }
    EXPECT_EQ(std::abs(stability_matrix(t, -1.0, -1.0)(0, 0)), 0.0);
}

TEST(StabilityMatrix, SingularPoint) {
    try {
        (void)stability_matrix(builtin("imex-euler"), 0.0, 1.0);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::singular_at_point);
    }
    EXPECT_TRUE(std::isinf(amplification(builtin("imex-euler"), 0.0, 1.0)));
    EXPECT_FALSE(is_stable(builtin("imex-euler"), 0.0, 1.0).stable);
}

TEST(StabilityMatrix, ImplicitPartDampsAtInfinity) {
    EXPECT_LT(amplification(bdf_to_peer(2), 0.0, -1e8), 1e-6);
}

TEST(IsStable, Examples) {
    const auto t = builtin("imex-euler");
    const auto origin = is_stable(bdf_to_peer(3), 0.0, 0.0);
    EXPECT_FALSE(origin.stable);
    EXPECT_TRUE(origin.on_boundary);
    EXPECT_NEAR(origin.rho, 1.0, 1e-12);
    EXPECT_TRUE(is_stable(t, -1.0, 0.0).stable);
    EXPECT_NEAR(is_stable(t, -1.0, 0.0).rho, 0.0, 1e-15);
    EXPECT_FALSE(is_stable(t, -2.01, 0.0).stable);
}

TEST(BoundaryPoint, EulerCircle) {
    const auto t = builtin("imex-euler");
    const Complex z = boundary_point(t, 45.0, 180.0, 0.0);
    EXPECT_NEAR(z.real(), -2.0, 1e-4);
    EXPECT_NEAR(z.imag(), 0.0, 1e-12);
    for (double ang : {120.0, 150.0, 200.0, 250.0}) {
        const Complex w = boundary_point(t, 0.0, ang, 0.0);
        EXPECT_NEAR(std::abs(1.0 + w), 1.0, 1e-4) << ang;
    }
}

TEST(BoundaryPoint, WedgeEdge) {
    EXPECT_EQ(wedge_z1(90.0, 0.0), Complex(0.0, 0.0));
    EXPECT_EQ(wedge_z1(0.0, 3.0), Complex(0.0, 0.0));
    const Complex z = wedge_z1(45.0, -2.0);
    EXPECT_NEAR(z.real(), -2.0, 1e-14);
    EXPECT_NEAR(z.imag(), -2.0, 1e-14);
}

TEST(BoundaryPoint, BdfTwoRealExtent) {
    EXPECT_NEAR(real_axis_extent(bdf_to_peer(2), 90.0), -8.0 / 3.0, 5e-4);
    EXPECT_NEAR(real_axis_extent(builtin("imex-peer2"), 0.0), -5.22, 0.01);
}

TEST(BoundaryPoint, NoBoundaryOnRay) {
    // the boundary at radius 2 lies outside the allowed bracket
    const auto t = builtin("imex-euler");
    RayOptions o;
    o.max_radius = 1.5;
    o.bracket_radius = 1.0;
    try {
        (void)ray_boundary_radius(t, 180.0, Complex{}, o);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::no_boundary_on_ray);
    }
}

TEST(WedgeRegion, EulerDisk) {
    const auto p = wedge_region(builtin("imex-euler"), 0.0);
    EXPECT_FALSE(p.partial);
    EXPECT_NEAR(p.area, std::numbers::pi, 0.01 * std::numbers::pi);
    EXPECT_NEAR(p.x_max, -2.0, 0.01);
    for (const auto& v : p.vertices) EXPECT_NEAR(std::abs(1.0 + v), 1.0, 1e-4);
}

TEST(WedgeRegion, ConjugateSymmetry) {
    const auto p = wedge_region(builtin("imex-peer2"), 90.0, RegionOptions{.n_rays = 60});
    const auto n = p.vertices.size();
    for (std::size_t k = 0; k < n; ++k) {
        const Complex a = p.vertices[k], b = std::conj(p.vertices[n - 1 - k]);
        EXPECT_LE(std::abs(a - b), 1e-3) << k;
    }
}

TEST(WedgeRegion, VerticesOnBoundary) {
    const auto t = bdf_to_peer(3);
    const double beta = 60.0;
    const auto p = wedge_region(t, beta, RegionOptions{.n_rays = 40});
    for (std::size_t k = 0; k < p.vertices.size(); ++k) {
        const double rho = amplification(t, p.vertices[k], wedge_z1(beta, p.minimizing_y[k]));
        EXPECT_LE(std::abs(rho - 1.0), 2e-5) << "ray " << p.ray_angles_deg[k];
    }
}

TEST(WedgeRegion, AreaMonotoneInBeta) {
    const auto t = bdf_to_peer(3);
    const double alpha = implicit_angle(t);
    double prev = wedge_region(t, 0.0, RegionOptions{.n_rays = 60}).area;
    for (double beta : {15.0, 30.0, 45.0, 60.0, 75.0, alpha}) {
        const double a = wedge_region(t, beta, RegionOptions{.n_rays = 60}).area;
        EXPECT_LE(a, prev + 1e-3) << beta;
        prev = a;
    }
}

TEST(WedgeRegion, RejectsFewRays) {
    try {
        (void)wedge_region(builtin("imex-euler"), 0.0, RegionOptions{.n_rays = 8});
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::invalid_argument);
    }
}

TEST(WedgeRegion, ThreadsGiveSameResult) {
    const auto t = builtin("imex-peer2");
    const auto a = wedge_region(t, 45.0, RegionOptions{.n_rays = 40, .threads = 1});
    const auto b = wedge_region(t, 45.0, RegionOptions{.n_rays = 40, .threads = 3});
    ASSERT_EQ(a.vertices.size(), b.vertices.size());
    for (std::size_t k = 0; k < a.vertices.size(); ++k) EXPECT_EQ(a.vertices[k], b.vertices[k]);
    EXPECT_EQ(a.area, b.area);
}

TEST(BoundaryLocus, EigenvaluesSolveCharacteristicEquation) {
    std::mt19937 rng(11);
    std::uniform_real_distribution<double> d(0.0, 1.0);
    for (const auto& name : {"imex-bdf2", "imex-bdf4", "imex-peer2"}) {
        const auto t = builtin(name);
        for (int k = 0; k < 10; ++k) {
            const Complex w = std::polar(1.0, 2.0 * std::numbers::pi * d(rng));
            const Complex z1 = wedge_z1(60.0, 4.0 * d(rng) - 2.0);
            for (const auto& z0 : eigenvalues(boundary_locus_matrix(t, w, z1))) {
                const ComplexMatrix m = stability_matrix(t, z0, z1);
                const ComplexMatrix a = w * ComplexMatrix::Identity(t.stages(), t.stages()) - m;
                EXPECT_LT(std::abs(a.determinant()), 1e-8) << name;
            }
        }
    }
}

TEST(Shoelace, Square) {
    EXPECT_DOUBLE_EQ(shoelace_area({{0, 0}, {1, 0}, {1, 1}, {0, 1}}), 1.0);
    EXPECT_DOUBLE_EQ(shoelace_area({{0, 0}, {0, 1}, {1, 1}, {1, 0}}), 1.0);
    EXPECT_DOUBLE_EQ(shoelace_area({}), 0.0);
}

TEST(ImplicitAngle, BdfTable) {
    EXPECT_NEAR(implicit_angle(bdf_to_peer(2)), 90.0, 0.05);
    EXPECT_NEAR(implicit_angle(bdf_to_peer(3)), 86.03, 0.05);
    EXPECT_NEAR(implicit_angle(bdf_to_peer(4)), 73.35, 0.05);
}

TEST(RegionCsv, HeaderAndSummary) {
    const auto p = wedge_region(builtin("imex-euler"), 0.0, RegionOptions{.n_rays = 16});
    const auto csv = region_csv({p});
    EXPECT_EQ(csv.rfind("beta_deg,ray_angle_deg,re_z0,im_z0\n", 0), 0u);
    EXPECT_NE(csv.find("# area="), std::string::npos);
    EXPECT_NE(csv.find(" x_max="), std::string::npos);
    std::size_t rows = 0;
    for (char ch : csv) rows += ch == '\n';
    EXPECT_EQ(rows, 1u + 16u + 1u);
}
