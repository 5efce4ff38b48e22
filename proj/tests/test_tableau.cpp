#include "peerimex/error.hpp"
#include "peerimex/tableau.hpp"
#include "peerimex/tableau_io.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

using namespace peerimex;

namespace {

Vector vec(std::initializer_list<double> v) {
    Vector out(static_cast<Eigen::Index>(v.size()));
    Eigen::Index i = 0;
    for (double x : v) out(i++) = x;
    return out;
}

void expect_near(const Matrix& a, const Matrix& b, double tol) {
    ASSERT_EQ(a.rows(), b.rows());
    ASSERT_EQ(a.cols(), b.cols());
    EXPECT_LE(max_abs(Matrix(a - b)), tol) << "got\n" << a << "\nexpected\n" << b;
}

ErrorCode code_of(const std::function<void()>& f) {
    try {
        f();
    } catch (const Error& e) {
        return e.code();
    }
    ADD_FAILURE() << "no error thrown";
    return ErrorCode::invalid_argument;
}

}  // namespace

TEST(Vandermonde, SingleNode) {
    const auto [v0, v1] = vandermonde_pair(vec({1.0}));
    EXPECT_EQ(v0(0, 0), 1.0);
    EXPECT_EQ(v1(0, 0), 1.0);
}

TEST(Vandermonde, TwoNodes) {
    const auto [v0, v1] = vandermonde_pair(vec({0.5, 1.0}));
    expect_near(v0, from_rows({{1, 0.5}, {1, 1}}), 0.0);
    expect_near(v1, from_rows({{1, -0.5}, {1, 0}}), 0.0);
}

TEST(Vandermonde, DeterminantMatchesProduct) {
    const auto [v0, v1] = vandermonde_pair(vec({0.0, 1.0, 2.0}));
    // cofactor expansion along the first row
    const double det = v0(0, 0) * (v0(1, 1) * v0(2, 2) - v0(1, 2) * v0(2, 1)) -
                       v0(0, 1) * (v0(1, 0) * v0(2, 2) - v0(1, 2) * v0(2, 0)) +
                       v0(0, 2) * (v0(1, 0) * v0(2, 1) - v0(1, 1) * v0(2, 0));
    EXPECT_DOUBLE_EQ(det, 2.0);
}

TEST(Vandermonde, DuplicateNodesRejected) {
    EXPECT_EQ(code_of([] { (void)vandermonde_pair(vec({0.5, 0.5, 1.0})); }), ErrorCode::invalid_nodes);
    EXPECT_EQ(code_of([] { NodeVector n(std::vector<double>{0.3, 0.7}); }), ErrorCode::invalid_nodes);
}

TEST(SimpleExtrapolation, Examples) {
    expect_near(simple_extrapolation(vec({1.0})), from_rows({{1}}), 0.0);
    expect_near(simple_extrapolation(vec({0.5, 1.0})), from_rows({{-1, 2}, {-2, 3}}), 1e-15);
    const Matrix s = simple_extrapolation(vec({0.0, 1.0, 2.0}));
    expect_near(s.row(2), from_rows({{1, -3, 3}}), 1e-14);
}

TEST(SimpleExtrapolation, RowsSumToOneAndMatchVandermonde) {
    const Vector c = vec({0.2, 0.45, 0.8, 1.0});
    const Matrix s = simple_extrapolation(c);
    EXPECT_LE(max_abs(Vector(s.rowwise().sum() - Vector::Ones(4))), 1e-12);
    const auto [v0, v1] = vandermonde_pair(c);
    expect_near(s, v0 * v1.inverse(), 1e-9);
}

TEST(RecentValueExtrapolation, TwoStages) {
    const auto [s1, s2] = recent_value_extrapolation(vec({0.5, 1.0}));
    expect_near(s1, from_rows({{-1, 2}, {0, -1}}), 1e-14);
    expect_near(s2, from_rows({{0, 0}, {2, 0}}), 1e-14);
}

TEST(RecentValueExtrapolation, SingleStage) {
    const auto [s1, s2] = recent_value_extrapolation(vec({1.0}));
    EXPECT_EQ(s1(0, 0), 1.0);
    EXPECT_EQ(s2(0, 0), 0.0);
}

TEST(RecentValueExtrapolation, ThreeEquidistantStages) {
    const Vector c = vec({1.0 / 3, 2.0 / 3, 1.0});
    const auto [s1, s2] = recent_value_extrapolation(c);
    // Last row: interpolation through {0, 1/3, 2/3} evaluated at 1 gives (1, -3, 3).
    EXPECT_NEAR(s1(2, 2), 1.0, 1e-13);
    EXPECT_NEAR(s2(2, 0), -3.0, 1e-13);
    EXPECT_NEAR(s2(2, 1), 3.0, 1e-13);
    EXPECT_TRUE(is_strictly_lower(s2));
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < i; ++j) EXPECT_EQ(s1(i, j), 0.0);
    // interpolation of monomials: row weights reproduce t^k at the target
    for (int k = 0; k < 3; ++k) {
        const Vector lhs = (Matrix::Identity(3, 3) - s2) * pow_elementwise(c, k);
        const Vector rhs = s1 * pow_elementwise(Vector(c.array() - 1.0), k);
        EXPECT_LE(max_abs(Vector(lhs - rhs)), 1e-12) << "degree " << k;
    }
}

TEST(RecentValueExtrapolation, DegenerateStencil) {
    EXPECT_EQ(code_of([] { (void)recent_value_extrapolation(vec({0.0, 1.0})); }), ErrorCode::degenerate_stencil);
}

TEST(CompleteExtrapolation, ReducesToSimple) {
    const Vector c = vec({0.25, 0.6, 1.0});
    expect_near(complete_extrapolation(c, Matrix::Zero(3, 3)), simple_extrapolation(c), 1e-12);
}

TEST(CompleteExtrapolation, MatchesRecentValues) {
    const Vector c = vec({0.5, 1.0});
    expect_near(complete_extrapolation(c, from_rows({{0, 0}, {2, 0}})), from_rows({{-1, 2}, {0, -1}}), 1e-14);
}

TEST(CompleteExtrapolation, ResidualAtOptimalMu) {
    const Vector c = vec({0.5, 1.0});
    const Matrix s2 = from_rows({{0, 0}, {10.0 - 4.0 * std::sqrt(5.0), 0}});
    const Matrix s1 = complete_extrapolation(c, s2);
    EXPECT_LT(extrapolation_residual(c, s1, s2), 1e-14);
}

TEST(AssembleImex, PeerTwoCoefficients) {
    const double mu = 10.0 - 4.0 * std::sqrt(5.0) + 0.1;
    const auto t = assemble_imex(vec({0.5, 1.0}), from_rows({{-1.0 / 3, 4.0 / 3}, {-4.0 / 9, 13.0 / 9}}),
                                 from_rows({{1.0 / 3, 0}, {4.0 / 9, 1.0 / 3}}), from_rows({{0, 0}, {mu, 0}}), "p2");
    expect_near(t.explicit_prev(), t.implicit_coupling() * t.extrapolation_prev(), 1e-15);
    expect_near(t.explicit_curr(), t.implicit_coupling() * t.extrapolation_curr(), 1e-15);
    const auto rep = consistency_report(t);
    EXPECT_EQ(rep.stage_order, 2);
    EXPECT_EQ(t.order(), 2);
}

TEST(AssembleImex, EulerPair) {
    const auto t = assemble_imex(vec({1.0}), from_rows({{1}}), from_rows({{1}}), from_rows({{0}}), "euler");
    EXPECT_DOUBLE_EQ(t.explicit_prev()(0, 0), 1.0);
    EXPECT_DOUBLE_EQ(t.explicit_curr()(0, 0), 0.0);
    const auto rep = consistency_report(t);
    EXPECT_GE(rep.stage_order, 1);
    EXPECT_NEAR(rep.residuals[0](0), 0.0, 1e-15);
}

TEST(AssembleImex, BdfTwoMatrices) {
    const auto t = bdf_to_peer(2);
    expect_near(t.explicit_prev(), from_rows({{-1.0 / 3, 2.0 / 3}, {-4.0 / 9, 5.0 / 9}}), 1e-15);
    expect_near(t.explicit_curr(), from_rows({{0, 0}, {2.0 / 3, 0}}), 1e-15);
}

TEST(AssembleImex, ValidationErrors) {
    const Vector c = vec({0.5, 1.0});
    const Matrix r = from_rows({{1.0 / 3, 0}, {4.0 / 9, 1.0 / 3}});
    const Matrix s2 = Matrix::Zero(2, 2);
    EXPECT_EQ(code_of([&] { (void)assemble_imex(c, from_rows({{1, 0.1}, {0, 1}}), r, s2, "x"); }),
              ErrorCode::inconsistent_p);
    EXPECT_EQ(code_of([&] { (void)assemble_imex(c, Matrix::Identity(2, 2), from_rows({{0, 0}, {1, 1}}), s2, "x"); }),
              ErrorCode::invalid_r);
    EXPECT_EQ(code_of([&] { (void)assemble_imex(c, Matrix::Identity(2, 2), from_rows({{1, 1}, {1, 1}}), s2, "x"); }),
              ErrorCode::invalid_r);
    EXPECT_EQ(code_of([&] { (void)assemble_imex(c, Matrix::Identity(2, 2), r, from_rows({{0, 1}, {0, 0}}), "x"); }),
              ErrorCode::invalid_s2);
}

TEST(Consistency, BdfThreeEigenvalues) {
    const auto rep = consistency_report(bdf_to_peer(3));
    EXPECT_EQ(rep.zero_stability, ZeroStability::strong);
    const double modulus = std::abs(Complex{-119.0, 27.0 * std::sqrt(39.0)}) / 2662.0;
    std::vector<double> mods;
    for (const auto& z : rep.p_eigenvalues) mods.push_back(std::abs(z));
    std::sort(mods.begin(), mods.end());
    EXPECT_NEAR(mods[0], modulus, 1e-12);
    EXPECT_NEAR(mods[1], modulus, 1e-12);
    EXPECT_NEAR(mods[2], 1.0, 1e-12);
    EXPECT_NEAR(modulus, 0.0775, 1e-4);
}

TEST(Consistency, BuiltinsHaveFullStageOrder) {
    for (const auto& name : builtin_names()) {
        const auto t = builtin(name);
        const auto rep = consistency_report(t);
        EXPECT_EQ(rep.stage_order, t.stages()) << name;
        for (int j = 1; j <= t.stages(); ++j) EXPECT_LT(max_abs(rep.residuals[static_cast<std::size_t>(j - 1)]), 1e-12) << name;
        EXPECT_LT(rep.stage_order_matrix_residual, 1e-12) << name;
        EXPECT_LT(rep.extrapolation_residual, 1e-12) << name;
    }
}

TEST(Consistency, ZeroStabilityClasses) {
    // P = e e_s^T has eigenvalues {1, 0}
    EXPECT_EQ(classify_zero_stability(from_rows({{0, 1}, {0, 1}})), ZeroStability::optimal);
    EXPECT_EQ(classify_zero_stability(from_rows({{0.5, 0.5}, {0, 1}})), ZeroStability::strong);
    EXPECT_EQ(classify_zero_stability(Matrix::Identity(2, 2)), ZeroStability::weakly_stable);
    EXPECT_EQ(classify_zero_stability(from_rows({{1, 1}, {0, 1}})), ZeroStability::unstable);
    EXPECT_EQ(classify_zero_stability(from_rows({{-1, 2}, {-2, 3}})), ZeroStability::unstable);
}

TEST(ErrorConstants, BdfTwoClosedForm) {
    const auto ec = error_constants(bdf_to_peer(2));
    EXPECT_NEAR(ec.implicit, std::sqrt(58.0) / 108.0, 1e-14);
    EXPECT_NEAR(ec.extrapolation, std::sqrt(58.0) / 36.0, 1e-14);
}

TEST(ErrorConstants, TabulatedValues) {
    EXPECT_NEAR(error_constants(builtin("imex-peer2")).implicit, 7.05e-2, 5e-5);
    EXPECT_NEAR(error_constants(builtin("imex-peer2")).extrapolation, 2.78e-1, 5e-4);
    EXPECT_NEAR(error_constants(bdf_to_peer(4)).implicit, 8.91e-4, 5e-7);
    EXPECT_NEAR(error_constants(bdf_to_peer(4)).extrapolation, 4.45e-3, 5e-6);
}

TEST(Bdf, CoefficientsConsistent) {
    for (int s = 1; s <= 4; ++s) {
        const auto b = bdf_coefficients(s);
        ASSERT_EQ(b.a.size(), static_cast<std::size_t>(s + 1));
        Rational sum(0);
        for (const auto& a : b.a) sum = sum + a;
        EXPECT_TRUE(sum == Rational(0)) << s;
        EXPECT_FALSE(b.a[0] == Rational(0));
    }
    EXPECT_EQ(code_of([] { (void)bdf_to_peer(5); }), ErrorCode::unsupported_order);
}

TEST(Bdf, EquidistantNodes) {
    for (int s = 2; s <= 4; ++s) {
        const auto t = bdf_to_peer(s);
        for (int i = 0; i < s; ++i) EXPECT_NEAR(t.nodes()(i), (i + 1.0) / s, 1e-15);
    }
}

TEST(Peer2, MuStarRecoversBdfAtTwo) {
    EXPECT_NEAR(peer2_mu_star(), 10.0 - 4.0 * std::sqrt(5.0), 1e-15);
    const auto t = peer2_family(2.0);
    expect_near(t.explicit_prev(), bdf_to_peer(2).explicit_prev(), 1e-14);
    expect_near(t.explicit_curr(), bdf_to_peer(2).explicit_curr(), 1e-14);
}

TEST(TableauIo, RoundTrip) {
    for (const auto& name : builtin_names()) {
        const auto t = builtin(name);
        const auto back = parse_tableau(serialize_tableau(t));
        EXPECT_EQ(back.label(), t.label());
        expect_near(back.propagation(), t.propagation(), 0.0);
        expect_near(back.implicit_coupling(), t.implicit_coupling(), 0.0);
        expect_near(back.extrapolation_curr(), t.extrapolation_curr(), 0.0);
        expect_near(back.explicit_prev(), t.explicit_prev(), 1e-15);
    }
}

TEST(TableauIo, MalformedInput) {
    EXPECT_EQ(code_of([] { (void)parse_tableau("{not json"); }), ErrorCode::malformed_file);
    EXPECT_EQ(code_of([] { (void)parse_tableau(R"({"name":"x","s":2,"c":[0.5,1]})"); }), ErrorCode::malformed_file);
    EXPECT_EQ(code_of([] {
                  (void)parse_tableau(
                      R"({"name":"x","s":2,"c":[1,1],"P":[[0,1],[0,1]],"R":[[1,0],[0,1]],"S2":[[0,0],[0,0]]})");
              }),
              ErrorCode::validation);
    EXPECT_EQ(code_of([] { (void)builtin("imex-bdf9"); }), ErrorCode::unknown_method);
}

TEST(Fuzz, RandomS2KeepsStageOrder) {
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> d(-5.0, 5.0);
    const auto base = bdf_to_peer(4);
    for (int trial = 0; trial < 50; ++trial) {
        Matrix s2 = Matrix::Zero(4, 4);
        for (int i = 1; i < 4; ++i)
            for (int j = 0; j < i; ++j) s2(i, j) = d(rng);
        const auto t = assemble_imex(base.nodes(), base.propagation(), base.implicit_coupling(), s2, "fuzz");
        EXPECT_LT(extrapolation_residual(t.nodes(), t.extrapolation_prev(), t.extrapolation_curr()), 1e-9);
        EXPECT_NO_THROW(validate(t));
    }
}
