#pragma once

#include "peerimex/linalg.hpp"
#include "peerimex/rational.hpp"

#include <array>
#include <string>
#include <utility>
#include <vector>

namespace peerimex {

/// Node vector c of an s-stage Peer method: pairwise distinct, c_s = 1.
class NodeVector {
public:
    /// Throws ErrorCode::invalid_nodes unless the nodes are distinct and end in 1.
    explicit NodeVector(std::vector<double> c);
    explicit NodeVector(const Vector& c);

    [[nodiscard]] int size() const noexcept { return static_cast<int>(c_.size()); }
    [[nodiscard]] const Vector& values() const noexcept { return c_; }
    [[nodiscard]] double operator[](int i) const { return c_(i); }

private:
    Vector c_;
};

/// Throws ErrorCode::invalid_nodes if two abscissae coincide.
void require_distinct(const Vector& c);

/// Vandermonde matrices V0 = (c_i^{j-1}) and V1 = ((c_i - 1)^{j-1}).
[[nodiscard]] std::pair<Matrix, Matrix> vandermonde_pair(const Vector& c);

/// Lagrange extrapolation from the previous step's stage times to the
/// current ones: S(i,j) = prod_{k != j} (c_i - c_k + 1) / (c_j - c_k).
[[nodiscard]] Matrix simple_extrapolation(const Vector& c);

/// Extrapolation through the s most recently computed stage values.
/// Returns (S1, S2) with S1 upper triangular, S2 strictly lower triangular.
[[nodiscard]] std::pair<Matrix, Matrix> recent_value_extrapolation(const Vector& c);

/// S1 = (I - S2) V0 V1^{-1}: the unique completion of S2 to stage order s.
[[nodiscard]] Matrix complete_extrapolation(const Vector& c, const Matrix& s2);

/// Max-norm residual of the stage-order-s extrapolation conditions
/// (I - S2) c^j - S1 (c - e)^j, j = 0..s-1.
[[nodiscard]] double extrapolation_residual(const Vector& c, const Matrix& s1, const Matrix& s2);

struct BdfCoefficients {
    std::vector<Rational> a;  ///< a_0 .. a_s
    double alpha_deg = 0.0;
};

/// Immutable description of an s-stage IMEX-Peer method
///
///   w_n = P w_{n-1} + dt Qhat F0(w_{n-1}) + dt Rhat F0(w_n) + dt R F1(w_n)
///
/// with Qhat = R S1 and Rhat = R S2. Only built through assemble_imex,
/// bdf_to_peer and the loaders, all of which check the invariants.
class ImexTableau {
public:
    [[nodiscard]] int stages() const noexcept { return static_cast<int>(nodes_.size()); }
    [[nodiscard]] const Vector& nodes() const noexcept { return nodes_; }
    /// P: weights of the previous stage values.
    [[nodiscard]] const Matrix& propagation() const noexcept { return propagation_; }
    /// R: lower-triangular implicit coupling.
    [[nodiscard]] const Matrix& implicit_coupling() const noexcept { return implicit_; }
    /// S1: extrapolation weights on the previous step's F0 values.
    [[nodiscard]] const Matrix& extrapolation_prev() const noexcept { return extrap_prev_; }
    /// S2: strictly lower extrapolation weights on current-step F0 values.
    [[nodiscard]] const Matrix& extrapolation_curr() const noexcept { return extrap_curr_; }
    /// Qhat = R S1.
    [[nodiscard]] const Matrix& explicit_prev() const noexcept { return explicit_prev_; }
    /// Rhat = R S2, strictly lower triangular.
    [[nodiscard]] const Matrix& explicit_curr() const noexcept { return explicit_curr_; }
    [[nodiscard]] const std::string& label() const noexcept { return label_; }
    [[nodiscard]] int order() const noexcept { return order_; }
    [[nodiscard]] const std::string& source() const noexcept { return source_; }

    [[nodiscard]] ImexTableau with_label(std::string label) const {
        ImexTableau t = *this;
        t.label_ = std::move(label);
        return t;
    }
    [[nodiscard]] ImexTableau with_source(std::string source) const {
        ImexTableau t = *this;
        t.source_ = std::move(source);
        return t;
    }

private:
    friend ImexTableau assemble_imex(const Vector&, const Matrix&, const Matrix&, const Matrix&,
                                     std::string, int);
    friend ImexTableau bdf_to_peer(const BdfCoefficients&);

    Vector nodes_;
    Matrix propagation_;
    Matrix implicit_;
    Matrix extrap_prev_;
    Matrix extrap_curr_;
    Matrix explicit_prev_;
    Matrix explicit_curr_;
    std::string label_;
    std::string source_;
    int order_ = 0;
};

/// Builds an IMEX tableau from an implicit Peer method (c, P, R) and a strictly
/// lower-triangular S2. `order` <= 0 means "use s".
[[nodiscard]] ImexTableau assemble_imex(const Vector& c, const Matrix& p, const Matrix& r,
                                        const Matrix& s2, std::string label, int order = 0);

/// Re-checks every tableau invariant; throws ErrorCode::validation naming the
/// first violated one.
void validate(const ImexTableau& t);

enum class ZeroStability { optimal, strong, weakly_stable, unstable };

[[nodiscard]] const char* to_string(ZeroStability z) noexcept;

struct ConsistencyReport {
    std::vector<Vector> residuals;  ///< d_1 .. d_{s+1}
    double preconsistency_residual = 0.0;
    double spectral_radius_p = 0.0;
    std::vector<Complex> p_eigenvalues;
    ZeroStability zero_stability = ZeroStability::unstable;
    int stage_order = 0;
    /// max |C V0 - P (C - I) V1 - R V0 D|
    double stage_order_matrix_residual = 0.0;
    double extrapolation_residual = 0.0;
};

/// Order residual d_j = (c^j - P (c-e)^j - j R c^{j-1}) / j!, c^0 := e.
[[nodiscard]] Vector order_residual(const Vector& c, const Matrix& p, const Matrix& r, int j);

/// Classifies power-boundedness of P from its spectrum.
[[nodiscard]] ZeroStability classify_zero_stability(const Matrix& p, double tol = 1e-10);

[[nodiscard]] ConsistencyReport consistency_report(const ImexTableau& t, double order_tol = 1e-10);

struct ErrorConstants {
    double implicit = 0.0;   ///< c_im
    double extrapolation = 0.0;  ///< c_ex
};

[[nodiscard]] ErrorConstants error_constants(const ImexTableau& t);

/// Tabulated BDF coefficients for s = 1..4.
[[nodiscard]] BdfCoefficients bdf_coefficients(int s);

/// IMEX-BDF(s) with s substeps of dt/s rewritten as an s-stage IMEX-Peer
/// method; the matrices are formed in exact arithmetic.
[[nodiscard]] ImexTableau bdf_to_peer(const BdfCoefficients& bdf);
[[nodiscard]] ImexTableau bdf_to_peer(int s);

/// Optimal two-stage extrapolation parameter 10 - 4 sqrt(5).
[[nodiscard]] double peer2_mu_star();

/// Two-stage family on the BDF2 base with s21 = mu.
[[nodiscard]] ImexTableau peer2_family(double mu, std::string label = "imex-peer2");

}  // namespace peerimex
