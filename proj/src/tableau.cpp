#include "peerimex/tableau.hpp"

#include "peerimex/error.hpp"

#include <Eigen/LU>

#include <algorithm>
#include <cmath>
#include <sstream>

namespace peerimex {

namespace {

constexpr double kPreconsistencyTol = 1e-12;
constexpr double kInvariantTol = 1e-12;

double factorial(int n) {
    double f = 1.0;
    for (int k = 2; k <= n; ++k) f *= k;
    return f;
}

std::string describe(const char* what, double value) {
    std::ostringstream os;
    os << what << " (residual " << value << ")";
    return os.str();
}

/// Lagrange weights of the interpolant through `abscissae`, evaluated at x.
Vector lagrange_weights(const std::vector<double>& abscissae, double x) {
    const auto n = abscissae.size();
    Vector w(static_cast<Eigen::Index>(n));
    for (std::size_t j = 0; j < n; ++j) {
        double num = 1.0;
        double den = 1.0;
        for (std::size_t k = 0; k < n; ++k) {
            if (k == j) continue;
            num *= x - abscissae[k];
            den *= abscissae[j] - abscissae[k];
        }
        w(static_cast<Eigen::Index>(j)) = num / den;
    }
    return w;
}

void require_square(const Matrix& m, Eigen::Index s, const char* name) {
    if (m.rows() != s || m.cols() != s) {
        std::ostringstream os;
        os << name << " must be " << s << "x" << s << ", got " << m.rows() << "x" << m.cols();
        throw Error(ErrorCode::validation, os.str());
    }
}

using RationalMatrix = std::vector<std::vector<Rational>>;

RationalMatrix rational_zero(int s) {
    return RationalMatrix(static_cast<std::size_t>(s), std::vector<Rational>(static_cast<std::size_t>(s)));
}

RationalMatrix rational_mul(const RationalMatrix& a, const RationalMatrix& b) {
    const auto n = a.size();
    RationalMatrix c = rational_zero(static_cast<int>(n));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t k = 0; k < n; ++k) {
            if (a[i][k].is_zero()) continue;
            for (std::size_t j = 0; j < n; ++j) c[i][j] += a[i][k] * b[k][j];
        }
    return c;
}

/// Inverse of a lower-triangular matrix by forward substitution.
RationalMatrix rational_lower_inverse(const RationalMatrix& a) {
    const auto n = a.size();
    RationalMatrix inv = rational_zero(static_cast<int>(n));
    for (std::size_t col = 0; col < n; ++col) {
        for (std::size_t i = col; i < n; ++i) {
            Rational acc = i == col ? Rational(1) : Rational(0);
            for (std::size_t k = col; k < i; ++k) acc -= a[i][k] * inv[k][col];
            inv[i][col] = acc / a[i][i];
        }
    }
    return inv;
}

Matrix to_matrix(const RationalMatrix& a, const Rational& scale) {
    const auto n = static_cast<Eigen::Index>(a.size());
    Matrix m(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j)
            m(i, j) = (a[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] * scale).to_double();
    return m;
}

/// Coefficients lambda^s + k_1 lambda^{s-1} + ... + k_s (Faddeev-LeVerrier).
std::vector<double> characteristic_polynomial(const Matrix& p) {
    const auto n = p.rows();
    std::vector<double> coeff(static_cast<std::size_t>(n) + 1, 0.0);
    coeff[0] = 1.0;
    Matrix m = Matrix::Zero(n, n);
    for (Eigen::Index k = 1; k <= n; ++k) {
        m = p * m + coeff[static_cast<std::size_t>(k - 1)] * Matrix::Identity(n, n);
        coeff[static_cast<std::size_t>(k)] = -(p * m).trace() / static_cast<double>(k);
    }
    return coeff;
}

}  // namespace

NodeVector::NodeVector(std::vector<double> c)
    : NodeVector(Vector(Eigen::Map<const Vector>(c.data(), static_cast<Eigen::Index>(c.size())))) {}

NodeVector::NodeVector(const Vector& c) : c_(c) {
    if (c_.size() == 0) throw Error(ErrorCode::invalid_nodes, "node vector is empty");
    require_distinct(c_);
    if (c_(c_.size() - 1) != 1.0)
        throw Error(ErrorCode::invalid_nodes, "last node must equal 1");
}

void require_distinct(const Vector& c) {
    for (Eigen::Index i = 0; i < c.size(); ++i) {
        if (!std::isfinite(c(i))) throw Error(ErrorCode::invalid_nodes, "node is not finite");
        for (Eigen::Index j = i + 1; j < c.size(); ++j)
            if (c(i) == c(j)) {
                std::ostringstream os;
                os << "nodes " << i + 1 << " and " << j + 1 << " coincide";
                throw Error(ErrorCode::invalid_nodes, os.str());
            }
    }
}

std::pair<Matrix, Matrix> vandermonde_pair(const Vector& c) {
    require_distinct(c);
    const auto s = c.size();
    Matrix v0(s, s);
    Matrix v1(s, s);
    for (Eigen::Index i = 0; i < s; ++i) {
        double a = 1.0;
        double b = 1.0;
        for (Eigen::Index j = 0; j < s; ++j) {
            v0(i, j) = a;
            v1(i, j) = b;
            a *= c(i);
            b *= c(i) - 1.0;
        }
    }
    return {v0, v1};
}

Matrix simple_extrapolation(const Vector& c) {
    require_distinct(c);
    const auto s = c.size();
    Matrix out(s, s);
    for (Eigen::Index i = 0; i < s; ++i)
        for (Eigen::Index j = 0; j < s; ++j) {
            double w = 1.0;
            for (Eigen::Index k = 0; k < s; ++k)
                if (k != j) w *= (c(i) - c(k) + 1.0) / (c(j) - c(k));
            out(i, j) = w;
        }
    return out;
}

std::pair<Matrix, Matrix> recent_value_extrapolation(const Vector& c) {
    require_distinct(c);
    const auto s = c.size();
    Matrix s1 = Matrix::Zero(s, s);
    Matrix s2 = Matrix::Zero(s, s);
    for (Eigen::Index i = 0; i < s; ++i) {
        // Stencil: previous-step times c_i-1..c_s-1, then current c_1..c_{i-1}.
        std::vector<double> abscissae;
        for (Eigen::Index j = i; j < s; ++j) abscissae.push_back(c(j) - 1.0);
        for (Eigen::Index j = 0; j < i; ++j) abscissae.push_back(c(j));
        for (std::size_t a = 0; a < abscissae.size(); ++a)
            for (std::size_t b = a + 1; b < abscissae.size(); ++b)
                if (std::abs(abscissae[a] - abscissae[b]) < 1e-12) {
                    std::ostringstream os;
                    os << "interpolation abscissae coincide in row " << i + 1;
                    throw Error(ErrorCode::degenerate_stencil, os.str());
                }
        const Vector w = lagrange_weights(abscissae, c(i));
        Eigen::Index k = 0;
        for (Eigen::Index j = i; j < s; ++j) s1(i, j) = w(k++);
        for (Eigen::Index j = 0; j < i; ++j) s2(i, j) = w(k++);
    }
    return {s1, s2};
}

Matrix complete_extrapolation(const Vector& c, const Matrix& s2) {
    const auto s = c.size();
    require_square(s2, s, "S2");
    if (!is_strictly_lower(s2))
        throw Error(ErrorCode::invalid_s2, "S2 must be strictly lower triangular");
    return (Matrix::Identity(s, s) - s2) * simple_extrapolation(c);
}

double extrapolation_residual(const Vector& c, const Matrix& s1, const Matrix& s2) {
    const auto s = c.size();
    const Vector e = Vector::Ones(s);
    const Matrix i_minus_s2 = Matrix::Identity(s, s) - s2;
    double worst = 0.0;
    for (int j = 0; j < s; ++j) {
        const Vector r = i_minus_s2 * pow_elementwise(c, j) - s1 * pow_elementwise(c - e, j);
        worst = std::max(worst, max_abs(r));
    }
    return worst;
}

ImexTableau assemble_imex(const Vector& c, const Matrix& p, const Matrix& r, const Matrix& s2,
                          std::string label, int order) {
    const NodeVector nodes(c);
    const auto s = c.size();
    require_square(p, s, "P");
    require_square(r, s, "R");
    require_square(s2, s, "S2");
    if (!is_lower(r)) throw Error(ErrorCode::invalid_r, "R must be lower triangular");
    for (Eigen::Index i = 0; i < s; ++i)
        if (!(std::abs(r(i, i)) > 1e-14))
            throw Error(ErrorCode::invalid_r, "R has a zero diagonal entry");
    if (!is_strictly_lower(s2))
        throw Error(ErrorCode::invalid_s2, "S2 must be strictly lower triangular");
    const double pre = max_abs(Vector(p * Vector::Ones(s) - Vector::Ones(s)));
    if (!(pre <= kPreconsistencyTol))
        throw Error(ErrorCode::inconsistent_p, describe("P e != e", pre));

    ImexTableau t;
    t.nodes_ = nodes.values();
    t.propagation_ = p;
    t.implicit_ = r;
    t.extrap_curr_ = s2;
    t.extrap_prev_ = complete_extrapolation(c, s2);
    t.explicit_prev_ = r * t.extrap_prev_;
    t.explicit_curr_ = r * s2;
    // R lower times S2 strictly lower is strictly lower; clear round-off.
    for (Eigen::Index i = 0; i < s; ++i)
        for (Eigen::Index j = i; j < s; ++j) t.explicit_curr_(i, j) = 0.0;
    t.label_ = std::move(label);
    t.order_ = order > 0 ? order : static_cast<int>(s);
    validate(t);
    return t;
}

void validate(const ImexTableau& t) {
    const auto s = t.nodes().size();
    const Matrix& r = t.implicit_coupling();
    const double qhat = max_abs(Matrix(t.explicit_prev() - r * t.extrapolation_prev()));
    if (!(qhat <= kInvariantTol * std::max(1.0, max_abs(t.explicit_prev()))))
        throw Error(ErrorCode::validation, describe("Qhat = R S1 violated", qhat));
    const double rhat = max_abs(Matrix(t.explicit_curr() - r * t.extrapolation_curr()));
    if (!(rhat <= kInvariantTol * std::max(1.0, max_abs(t.explicit_curr()))))
        throw Error(ErrorCode::validation, describe("Rhat = R S2 violated", rhat));
    if (!is_strictly_lower(t.explicit_curr()))
        throw Error(ErrorCode::validation, "Rhat is not strictly lower triangular");
    const double pre = max_abs(Vector(t.propagation() * Vector::Ones(s) - Vector::Ones(s)));
    if (!(pre <= kPreconsistencyTol))
        throw Error(ErrorCode::validation, describe("P e = e violated", pre));
    const double ext =
        extrapolation_residual(t.nodes(), t.extrapolation_prev(), t.extrapolation_curr());
    const double scale = std::max(1.0, max_abs(t.extrapolation_prev()));
    if (!(ext <= kInvariantTol * scale))
        throw Error(ErrorCode::validation, describe("S1 V1 = (I - S2) V0 violated", ext));
}

const char* to_string(ZeroStability z) noexcept {
    switch (z) {
        case ZeroStability::optimal: return "optimal";
        case ZeroStability::strong: return "strong";
        case ZeroStability::weakly_stable: return "weakly-stable";
        case ZeroStability::unstable: return "unstable";
    }
    return "unknown";
}

Vector order_residual(const Vector& c, const Matrix& p, const Matrix& r, int j) {
    const Vector e = Vector::Ones(c.size());
    const Vector lhs = pow_elementwise(c, j) - p * pow_elementwise(c - e, j) -
                       static_cast<double>(j) * (r * pow_elementwise(c, j - 1));
    return lhs / factorial(j);
}

ZeroStability classify_zero_stability(const Matrix& p, double tol) {
    const auto s = p.rows();
    const auto poly = characteristic_polynomial(p);
    // Optimal: characteristic polynomial lambda^{s-1} (lambda - 1).
    bool optimal = std::abs(poly[1] + 1.0) <= tol;
    for (std::size_t k = 2; k < poly.size(); ++k) optimal = optimal && std::abs(poly[k]) <= tol;
    if (optimal) return ZeroStability::optimal;

    const auto ev = eigenvalues(p);
    int unimodular = 0;
    for (const Complex& z : ev) {
        const double m = std::abs(z);
        if (m > 1.0 + 1e-8) return ZeroStability::unstable;
        if (std::abs(m - 1.0) <= 1e-8) ++unimodular;
    }
    // Non-defectiveness of every unimodular eigenvalue.
    std::vector<bool> seen(ev.size(), false);
    for (std::size_t a = 0; a < ev.size(); ++a) {
        if (seen[a] || std::abs(std::abs(ev[a]) - 1.0) > 1e-8) continue;
        int algebraic = 0;
        for (std::size_t b = a; b < ev.size(); ++b)
            if (std::abs(ev[b] - ev[a]) <= 1e-6) {
                seen[b] = true;
                ++algebraic;
            }
        ComplexMatrix shifted = p.cast<Complex>() - ev[a] * ComplexMatrix::Identity(s, s);
        Eigen::FullPivLU<ComplexMatrix> lu(shifted);
        lu.setThreshold(tol);
        const auto geometric = s - lu.rank();
        if (geometric < algebraic) return ZeroStability::unstable;
    }
    return unimodular <= 1 ? ZeroStability::strong : ZeroStability::weakly_stable;
}

ConsistencyReport consistency_report(const ImexTableau& t, double order_tol) {
    ConsistencyReport rep;
    const auto s = t.stages();
    const Vector& c = t.nodes();
    const Matrix& p = t.propagation();
    const Matrix& r = t.implicit_coupling();
    for (int j = 1; j <= s + 1; ++j) rep.residuals.push_back(order_residual(c, p, r, j));
    rep.preconsistency_residual = max_abs(Vector(p * Vector::Ones(s) - Vector::Ones(s)));
    rep.p_eigenvalues = eigenvalues(p);
    for (const Complex& z : rep.p_eigenvalues)
        rep.spectral_radius_p = std::max(rep.spectral_radius_p, std::abs(z));
    rep.zero_stability = classify_zero_stability(p);
    if (rep.preconsistency_residual < order_tol) {
        int q = 0;
        while (q < s && max_abs(rep.residuals[static_cast<std::size_t>(q)]) < order_tol) ++q;
        rep.stage_order = q;
    }
    const auto [v0, v1] = vandermonde_pair(c);
    const Matrix cm = c.asDiagonal();
    Matrix d = Matrix::Zero(s, s);
    for (int i = 0; i < s; ++i) d(i, i) = i + 1;
    rep.stage_order_matrix_residual =
        max_abs(Matrix(cm * v0 - p * (cm - Matrix::Identity(s, s)) * v1 - r * v0 * d));
    rep.extrapolation_residual =
        extrapolation_residual(c, t.extrapolation_prev(), t.extrapolation_curr());
    return rep;
}

ErrorConstants error_constants(const ImexTableau& t) {
    const int s = t.stages();
    const Vector& c = t.nodes();
    const Vector e = Vector::Ones(s);
    ErrorConstants out;
    out.implicit = order_residual(c, t.propagation(), t.implicit_coupling(), s + 1).norm();
    const Vector ex = (t.implicit_coupling() - t.explicit_curr()) * pow_elementwise(c, s) -
                      t.explicit_prev() * pow_elementwise(c - e, s);
    out.extrapolation = ex.norm() / factorial(s);
    return out;
}

BdfCoefficients bdf_coefficients(int s) {
    switch (s) {
        case 1: return {{Rational(1), Rational(-1)}, 90.0};
        case 2: return {{Rational(3, 2), Rational(-2), Rational(1, 2)}, 90.0};
        case 3: return {{Rational(11, 6), Rational(-3), Rational(3, 2), Rational(-1, 3)}, 86.03};
        case 4:
            return {{Rational(25, 12), Rational(-4), Rational(3), Rational(-4, 3), Rational(1, 4)},
                    73.35};
        default: break;
    }
    throw Error(ErrorCode::unsupported_order,
                "BDF coefficients are tabulated for s = 1..4 only, got " + std::to_string(s));
}

ImexTableau bdf_to_peer(const BdfCoefficients& bdf) {
    if (bdf.a.size() < 2)
        throw Error(ErrorCode::unsupported_order, "BDF needs at least two coefficients");
    const int s = static_cast<int>(bdf.a.size()) - 1;
    const auto& a = bdf.a;
    if (a[0].is_zero()) throw Error(ErrorCode::validation, "BDF coefficient a_0 must be nonzero");
    Rational sum;
    for (const auto& ai : a) sum += ai;
    if (!sum.is_zero()) throw Error(ErrorCode::validation, "BDF coefficients must sum to zero");

    // (b_1..b_s): last row of the extrapolation matrix on nodes 0, 1, ..., s-1.
    std::vector<Rational> b(static_cast<std::size_t>(s));
    for (int j = 0; j < s; ++j) {
        Rational w(1);
        for (int k = 0; k < s; ++k)
            if (k != j) w *= Rational(s - 1 - k + 1) / Rational(j - k);
        b[static_cast<std::size_t>(j)] = w;
    }

    const auto us = static_cast<std::size_t>(s);
    RationalMatrix a1 = rational_zero(s);
    RationalMatrix a2 = rational_zero(s);
    RationalMatrix b1 = rational_zero(s);
    RationalMatrix b2 = rational_zero(s);
    for (std::size_t i = 0; i < us; ++i)
        for (std::size_t j = 0; j < us; ++j) {
            if (j >= i) {
                a1[i][j] = a[us - (j - i)];
                b1[i][j] = b[j - i];
            }
            if (j <= i) a2[i][j] = a[i - j];
            if (j < i) b2[i][j] = b[us - (i - j)];
        }
    const RationalMatrix a2inv = rational_lower_inverse(a2);
    const Rational inv_s(1, s);

    ImexTableau t;
    t.nodes_ = Vector(s);
    for (int i = 0; i < s; ++i) t.nodes_(i) = Rational(i + 1, s).to_double();
    t.propagation_ = to_matrix(rational_mul(a2inv, a1), Rational(-1));
    t.implicit_ = to_matrix(a2inv, inv_s);
    t.explicit_prev_ = to_matrix(rational_mul(a2inv, b1), inv_s);
    t.explicit_curr_ = to_matrix(rational_mul(a2inv, b2), inv_s);
    // R^{-1} Qhat = B1 and R^{-1} Rhat = B2 exactly.
    t.extrap_prev_ = to_matrix(b1, Rational(1));
    t.extrap_curr_ = to_matrix(b2, Rational(1));
    t.label_ = "imex-bdf" + std::to_string(s);
    t.source_ = "BDF" + std::to_string(s) + " with s substeps of dt/s";
    t.order_ = s;
    validate(t);
    return t;
}

ImexTableau bdf_to_peer(int s) {
    if (s < 2 || s > 4)
        throw Error(ErrorCode::unsupported_order,
                    "bdf_to_peer supports s = 2, 3, 4; got " + std::to_string(s));
    return bdf_to_peer(bdf_coefficients(s));
}

double peer2_mu_star() { return 10.0 - 4.0 * std::sqrt(5.0); }

ImexTableau peer2_family(double mu, std::string label) {
    const ImexTableau base = bdf_to_peer(2);
    Matrix s2 = Matrix::Zero(2, 2);
    s2(1, 0) = mu;
    return assemble_imex(base.nodes(), base.propagation(), base.implicit_coupling(), s2,
                         std::move(label));
}

}  // namespace peerimex
