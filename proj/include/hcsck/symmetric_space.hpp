#pragma once

#include <Eigen/Dense>
#include <complex>
#include <stdexcept>

#include "hcsck/random.hpp"

namespace hcsck {

using Mat = Eigen::MatrixXd;
using CMat = Eigen::MatrixXcd;

// Relative Frobenius tolerance for membership checks.
inline constexpr double kMembershipTol = 1e-9;

struct NumericalFailure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// [[0, I], [-I, 0]]
Mat canonical_omega(int n);

double symplectic_defect(const Mat& P);

class SymplecticMatrix {
public:
    explicit SymplecticMatrix(Mat P, double tol = kMembershipTol);
    static SymplecticMatrix identity(int n);

    const Mat& matrix() const { return P_; }
    int n() const { return static_cast<int>(P_.rows() / 2); }
    SymplecticMatrix operator*(const SymplecticMatrix& o) const;
    SymplecticMatrix inverse() const;

private:
    Mat P_;
};

class SiegelPoint {
public:
    explicit SiegelPoint(CMat Z, double tol = kMembershipTol);
    // i * Id
    static SiegelPoint base(int n);

    const CMat& Z() const { return Z_; }
    int n() const { return static_cast<int>(Z_.rows()); }

private:
    CMat Z_;
};

class ACPoint {
public:
    explicit ACPoint(Mat J, double tol = kMembershipTol);
    // -Omega_0
    static ACPoint base(int n);

    const Mat& J() const { return J_; }
    int n() const { return static_cast<int>(J_.rows() / 2); }
    bool is_base(double tol = kMembershipTol) const;

private:
    Mat J_;
};

class ACTangent {
public:
    ACTangent(Mat A, ACPoint base, double tol = kMembershipTol);

    const Mat& A() const { return A_; }
    const ACPoint& base() const { return base_; }
    int n() const { return base_.n(); }

private:
    Mat A_;
    ACPoint base_;
};

// Principal square root of a symmetric positive definite matrix.
Mat spd_sqrt(const Mat& S);

SiegelPoint moebius_act(const SymplecticMatrix& P, const SiegelPoint& Z);

// P_J = (Omega_0 J)^{1/2}; conjugates J to -Omega_0.
Mat ac_normalizer(const ACPoint& J);
SiegelPoint ac_to_siegel(const ACPoint& J);
// Inverse of ac_to_siegel: P(-Omega_0)P^{-1} with P.(i Id) = Z.
ACPoint siegel_to_ac(const SiegelPoint& Z);

double ac_metric(const ACTangent& A, const ACTangent& B);
ACTangent ac_complex_structure(const ACTangent& A);
// -1/4 [[A, B], C], all at -Omega_0.
Mat curvature_at_base(const ACTangent& A, const ACTangent& B, const ACTangent& C);

// (QJQ^{-1}, QAQ^{-1})
ACPoint transport(const SymplecticMatrix& Q, const ACPoint& J);
ACTangent transport(const SymplecticMatrix& Q, const ACTangent& A);
// Same tangent moved to -Omega_0 by P_J.
ACTangent to_base(const ACTangent& A);

// Sampling. Lie-algebra entries are uniform in [-scale, scale].
Mat random_sp_algebra(int n, CounterRng& rng, double scale = 1.0);
SymplecticMatrix random_symplectic(int n, CounterRng& rng, double scale = 1.0);
// U(n) inside Sp(2n) as [[X, Y], [-Y, X]], X + iY unitary.
SymplecticMatrix random_unitary(int n, CounterRng& rng);
// [[P, Q], [Q, -P]] with P, Q symmetric, entries uniform in [-scale, scale].
ACTangent random_base_tangent(int n, CounterRng& rng, double scale = 1.0);
ACPoint random_ac_point(int n, CounterRng& rng, double scale = 1.0);
// Tangent at J obtained by transporting a random base tangent.
ACTangent random_tangent(const ACPoint& J, CounterRng& rng, double scale = 1.0);

}  // namespace hcsck
