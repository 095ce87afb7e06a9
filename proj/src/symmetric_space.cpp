#include "hcsck/symmetric_space.hpp"

#include <string>
#include <unsupported/Eigen/MatrixFunctions>

namespace hcsck {

namespace {

bool is_spd(const Mat& S) {
    Eigen::LLT<Mat> llt(0.5 * (S + S.transpose()));
    return llt.info() == Eigen::Success;
}

void require_square_even(const Mat& M, const char* what) {
    if (M.rows() != M.cols() || M.rows() == 0 || M.rows() % 2 != 0)
        throw std::invalid_argument(std::string(what) + ": expected a 2n x 2n matrix");
}

}  // namespace

Mat canonical_omega(int n) {
    if (n < 1) throw std::invalid_argument("canonical_omega: n must be >= 1");
    Mat W = Mat::Zero(2 * n, 2 * n);
    W.topRightCorner(n, n) = Mat::Identity(n, n);
    W.bottomLeftCorner(n, n) = -Mat::Identity(n, n);
    return W;
}

double symplectic_defect(const Mat& P) {
    const Mat W = canonical_omega(static_cast<int>(P.rows() / 2));
    return (P.transpose() * W * P - W).norm() / W.norm();
}

SymplecticMatrix::SymplecticMatrix(Mat P, double tol) : P_(std::move(P)) {
    require_square_even(P_, "SymplecticMatrix");
    if (symplectic_defect(P_) > tol * std::max(1.0, P_.squaredNorm() / P_.rows()))
        throw std::invalid_argument("SymplecticMatrix: P^T Omega P != Omega");
}

SymplecticMatrix SymplecticMatrix::identity(int n) { return SymplecticMatrix(Mat::Identity(2 * n, 2 * n)); }

SymplecticMatrix SymplecticMatrix::operator*(const SymplecticMatrix& o) const {
    if (o.n() != n()) throw std::invalid_argument("SymplecticMatrix: dimension mismatch");
    return SymplecticMatrix(P_ * o.P_, 1e-6);
}

SymplecticMatrix SymplecticMatrix::inverse() const {
    // P^{-1} = -Omega P^T Omega
    const Mat W = canonical_omega(n());
    return SymplecticMatrix(-W * P_.transpose() * W, 1e-6);
}

SiegelPoint::SiegelPoint(CMat Z, double tol) : Z_(std::move(Z)) {
    if (Z_.rows() != Z_.cols() || Z_.rows() == 0)
        throw std::invalid_argument("SiegelPoint: expected a square matrix");
    if ((Z_ - Z_.transpose()).norm() > tol * (1.0 + Z_.norm()))
        throw std::invalid_argument("SiegelPoint: Z is not symmetric");
    if (!is_spd(Z_.imag())) throw std::invalid_argument("SiegelPoint: Im Z is not positive definite");
}

SiegelPoint SiegelPoint::base(int n) {
    return SiegelPoint(std::complex<double>(0.0, 1.0) * CMat::Identity(n, n));
}

ACPoint::ACPoint(Mat J, double tol) : J_(std::move(J)) {
    require_square_even(J_, "ACPoint");
    const int n2 = static_cast<int>(J_.rows());
    const Mat W = canonical_omega(n2 / 2);
    const double scale = 1.0 + J_.squaredNorm() / n2;
    if ((J_ * J_ + Mat::Identity(n2, n2)).norm() > tol * scale * std::sqrt(n2))
        throw std::invalid_argument("ACPoint: J^2 != -Id");
    if ((J_.transpose() * W * J_ - W).norm() > tol * scale * std::sqrt(n2))
        throw std::invalid_argument("ACPoint: J is not symplectic");
    const Mat g = W * J_;
    if ((g - g.transpose()).norm() > tol * scale * std::sqrt(n2) || !is_spd(g))
        throw std::invalid_argument("ACPoint: Omega J is not symmetric positive definite");
}

ACPoint ACPoint::base(int n) { return ACPoint(-canonical_omega(n)); }

bool ACPoint::is_base(double tol) const {
    const Mat W = canonical_omega(n());
    return (J_ + W).norm() <= tol * W.norm();
}

ACTangent::ACTangent(Mat A, ACPoint base, double tol) : A_(std::move(A)), base_(std::move(base)) {
    const Mat& J = base_.J();
    if (A_.rows() != J.rows() || A_.cols() != J.cols())
        throw std::invalid_argument("ACTangent: dimension mismatch with base");
    const double scale = 1.0 + A_.norm() * J.norm();
    if ((A_ * J + J * A_).norm() > tol * scale) throw std::invalid_argument("ACTangent: AJ + JA != 0");
    const Mat gA = canonical_omega(base_.n()) * J * A_;
    if ((gA - gA.transpose()).norm() > tol * scale)
        throw std::invalid_argument("ACTangent: (Omega J) A is not symmetric");
}

Mat spd_sqrt(const Mat& S) {
    Eigen::SelfAdjointEigenSolver<Mat> es(0.5 * (S + S.transpose()));
    if (es.info() != Eigen::Success || es.eigenvalues().minCoeff() <= 0.0)
        throw NumericalFailure("spd_sqrt: matrix is not positive definite");
    return es.eigenvectors() * es.eigenvalues().cwiseSqrt().asDiagonal() * es.eigenvectors().transpose();
}

SiegelPoint moebius_act(const SymplecticMatrix& P, const SiegelPoint& Z) {
    const int n = Z.n();
    if (P.n() != n) throw std::invalid_argument("moebius_act: dimension mismatch");
    const CMat M = P.matrix().cast<std::complex<double>>();
    const CMat num = M.topLeftCorner(n, n) * Z.Z() + M.topRightCorner(n, n);
    const CMat den = M.bottomLeftCorner(n, n) * Z.Z() + M.bottomRightCorner(n, n);
    Eigen::FullPivLU<CMat> lu(den);
    if (!lu.isInvertible()) throw NumericalFailure("moebius_act: CZ + D is singular");
    // X den = num  <=>  den^T X^T = num^T
    const CMat X = den.transpose().fullPivLu().solve(num.transpose()).transpose();
    return SiegelPoint(X, 1e-8);
}

Mat ac_normalizer(const ACPoint& J) {
    return spd_sqrt(canonical_omega(J.n()) * J.J());
}

SiegelPoint ac_to_siegel(const ACPoint& J) {
    const Mat P = ac_normalizer(J);
    return moebius_act(SymplecticMatrix(P.inverse(), 1e-8), SiegelPoint::base(J.n()));
}

ACPoint siegel_to_ac(const SiegelPoint& Z) {
    const int n = Z.n();
    const Mat X = Z.Z().real();
    const Mat Yh = spd_sqrt(Z.Z().imag());
    const Mat Yhi = Yh.inverse();
    Mat P = Mat::Zero(2 * n, 2 * n);
    P.topLeftCorner(n, n) = Yh;
    P.topRightCorner(n, n) = X * Yhi;
    P.bottomRightCorner(n, n) = Yhi;
    return ACPoint(P * (-canonical_omega(n)) * P.inverse(), 1e-8);
}

double ac_metric(const ACTangent& A, const ACTangent& B) {
    if ((A.base().J() - B.base().J()).norm() > kMembershipTol * (1.0 + A.base().J().norm()))
        throw std::invalid_argument("ac_metric: tangents have different base points");
    return 0.5 * (A.A() * B.A()).trace();
}

ACTangent ac_complex_structure(const ACTangent& A) {
    return ACTangent(A.base().J() * A.A(), A.base());
}

Mat curvature_at_base(const ACTangent& A, const ACTangent& B, const ACTangent& C) {
    if (!A.base().is_base() || !B.base().is_base() || !C.base().is_base())
        throw std::invalid_argument("curvature_at_base: tangents must sit at -Omega_0");
    const Mat AB = A.A() * B.A() - B.A() * A.A();
    return -0.25 * (AB * C.A() - C.A() * AB);
}

ACPoint transport(const SymplecticMatrix& Q, const ACPoint& J) {
    return ACPoint(Q.matrix() * J.J() * Q.inverse().matrix(), 1e-8);
}

ACTangent transport(const SymplecticMatrix& Q, const ACTangent& A) {
    const Mat Qi = Q.inverse().matrix();
    return ACTangent(Q.matrix() * A.A() * Qi, transport(Q, A.base()), 1e-8);
}

ACTangent to_base(const ACTangent& A) {
    if (A.base().is_base()) return A;
    const Mat P = ac_normalizer(A.base());
    return ACTangent(P * A.A() * P.inverse(), ACPoint::base(A.n()), 1e-8);
}

Mat random_sp_algebra(int n, CounterRng& rng, double scale) {
    Mat H(2 * n, 2 * n);
    for (int i = 0; i < 2 * n; ++i)
        for (int j = i; j < 2 * n; ++j) H(i, j) = H(j, i) = rng.uniform(-scale, scale);
    // S = Omega H satisfies S^T Omega + Omega S = 0
    return canonical_omega(n) * H;
}

SymplecticMatrix random_symplectic(int n, CounterRng& rng, double scale) {
    return SymplecticMatrix(random_sp_algebra(n, rng, scale).exp(), 1e-8);
}

SymplecticMatrix random_unitary(int n, CounterRng& rng) {
    // exp of a random skew-Hermitian matrix
    CMat K(n, n);
    for (int i = 0; i < n; ++i) {
        K(i, i) = std::complex<double>(0.0, rng.uniform(-1.0, 1.0));
        for (int j = i + 1; j < n; ++j) {
            const std::complex<double> v(rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0));
            K(i, j) = v;
            K(j, i) = -std::conj(v);
        }
    }
    const CMat U = K.exp();
    Mat P(2 * n, 2 * n);
    P.topLeftCorner(n, n) = U.real();
    P.topRightCorner(n, n) = U.imag();
    P.bottomLeftCorner(n, n) = -U.imag();
    P.bottomRightCorner(n, n) = U.real();
    return SymplecticMatrix(P, 1e-8);
}

ACTangent random_base_tangent(int n, CounterRng& rng, double scale) {
    Mat P(n, n), Q(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j) {
            P(i, j) = P(j, i) = rng.uniform(-scale, scale);
            Q(i, j) = Q(j, i) = rng.uniform(-scale, scale);
        }
    Mat A(2 * n, 2 * n);
    A << P, Q, Q, -P;
    return ACTangent(A, ACPoint::base(n));
}

ACPoint random_ac_point(int n, CounterRng& rng, double scale) {
    return transport(random_symplectic(n, rng, scale), ACPoint::base(n));
}

ACTangent random_tangent(const ACPoint& J, CounterRng& rng, double scale) {
    const ACTangent A0 = random_base_tangent(J.n(), rng, scale);
    const Mat P = ac_normalizer(J);
    return ACTangent(P.inverse() * A0.A() * P, J, 1e-8);
}

}  // namespace hcsck
