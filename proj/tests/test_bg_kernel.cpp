#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "hcsck/bg_kernel.hpp"

using namespace hcsck;

namespace {

Eigen::Matrix4d unit(std::initializer_list<std::tuple<int, int, double>> entries) {
    Eigen::Matrix4d M = Eigen::Matrix4d::Zero();
    for (auto [i, j, v] : entries) M(i, j) = v;
    return M;
}

// Independent copy of the basis of tangents at -Omega_0 and brute-force operator matrix.
std::vector<Eigen::Matrix4d> basis() {
    return {unit({{0, 0, 1}, {2, 2, -1}}),
            unit({{0, 1, 1}, {1, 0, 1}, {2, 3, -1}, {3, 2, -1}}),
            unit({{1, 1, 1}, {3, 3, -1}}),
            unit({{0, 2, 1}, {2, 0, 1}}),
            unit({{0, 3, 1}, {1, 2, 1}, {2, 1, 1}, {3, 0, 1}}),
            unit({{1, 3, 1}, {3, 1, 1}})};
}

Eigen::Matrix<double, 6, 6> gram() {
    const auto E = basis();
    Eigen::Matrix<double, 6, 6> G;
    for (int i = 0; i < 6; ++i)
        for (int j = 0; j < 6; ++j) G(i, j) = 0.5 * (E[i] * E[j]).trace();
    return G;
}

Eigen::Matrix<double, 6, 1> coords(const Eigen::Matrix4d& B) {
    const auto E = basis();
    Eigen::Matrix<double, 6, 1> b;
    for (int i = 0; i < 6; ++i) b[i] = 0.5 * (B * E[i]).trace();
    return gram().inverse() * b;
}

Eigen::Matrix<double, 6, 6> brute_xi(const Eigen::Matrix4d& A) {
    const auto E = basis();
    Eigen::Matrix<double, 6, 6> M;
    for (int j = 0; j < 6; ++j) M.col(j) = coords(-0.5 * (A * A * E[j] + E[j] * A * A));
    return M;
}

double f_ref(double x) {
    const double s = std::sqrt(1 + x);
    return (s - 1 - std::log((1 + s) / 2)) / x;
}

// h(f(M) A, A) through a general eigendecomposition.
double spectral_rho_ref(const Eigen::Matrix4d& A) {
    const auto M = brute_xi(A);
    Eigen::EigenSolver<Eigen::Matrix<double, 6, 6>> es(M);
    const Eigen::Matrix<std::complex<double>, 6, 6> V = es.eigenvectors();
    Eigen::Matrix<std::complex<double>, 6, 1> fv;
    for (int i = 0; i < 6; ++i) fv[i] = f_ref(es.eigenvalues()[i].real());
    const Eigen::Matrix<double, 6, 1> a = coords(A);
    const Eigen::Matrix<std::complex<double>, 6, 1> fa = V * fv.asDiagonal() * V.inverse() * a.cast<std::complex<double>>();
    return (a.transpose() * gram() * fa.real())(0, 0);
}

ACTangent base_tangent(const Eigen::Matrix2d& P, const Eigen::Matrix2d& Q) {
    Mat A(4, 4);
    A << P, Q, Q, -P;
    return ACTangent(A, ACPoint::base(2));
}

ACTangent small_tangent(CounterRng& rng, double radius = 0.9) {
    const ACPoint J = random_ac_point(2, rng, 0.5);
    const ACTangent A = random_tangent(J, rng);
    const double r = radius * rng.uniform() / std::sqrt(ac_metric(A, A));
    return ACTangent(A.A() * r, J);
}

}  // namespace

TEST(BgF, Values) {
    EXPECT_DOUBLE_EQ(bg_f(0.0), 0.25);
    EXPECT_NEAR(bg_f(1e-7), 0.249999996875000104, 1e-16);
    EXPECT_NEAR(bg_f(-1e-7), f_ref(-1e-7), 1e-9);
    EXPECT_NEAR(bg_f(3.0), 0.198178297297278539, 1e-15);
    EXPECT_NEAR(bg_f(-0.75), 0.283090570064292097, 1e-15);
    EXPECT_THROW(bg_f(-1.0), std::domain_error);
}

TEST(BgKernel, GramMatrix) {
    EXPECT_LT((e_gram() - gram()).cwiseAbs().maxCoeff(), 1e-15);
    Vec6 d;
    d << 1, 2, 1, 1, 2, 1;
    EXPECT_EQ(Vec6(e_gram().diagonal()), d);
}

TEST(BgKernel, InvariantIdentities) {
    CounterRng rng(21);
    for (int s = 0; s < 200; ++s) {
        const ACTangent A = small_tangent(rng);
        const Mat Ab = to_base(A).A();
        const KInvariants k = k_invariants(A);
        EXPECT_NEAR(k.k1 + k.k3, 0.5 * (Ab * Ab).trace(), 1e-12);
        EXPECT_NEAR(k.k1 * k.k3 - k.k2 * k.k2 - k.k4 * k.k4, Ab.determinant(), 1e-12);
        const SpectralData d = spectral_data_n2(A);
        EXPECT_NEAR(d.delta_plus + d.delta_minus, d.trace_sq, 1e-10);
        EXPECT_NEAR(d.delta_plus * d.delta_minus, d.det, 1e-10);
        EXPECT_GE(d.delta_plus, d.delta_minus);
    }
}

TEST(BgKernel, XiMatrixMatchesBruteForce) {
    EXPECT_EQ(xi_matrix_n2(ACTangent(Mat::Zero(4, 4), ACPoint::base(2))).cwiseAbs().maxCoeff(), 0.0);
    CounterRng rng(22);
    const Eigen::Matrix<double, 6, 6> G = gram();
    for (int s = 0; s < 200; ++s) {
        const ACTangent A = small_tangent(rng);
        const Mat6 M = xi_matrix_n2(A);
        EXPECT_LT((M - brute_xi(to_base(A).A())).cwiseAbs().maxCoeff(), 1e-12);
        const Mat6 GM = G * M;
        EXPECT_LT((GM - GM.transpose()).cwiseAbs().maxCoeff(), 1e-12);
    }
}

TEST(BgKernel, EigenvaluesMatchDenseSolver) {
    for (double v : eigenvalues_n2(ACTangent(Mat::Zero(4, 4), ACPoint::base(2)))) EXPECT_EQ(v, 0.0);
    CounterRng rng(23);
    double worst = 0;
    for (int s = 0; s < 1000; ++s) {
        const ACTangent A = small_tangent(rng, 1.0);
        Eigen::EigenSolver<Eigen::Matrix<double, 6, 6>> es(brute_xi(to_base(A).A()));
        std::vector<double> num, cf;
        for (int i = 0; i < 6; ++i) num.push_back(es.eigenvalues()[i].real());
        for (double v : eigenvalues_n2(A)) cf.insert(cf.end(), {v, v});
        std::sort(num.begin(), num.end());
        std::sort(cf.begin(), cf.end());
        for (int i = 0; i < 6; ++i) worst = std::max(worst, std::abs(num[i] - cf[i]));
    }
    EXPECT_LT(worst, 1e-9);
}

TEST(BgKernel, RankDeficientEigenvalues) {
    Eigen::Matrix2d P, Q = Eigen::Matrix2d::Zero();
    P << 0.5, 0, 0, 0;
    const ACTangent A = base_tangent(P, Q);
    EXPECT_NEAR(A.A().determinant(), 0.0, 1e-15);
    const double T = 0.25;
    auto ev = eigenvalues_n2(A);
    std::sort(ev.begin(), ev.end());
    EXPECT_NEAR(ev[0], -T, 1e-15);
    EXPECT_NEAR(ev[1], -T / 2, 1e-15);
    EXPECT_NEAR(ev[2], 0.0, 1e-15);
    EXPECT_LT(adjugate(A.A()).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(BgKernel, RhoN1) {
    Mat Z = Mat::Zero(2, 2);
    EXPECT_EQ(rho_n1(ACTangent(Z, ACPoint::base(1))), 0.0);
    Mat A(2, 2);
    const double p = std::sqrt(0.75);
    A << p, 0, 0, -p;
    EXPECT_NEAR(rho_n1(ACTangent(A, ACPoint::base(1))), 0.212317927548219073, 1e-15);
    CounterRng rng(24);
    for (int s = 0; s < 100; ++s) {
        const ACPoint J = random_ac_point(1, rng, 0.5);
        ACTangent T = random_tangent(J, rng);
        T = ACTangent(T.A() * (0.9 * rng.uniform() / std::sqrt(ac_metric(T, T))), J);
        const Mat Tb = to_base(T).A();
        const double d = Tb.determinant();
        EXPECT_NEAR(rho_n1(T), f_ref(d) * 0.5 * (Tb * Tb).trace(), 1e-12);
    }
    A << 1.0, 0, 0, -1.0;
    EXPECT_THROW(rho_n1(ACTangent(A, ACPoint::base(1))), std::domain_error);
}

TEST(BgKernel, RhoN2MatchesSpectralAssembly) {
    EXPECT_EQ(rho_n2(ACTangent(Mat::Zero(4, 4), ACPoint::base(2))), 0.0);
    CounterRng rng(25);
    for (int s = 0; s < 200; ++s) {
        const ACTangent A = small_tangent(rng);
        EXPECT_NEAR(rho_n2(A), spectral_rho_ref(to_base(A).A()), 1e-11);
    }
}

TEST(BgKernel, RhoN2SymmetricSpectrum) {
    const double a = 0.6, delta = a * a;
    const ACTangent A = base_tangent(a * Eigen::Matrix2d::Identity(), Eigen::Matrix2d::Zero());
    const SpectralData d = spectral_data_n2(A);
    EXPECT_NEAR(d.delta_plus, delta, 1e-15);
    EXPECT_NEAR(d.delta_minus, delta, 1e-15);
    const double s = std::sqrt(1 - delta);
    EXPECT_NEAR(rho_n2(A), 2 * (1 - s + std::log(0.5 + 0.5 * s)), 1e-15);
}

TEST(BgKernel, RhoN2DomainAndInvariance) {
    const ACTangent big = base_tangent(1.01 * Eigen::Matrix2d::Identity(), Eigen::Matrix2d::Zero());
    EXPECT_THROW(rho_n2(big), std::domain_error);
    CounterRng rng(26);
    for (int s = 0; s < 100; ++s) {
        const ACTangent A = small_tangent(rng);
        const SymplecticMatrix h = random_symplectic(2, rng, 0.4);
        EXPECT_NEAR(rho_n2(transport(h, A)), rho_n2(A), 1e-9);
    }
}

TEST(BgKernel, DrhoMatchesFiniteDifferences) {
    CounterRng rng(27);
    for (int s = 0; s < 500; ++s) {
        const ACTangent A = small_tangent(rng, 0.85);
        const Mat D = random_tangent(A.base(), rng).A();
        const double h = 1e-5;
        const double fd = (rho_n2(ACTangent(A.A() + h * D, A.base())) - rho_n2(ACTangent(A.A() - h * D, A.base()))) / (2 * h);
        const double an = drho_n2(A, D);
        EXPECT_LT(std::abs(fd - an), 1e-6 * std::max(std::abs(an), 1e-3));
    }
    const ACTangent A = small_tangent(rng);
    EXPECT_EQ(drho_n2(A, Mat::Zero(4, 4)), 0.0);
}

TEST(BgKernel, DrhoDegenerateDeterminant) {
    Eigen::Matrix2d P, Q = Eigen::Matrix2d::Zero();
    P << 0.5, 0.1, 0.1, 0.02;
    const ACTangent A = base_tangent(P, Q);
    ASSERT_NEAR(A.A().determinant(), 0.0, 1e-15);
    CounterRng rng(28);
    const Mat D = random_base_tangent(2, rng).A();
    EXPECT_NEAR(drho_n2(A, D), (A.A() * D).trace() * psi_psitilde(A).psi, 1e-14);
}

TEST(BgKernel, PsiValues) {
    const KernelValues z2 = psi_psitilde(ACTangent(Mat::Zero(4, 4), ACPoint::base(2)));
    EXPECT_DOUBLE_EQ(z2.psi, 0.25);
    EXPECT_DOUBLE_EQ(z2.psi_tilde, 1.0 / 64);
    EXPECT_DOUBLE_EQ(psi_psitilde(ACTangent(Mat::Zero(2, 2), ACPoint::base(1))).psi, 0.5);
    EXPECT_DOUBLE_EQ(psi_n1_from_alpha_norm(0.0), 0.5);
    CounterRng rng(29);
    for (int s = 0; s < 100; ++s) {
        const ACTangent A = random_tangent(random_ac_point(1, rng, 0.5), rng, 0.3);
        const double d = to_base(A).A().determinant();
        const KernelValues k = psi_psitilde(A);
        EXPECT_GT(k.psi, 0.0);
        EXPECT_NEAR(k.psi, psi_n1_from_alpha_norm(2 * std::sqrt(-d)), 1e-14);
        EXPECT_NEAR(k.psi, 1 / (1 + std::sqrt(1 + d)), 1e-14);
    }
    for (int s = 0; s < 100; ++s) {
        const KernelValues k = psi_psitilde(small_tangent(rng));
        EXPECT_GT(k.psi, 0.0);
        EXPECT_GT(k.psi_tilde, 0.0);
    }
}

TEST(BgKernel, Adjugate) {
    EXPECT_EQ(adjugate(Mat::Zero(4, 4)).cwiseAbs().maxCoeff(), 0.0);
    CounterRng rng(30);
    for (int s = 0; s < 100; ++s) {
        const ACTangent A = random_tangent(random_ac_point(2, rng, 0.5), rng);
        const Mat adj = adjugate(A.A());
        EXPECT_LT((A.A() * adj - A.A().determinant() * Mat::Identity(4, 4)).cwiseAbs().maxCoeff(),
                  1e-10 * (1 + std::pow(A.A().norm(), 4)));
        // constructor validates anticommutation with J and symmetry against g_J
        EXPECT_NO_THROW(adjugate_tangent(A));
    }
}
