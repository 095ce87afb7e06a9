#pragma once

#include <array>

#include "hcsck/symmetric_space.hpp"

namespace hcsck {

// Inputs closer than this to the edge of the validity domain are rejected.
inline constexpr double kValidityMargin = 1e-12;

// (1/x)(sqrt(1+x) - 1 - log((1 + sqrt(1+x))/2)), with f(0) = 1/4.
double bg_f(double x);

struct KInvariants {
    double k1 = 0, k2 = 0, k3 = 0, k4 = 0;
};

struct SpectralData {
    double delta_plus = 0, delta_minus = 0;
    double trace_sq = 0;  // 1/2 Tr(A^2)
    double det = 0;
};

struct KernelValues {
    double rho = 0;
    double psi = 0;
    double psi_tilde = 0;  // n = 2 only
};

using Mat6 = Eigen::Matrix<double, 6, 6>;
using Vec6 = Eigen::Matrix<double, 6, 1>;

// Basis E_1..E_6 of the tangent space at -Omega_0 in AC+(4).
const std::array<Eigen::Matrix4d, 6>& e_basis();
// Gram matrix of 1/2 Tr on E_1..E_6: diag(1, 2, 1, 1, 2, 1).
Mat6 e_gram();
Vec6 e_coordinates(const Eigen::Matrix4d& A);

// For tangents not at -Omega_0 these are taken after transport to -Omega_0.
KInvariants k_invariants(const ACTangent& A);
// Column j holds the E-coordinates of -1/2 (A^2 E_j + E_j A^2).
Mat6 xi_matrix_n2(const ACTangent& A);

SpectralData spectral_data_n2(const ACTangent& A);
// -1/2 (T, T + sqrt(T^2 - 4d), T - sqrt(T^2 - 4d)), each of multiplicity 2.
std::array<double, 3> eigenvalues_n2(const ACTangent& A);

double rho_n1(const ACTangent& A);
double rho_n2(const ACTangent& A);
// Tr(A Adot) psi - 4 Tr(adj(A) Adot) psi_tilde
double drho_n2(const ACTangent& A, const Mat& Adot);

KernelValues psi_psitilde(const ACTangent& A);
// n = 1 in terms of the Higgs-field norm: 1/(1 + sqrt(1 - |alpha|^2 / 4)).
double psi_n1_from_alpha_norm(double alpha_norm);

Mat adjugate(const Mat& A);
ACTangent adjugate_tangent(const ACTangent& A);

}  // namespace hcsck
