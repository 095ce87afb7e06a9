#include "hcsck/bg_kernel.hpp"

#include <cmath>
#include <string>

namespace hcsck {

namespace {

void require_n(const ACTangent& A, int n, const char* what) {
    if (A.n() != n) throw std::invalid_argument(std::string(what) + ": wrong dimension");
}

Eigen::Matrix4d sym4(std::initializer_list<std::tuple<int, int, double>> entries) {
    Eigen::Matrix4d M = Eigen::Matrix4d::Zero();
    for (auto [i, j, v] : entries) M(i, j) = v;
    return M;
}

// sqrt(1 - delta) with the domain check
double root_one_minus(double delta, const char* what) {
    if (!(delta < 1.0 - kValidityMargin))
        throw std::domain_error(std::string(what) + ": delta_plus outside the validity domain");
    return std::sqrt(1.0 - delta);
}

}  // namespace

double bg_f(double x) {
    if (!(x > -1.0)) throw std::domain_error("bg_f: x must exceed -1");
    if (std::abs(x) < 1e-6) return 0.25 - x / 32.0 + x * x / 96.0;
    const double s = std::sqrt(1.0 + x);
    return (s - 1.0 - std::log((1.0 + s) / 2.0)) / x;
}

const std::array<Eigen::Matrix4d, 6>& e_basis() {
    static const std::array<Eigen::Matrix4d, 6> E = {
        sym4({{0, 0, 1}, {2, 2, -1}}),
        sym4({{0, 1, 1}, {1, 0, 1}, {2, 3, -1}, {3, 2, -1}}),
        sym4({{1, 1, 1}, {3, 3, -1}}),
        sym4({{0, 2, 1}, {2, 0, 1}}),
        sym4({{0, 3, 1}, {1, 2, 1}, {2, 1, 1}, {3, 0, 1}}),
        sym4({{1, 3, 1}, {3, 1, 1}}),
    };
    return E;
}

Mat6 e_gram() {
    Mat6 G = Mat6::Zero();
    G.diagonal() << 1, 2, 1, 1, 2, 1;
    return G;
}

Vec6 e_coordinates(const Eigen::Matrix4d& A) {
    const auto& E = e_basis();
    Vec6 b;
    for (int j = 0; j < 6; ++j) b[j] = 0.5 * (A * E[j]).trace();
    return e_gram().diagonal().cwiseInverse().asDiagonal() * b;
}

KInvariants k_invariants(const ACTangent& A) {
    require_n(A, 2, "k_invariants");
    const Mat B = to_base(A).A();
    const double p11 = B(0, 0), p12 = B(0, 1), p22 = B(1, 1);
    const double q11 = B(0, 2), q12 = B(0, 3), q22 = B(1, 3);
    KInvariants k;
    k.k1 = p11 * p11 + p12 * p12 + q11 * q11 + q12 * q12;
    k.k2 = p12 * (p11 + p22) + q12 * (q11 + q22);
    k.k3 = p12 * p12 + p22 * p22 + q12 * q12 + q22 * q22;
    k.k4 = q12 * (p22 - p11) + p12 * (q11 - q22);
    return k;
}

Mat6 xi_matrix_n2(const ACTangent& A) {
    const auto [k1, k2, k3, k4] = k_invariants(A);
    Mat6 M;
    M << 2 * k1, 2 * k2, 0, 0, -2 * k4, 0,
         k2, k1 + k3, k2, k4, 0, -k4,
         0, 2 * k2, 2 * k3, 0, 2 * k4, 0,
         0, 2 * k4, 0, 2 * k1, 2 * k2, 0,
         -k4, 0, k4, k2, k1 + k3, k2,
         0, -2 * k4, 0, 0, 2 * k2, 2 * k3;
    return -0.5 * M;
}

SpectralData spectral_data_n2(const ACTangent& A) {
    require_n(A, 2, "spectral_data_n2");
    SpectralData s;
    s.trace_sq = 0.5 * (A.A() * A.A()).trace();
    s.det = A.A().determinant();
    const double T = s.trace_sq;
    const double disc = std::max(0.0, T * T - 4.0 * s.det);
    s.delta_plus = 0.5 * (T + std::sqrt(disc));
    s.delta_minus = s.delta_plus > 0.0 ? s.det / s.delta_plus : 0.0;
    return s;
}

std::array<double, 3> eigenvalues_n2(const ACTangent& A) {
    const SpectralData s = spectral_data_n2(A);
    return {-0.5 * s.trace_sq, -s.delta_plus, -s.delta_minus};
}

double rho_n1(const ACTangent& A) {
    require_n(A, 1, "rho_n1");
    const double d = A.A().determinant();
    if (!(d > -1.0 + kValidityMargin)) throw std::domain_error("rho_n1: det A outside the validity domain");
    const double s = std::sqrt(1.0 + d);
    return 1.0 - s + std::log((1.0 + s) / 2.0);
}

double rho_n2(const ACTangent& A) {
    const SpectralData s = spectral_data_n2(A);
    const double sp = root_one_minus(s.delta_plus, "rho_n2");
    const double sm = root_one_minus(s.delta_minus, "rho_n2");
    return 2.0 - sp - sm + std::log(0.5 + 0.5 * sp) + std::log(0.5 + 0.5 * sm);
}

KernelValues psi_psitilde(const ACTangent& A) {
    KernelValues kv;
    if (A.n() == 1) {
        const double d = A.A().determinant();
        kv.rho = rho_n1(A);
        kv.psi = 1.0 / (1.0 + std::sqrt(1.0 + d));
        return kv;
    }
    require_n(A, 2, "psi_psitilde");
    const SpectralData s = spectral_data_n2(A);
    // sigma = sqrt(4 - 4 delta)
    const double sp = 2.0 * root_one_minus(s.delta_plus, "psi_psitilde");
    const double sm = 2.0 * root_one_minus(s.delta_minus, "psi_psitilde");
    kv.rho = rho_n2(A);
    kv.psi = 1.0 / (sp + sm);
    kv.psi_tilde = kv.psi / ((2.0 + sp) * (2.0 + sm));
    return kv;
}

double psi_n1_from_alpha_norm(double alpha_norm) {
    const double x = 1.0 - 0.25 * alpha_norm * alpha_norm;
    if (!(x > kValidityMargin)) throw std::domain_error("psi_n1_from_alpha_norm: |alpha| too large");
    return 1.0 / (1.0 + std::sqrt(x));
}

double drho_n2(const ACTangent& A, const Mat& Adot) {
    if (Adot.rows() != 4 || Adot.cols() != 4) throw std::invalid_argument("drho_n2: Adot must be 4x4");
    const KernelValues kv = psi_psitilde(A);
    return (A.A() * Adot).trace() * kv.psi - 4.0 * (adjugate(A.A()) * Adot).trace() * kv.psi_tilde;
}

Mat adjugate(const Mat& A) {
    const Eigen::Index n = A.rows();
    if (n != A.cols()) throw std::invalid_argument("adjugate: square matrix expected");
    Mat adj(n, n);
    if (n == 1) {
        adj(0, 0) = 1.0;
        return adj;
    }
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j) {
            Mat minor(n - 1, n - 1);
            for (Eigen::Index r = 0, rr = 0; r < n; ++r) {
                if (r == j) continue;
                for (Eigen::Index c = 0, cc = 0; c < n; ++c) {
                    if (c == i) continue;
                    minor(rr, cc++) = A(r, c);
                }
                ++rr;
            }
            adj(i, j) = ((i + j) % 2 == 0 ? 1.0 : -1.0) * minor.determinant();
        }
    return adj;
}

ACTangent adjugate_tangent(const ACTangent& A) {
    require_n(A, 2, "adjugate_tangent");
    return ACTangent(adjugate(A.A()), A.base(), 1e-8);
}

}  // namespace hcsck
