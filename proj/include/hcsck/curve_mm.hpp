#pragma once

#include <Eigen/Dense>
#include <complex>
#include <functional>
#include <vector>

namespace hcsck {

using Mat = Eigen::MatrixXd;
using CMat = Eigen::MatrixXcd;
using cplx = std::complex<double>;

// Fourier differentiation on the periodic grid x_i = 2 pi i / N, N even.
// Grid arrays are indexed (i, j) <-> (x_i, y_j).
class SpectralTorus {
public:
    explicit SpectralTorus(int N);

    int N() const { return N_; }
    static double node(int N, int i);
    const Mat& d1() const { return D1_; }
    const Mat& d2() const { return D2_; }

    Mat dx(const Mat& f) const { return D1_ * f; }
    Mat dy(const Mat& f) const { return f * D1_.transpose(); }
    Mat laplacian(const Mat& f) const { return D2_ * f + f * D2_.transpose(); }
    CMat dx(const CMat& f) const;
    CMat dy(const CMat& f) const;
    // d/dz = (d/dx - i d/dy) / 2, d/dzbar = (d/dx + i d/dy) / 2
    CMat dz(const CMat& f) const;
    CMat dzbar(const CMat& f) const;
    // Mean-zero solution of laplacian(Y) = G; the mean of G is ignored.
    Mat solve_poisson(const Mat& G) const;

private:
    int N_;
    Mat D1_, D2_;
    Mat V_;
    Eigen::VectorXd lambda_;
};

class TorusField {
public:
    TorusField(Mat u, CMat tau);
    static TorusField sample(int N, const std::function<double(double, double)>& u,
                             const std::function<cplx(double, double)>& tau);

    int N() const { return static_cast<int>(u_.rows()); }
    const Mat& u() const { return u_; }
    const CMat& tau() const { return tau_; }
    // |tau|^2 e^{-4u}
    Mat tau_norm_sq() const;

private:
    Mat u_;
    CMat tau_;
};

struct CurveResidual {
    Mat real_mm;
    CMat complex_mm;
    double weighted_mean = 0;
};

// Kaehler (Gauss) curvature of e^{2u}(dx^2 + dy^2): -e^{-2u} lap u.
Mat scalar_curvature_conformal(const TorusField& f);
double area_weighted_mean(const TorusField& f, const Mat& values);
// 2s - 2 s_hat + Delta log(1 + sqrt(1 - |tau|^2)) + div(psi Q), Delta = -e^{-2u} lap.
Mat curve_real_mm(const TorusField& f);
// The div(psi Q) term alone.
Mat curve_q_term(const TorusField& f);
// -e^{-2u} d_z(e^{-2u} d_zbar tau)
CMat curve_complex_mm(const TorusField& f);
CurveResidual curve_residual(const TorusField& f);

struct CurveSolveOptions {
    enum class Linear { automatic, dense, spectral };
    double tol = 1e-9;
    int max_iter = 30;
    int max_halvings = 30;
    Linear linear = Linear::automatic;
};

struct CurveSolveReport {
    Mat u;
    bool converged = false;
    int iterations = 0;
    double residual_sup = 0;
    std::vector<double> history;
    std::string message;
};

CurveSolveReport solve_curve(const CMat& tau, const Mat& u0, const CurveSolveOptions& opt = {});

}  // namespace hcsck
