#include "hcsck/curve_mm.hpp"

#include <cmath>
#include <numbers>
#include <limits>
#include <stdexcept>
#include <string>

namespace hcsck {

namespace {

constexpr cplx kI(0.0, 1.0);

Mat exp_scaled(const Mat& u, double k) { return (k * u.array()).exp().matrix(); }

double sup_norm(const Mat& r) { return r.cwiseAbs().maxCoeff(); }

// d/du log(1 + sqrt(1 - |tau|^2 e^{-4u}))
Mat dlog_term_du(const Mat& n2) {
    const Eigen::ArrayXXd w = (1.0 - n2.array()).sqrt();
    return (2.0 * n2.array() / (w * (1.0 + w))).matrix();
}

Mat log_term(const Mat& n2) { return (1.0 + (1.0 - n2.array()).sqrt()).log().matrix(); }

void require_tau_norm(const Mat& n2, const char* what) {
    if (!(n2.maxCoeff() < 1.0)) throw std::domain_error(std::string(what) + ": |tau|_g >= 1 somewhere");
}

}  // namespace

SpectralTorus::SpectralTorus(int N) : N_(N), D1_(N, N), D2_(N, N) {
    if (N < 8 || N % 2 != 0) throw std::invalid_argument("SpectralTorus: N must be even and >= 8");
    const double h = 2.0 * std::numbers::pi / N;
    for (int i = 0; i < N; ++i)
        for (int j = 0; j < N; ++j) {
            if (i == j) {
                D1_(i, j) = 0.0;
                D2_(i, j) = -std::numbers::pi * std::numbers::pi / (3.0 * h * h) - 1.0 / 6.0;
                continue;
            }
            const int k = i - j;
            const double sgn = (k % 2 == 0) ? 1.0 : -1.0;
            const double s = std::sin(k * h / 2.0);
            D1_(i, j) = 0.5 * sgn / std::tan(k * h / 2.0);
            D2_(i, j) = -0.5 * sgn / (s * s);
        }
    Eigen::SelfAdjointEigenSolver<Mat> es(0.5 * (D2_ + D2_.transpose()));
    V_ = es.eigenvectors();
    lambda_ = es.eigenvalues();
}

double SpectralTorus::node(int N, int i) { return 2.0 * std::numbers::pi * i / N; }

CMat SpectralTorus::dx(const CMat& f) const {
    return (D1_ * f.real()).cast<cplx>() + kI * (D1_ * f.imag()).cast<cplx>();
}

CMat SpectralTorus::dy(const CMat& f) const {
    return (f.real() * D1_.transpose()).cast<cplx>() + kI * (f.imag() * D1_.transpose()).cast<cplx>();
}

CMat SpectralTorus::dz(const CMat& f) const { return 0.5 * (dx(f) - kI * dy(f)); }

CMat SpectralTorus::dzbar(const CMat& f) const { return 0.5 * (dx(f) + kI * dy(f)); }

Mat SpectralTorus::solve_poisson(const Mat& G) const {
    Mat Gh = V_.transpose() * G * V_;
    const double zero_tol = 1e-8;
    for (int i = 0; i < N_; ++i)
        for (int j = 0; j < N_; ++j) {
            const double l = lambda_[i] + lambda_[j];
            Gh(i, j) = std::abs(l) < zero_tol ? 0.0 : Gh(i, j) / l;
        }
    Mat Y = V_ * Gh * V_.transpose();
    return Y.array() - Y.mean();
}

TorusField::TorusField(Mat u, CMat tau) : u_(std::move(u)), tau_(std::move(tau)) {
    const auto N = u_.rows();
    if (u_.cols() != N || tau_.rows() != N || tau_.cols() != N)
        throw std::invalid_argument("TorusField: u and tau must be N x N");
    if (N < 8 || N % 2 != 0) throw std::invalid_argument("TorusField: N must be even and >= 8");
}

TorusField TorusField::sample(int N, const std::function<double(double, double)>& u,
                              const std::function<cplx(double, double)>& tau) {
    if (N < 8 || N % 2 != 0) throw std::invalid_argument("TorusField: N must be even and >= 8");
    Mat U(N, N);
    CMat T(N, N);
    for (int i = 0; i < N; ++i)
        for (int j = 0; j < N; ++j) {
            const double x = SpectralTorus::node(N, i), y = SpectralTorus::node(N, j);
            U(i, j) = u(x, y);
            T(i, j) = tau(x, y);
        }
    return TorusField(U, T);
}

Mat TorusField::tau_norm_sq() const {
    return (tau_.array().abs2() * (-4.0 * u_.array()).exp()).matrix();
}

Mat scalar_curvature_conformal(const TorusField& f) {
    const SpectralTorus T(f.N());
    return -(exp_scaled(f.u(), -2.0).array() * T.laplacian(f.u()).array()).matrix();
}

double area_weighted_mean(const TorusField& f, const Mat& values) {
    const Mat w = exp_scaled(f.u(), 2.0);
    return (values.array() * w.array()).sum() / w.sum();
}

Mat curve_q_term(const TorusField& f) {
    const SpectralTorus T(f.N());
    const Mat n2 = f.tau_norm_sq();
    require_tau_norm(n2, "curve_q_term");
    const Eigen::ArrayXXd psi = 1.0 / (1.0 + (1.0 - n2.array()).sqrt());
    // V^z = e^{-6u} conj(tau) d_zbar tau, raised with the Hermitian inverse e^{-2u}
    const CMat Vz = (exp_scaled(f.u(), -6.0).array() * f.tau().array().conjugate() *
                     T.dzbar(f.tau()).array()).matrix();
    const CMat flux = (exp_scaled(f.u(), 2.0).array() * psi * Vz.array()).matrix();
    const Mat div = 2.0 * T.dz(flux).real();
    return (exp_scaled(f.u(), -2.0).array() * div.array()).matrix();
}

Mat curve_real_mm(const TorusField& f) {
    const SpectralTorus T(f.N());
    const Mat n2 = f.tau_norm_sq();
    require_tau_norm(n2, "curve_real_mm");
    const Mat em2u = exp_scaled(f.u(), -2.0);
    const Mat s = scalar_curvature_conformal(f);
    const double s_hat = area_weighted_mean(f, s);
    const Mat lap_log = -(em2u.array() * T.laplacian(log_term(n2)).array()).matrix();
    return (2.0 * (s.array() - s_hat) + lap_log.array()).matrix() + curve_q_term(f);
}

CMat curve_complex_mm(const TorusField& f) {
    const SpectralTorus T(f.N());
    const Eigen::ArrayXXcd em2u = exp_scaled(f.u(), -2.0).cast<cplx>().array();
    const CMat inner = (em2u * T.dzbar(f.tau()).array()).matrix();
    return (-em2u * T.dz(inner).array()).matrix();
}

CurveResidual curve_residual(const TorusField& f) {
    CurveResidual r;
    r.real_mm = curve_real_mm(f);
    r.complex_mm = curve_complex_mm(f);
    r.weighted_mean = area_weighted_mean(f, r.real_mm);
    return r;
}

CurveSolveReport solve_curve(const CMat& tau, const Mat& u0, const CurveSolveOptions& opt) {
    TorusField start(u0.array() - u0.mean(), tau);
    const int N = start.N();
    const SpectralTorus T(N);
    const double holo_scale = 1.0 + tau.cwiseAbs().maxCoeff();
    if (T.dzbar(tau).cwiseAbs().maxCoeff() > 1e-10 * holo_scale)
        throw std::invalid_argument("solve_curve: tau must be holomorphic");
    require_tau_norm(start.tau_norm_sq(), "solve_curve");

    auto linear = opt.linear;
    if (linear == CurveSolveOptions::Linear::automatic)
        linear = N <= 32 ? CurveSolveOptions::Linear::dense : CurveSolveOptions::Linear::spectral;

    CurveSolveReport rep;
    Mat u = start.u();
    auto residual_of = [&](const Mat& v) { return curve_real_mm(TorusField(v, tau)); };
    double res = sup_norm(residual_of(u));
    rep.history.push_back(res);

    const Eigen::Index n = static_cast<Eigen::Index>(N) * N;
    Mat lap;
    if (linear == CurveSolveOptions::Linear::dense) {
        lap = Mat::Zero(n, n);
        // column-major vec: x index fastest
        for (int a = 0; a < N; ++a)
            for (int b = 0; b < N; ++b) {
                if (a == b) lap.block(a * N, b * N, N, N) += T.d2();
                lap.block(a * N, b * N, N, N).diagonal().array() += T.d2()(a, b);
            }
    }

    for (int it = 0; it < opt.max_iter && res >= opt.tol; ++it) {
        const Mat n2 = TorusField(u, tau).tau_norm_sq();
        // G(u) = lap(2u + L(u)) vanishes exactly at solutions
        const Mat G = T.laplacian(2.0 * u + log_term(n2));
        const Mat coef = (2.0 + dlog_term_du(n2).array()).matrix();
        Mat delta;
        if (linear == CurveSolveOptions::Linear::dense) {
            Mat K = Mat::Zero(n + 1, n + 1);
            const Eigen::Map<const Eigen::VectorXd> c(coef.data(), n);
            K.topLeftCorner(n, n) = lap * c.asDiagonal();
            K.block(0, n, n, 1).setOnes();
            K.block(n, 0, 1, n).setOnes();
            Eigen::VectorXd rhs = Eigen::VectorXd::Zero(n + 1);
            rhs.head(n) = -Eigen::Map<const Eigen::VectorXd>(G.data(), n);
            const Eigen::VectorXd sol = K.partialPivLu().solve(rhs);
            delta = Eigen::Map<const Mat>(sol.data(), N, N);
        } else {
            const Mat y = T.solve_poisson(-G);
            const Eigen::ArrayXXd inv = coef.array().inverse();
            const double C = -(y.array() * inv).sum() / inv.sum();
            delta = ((y.array() + C) * inv).matrix();
        }

        double step = 1.0;
        bool accepted = false;
        for (int h = 0; h <= opt.max_halvings; ++h, step *= 0.5) {
            const Mat trial = u + step * delta;
            double r = std::numeric_limits<double>::infinity();
            try {
                r = sup_norm(residual_of(trial));
            } catch (const std::domain_error&) {
            }
            if (r < res) {
                u = trial;
                res = r;
                accepted = true;
                break;
            }
        }
        rep.iterations = it + 1;
        rep.history.push_back(res);
        if (!accepted) {
            rep.message = "line search failed to reduce the residual";
            break;
        }
    }
    rep.u = u.array() - u.mean();
    rep.residual_sup = res;
    rep.converged = res < opt.tol;
    if (!rep.converged && rep.message.empty()) rep.message = "iteration cap reached";
    return rep;
}

}  // namespace hcsck
