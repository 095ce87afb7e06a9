#include "hcsck/chebyshev.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace hcsck {

ChebSeries::ChebSeries(Eigen::VectorXd coeffs) : a_(std::move(coeffs)) {}

Eigen::VectorXd ChebSeries::points(int n) {
    if (n < 1) throw std::invalid_argument("ChebSeries::points: n must be positive");
    Eigen::VectorXd x(n);
    for (int j = 0; j < n; ++j)
        x[j] = 0.5 * (1.0 - std::cos(std::numbers::pi * (j + 0.5) / n));
    return x;
}

double ChebSeries::basis(int k, double x) {
    const double s = 2.0 * x - 1.0;
    double t0 = 1.0, t1 = s;
    if (k == 0) return t0;
    for (int i = 1; i < k; ++i) {
        const double t2 = 2.0 * s * t1 - t0;
        t0 = t1;
        t1 = t2;
    }
    return t1;
}

Eigen::MatrixXd ChebSeries::values_to_coeffs(int n) {
    Eigen::MatrixXd C(n, n);
    for (int k = 0; k < n; ++k) {
        const double w = (k == 0 ? 1.0 : 2.0) / n;
        for (int j = 0; j < n; ++j) {
            // points are increasing, so theta_j = pi - pi (j + 1/2) / n
            const double theta = std::numbers::pi - std::numbers::pi * (j + 0.5) / n;
            C(k, j) = w * std::cos(k * theta);
        }
    }
    return C;
}

ChebSeries ChebSeries::from_values(const Eigen::VectorXd& values) {
    const int n = static_cast<int>(values.size());
    return ChebSeries(values_to_coeffs(n) * values);
}

ChebSeries ChebSeries::interpolate(const std::function<double(double)>& f, int n) {
    const Eigen::VectorXd x = points(n);
    Eigen::VectorXd v(n);
    for (int j = 0; j < n; ++j) v[j] = f(x[j]);
    return from_values(v);
}

double ChebSeries::operator()(double x) const {
    // Clenshaw
    const double s = 2.0 * x - 1.0;
    double b1 = 0.0, b2 = 0.0;
    for (int k = size() - 1; k >= 1; --k) {
        const double b0 = 2.0 * s * b1 - b2 + a_[k];
        b2 = b1;
        b1 = b0;
    }
    return (size() > 0 ? a_[0] : 0.0) + s * b1 - b2;
}

Eigen::VectorXd ChebSeries::operator()(const Eigen::VectorXd& x) const {
    Eigen::VectorXd y(x.size());
    for (Eigen::Index i = 0; i < x.size(); ++i) y[i] = (*this)(x[i]);
    return y;
}

ChebSeries ChebSeries::derivative() const {
    const int n = size();
    if (n <= 1) return ChebSeries(Eigen::VectorXd::Zero(1));
    Eigen::VectorXd d = Eigen::VectorXd::Zero(n - 1);
    // d_{k-1} = d_{k+1} + 2 k a_k, then halve d_0
    for (int k = n - 1; k >= 1; --k) d[k - 1] = (k + 1 <= n - 2 ? d[k + 1] : 0.0) + 2.0 * k * a_[k];
    d[0] *= 0.5;
    return ChebSeries(2.0 * d);
}

ChebSeries ChebSeries::antiderivative() const {
    const int n = size();
    Eigen::VectorXd b = Eigen::VectorXd::Zero(n + 1);
    for (int k = 0; k < n; ++k) {
        const double c = 0.5 * a_[k];  // dx = ds / 2
        if (k == 0) {
            b[1] += c;
        } else if (k == 1) {
            b[2] += c / 4.0;
            b[0] += c / 4.0;  // int T_1 = T_2/4 + const; fixed below
        } else {
            b[k + 1] += c / (2.0 * (k + 1));
            b[k - 1] -= c / (2.0 * (k - 1));
        }
    }
    ChebSeries out(b);
    out.a_[0] -= out(0.0);
    return out;
}

double ChebSeries::integral() const {
    double s = 0.0;
    for (int k = 0; k < size(); k += 2) s += a_[k] / (1.0 - static_cast<double>(k) * k);
    return s;
}

double ChebSeries::tail_ratio() const {
    const int n = size();
    if (n < 4) return 0.0;
    const double scale = a_.cwiseAbs().maxCoeff();
    if (scale == 0.0) return 0.0;
    return a_.tail(n / 4).cwiseAbs().maxCoeff() / scale;
}

ChebSeries ChebSeries::operator+(const ChebSeries& o) const {
    Eigen::VectorXd c = Eigen::VectorXd::Zero(std::max(size(), o.size()));
    c.head(size()) += a_;
    c.head(o.size()) += o.a_;
    return ChebSeries(c);
}

ChebSeries ChebSeries::operator-(const ChebSeries& o) const { return *this + o * -1.0; }

ChebSeries ChebSeries::operator*(double s) const { return ChebSeries(a_ * s); }

}  // namespace hcsck
