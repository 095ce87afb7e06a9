#pragma once

#include <Eigen/Dense>
#include <functional>

namespace hcsck {

// Chebyshev series sum_k a_k T_k(2x - 1) on [0, 1].
class ChebSeries {
public:
    ChebSeries() = default;
    explicit ChebSeries(Eigen::VectorXd coeffs);

    // First-kind Chebyshev points mapped to (0, 1), increasing.
    static Eigen::VectorXd points(int n);
    static ChebSeries from_values(const Eigen::VectorXd& values);
    static ChebSeries interpolate(const std::function<double(double)>& f, int n);
    // T_k(2x - 1).
    static double basis(int k, double x);
    // Row j maps nodal values at points(n) to coefficient j.
    static Eigen::MatrixXd values_to_coeffs(int n);

    double operator()(double x) const;
    Eigen::VectorXd operator()(const Eigen::VectorXd& x) const;

    ChebSeries derivative() const;
    // Antiderivative vanishing at x = 0.
    ChebSeries antiderivative() const;
    double integral() const;

    int size() const { return static_cast<int>(a_.size()); }
    const Eigen::VectorXd& coeffs() const { return a_; }
    // Largest |a_k| over the last quarter of coefficients, relative to max |a_k|.
    double tail_ratio() const;

    ChebSeries operator+(const ChebSeries& o) const;
    ChebSeries operator-(const ChebSeries& o) const;
    ChebSeries operator*(double s) const;

private:
    Eigen::VectorXd a_;
};

}  // namespace hcsck
