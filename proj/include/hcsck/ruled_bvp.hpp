#pragma once

#include "hcsck/chebyshev.hpp"

#include <Eigen/Dense>
#include <string>
#include <vector>

namespace hcsck {

enum class Variant { standard, alternate };

const char* to_string(Variant v);
Variant variant_from_string(const std::string& s);

// phi0(lambda) = m / (2 (2 + m)) lambda (1 - lambda) (4 + 2m - m (4 + 3m) lambda (1 - lambda)).
struct ApproxSolution {
    double m = 0;
    double c0 = 0;
    double phi(double lam) const;
    double d1(double lam) const;
    double d2(double lam) const;
};

// c0 = 2 m^2 for the standard operator and 8 m^2 for the alternate one.
ApproxSolution approx_solution(double m, Variant variant = Variant::standard);

// Phi = phi0 + u with u = lambda^2 (1 - lambda)^2 p(lambda); p is a Chebyshev series on [0, 1].
struct BvpState {
    double m = 0;
    Eigen::VectorXd p;
    double c = 0;
    Variant variant = Variant::standard;

    static BvpState approximate(double m, Variant variant, int nodes);
    int nodes() const { return static_cast<int>(p.size()) + 1; }
};

// Profile quantities of a state at a single point.
struct BvpPoint {
    double lam = 0;
    double phi = 0, d1 = 0, d2 = 0;
    double psi = 0;    // Phi / (lambda (1 - lambda))
    double e = 0;      // exp(int_{1/2}^lambda m / Phi)
    double e_phi = 0;  // E Phi, finite up to lambda = 1
};

// Evaluates Phi, E and the operators of one state anywhere in (0, 1).
class BvpProfile {
public:
    BvpProfile(const BvpState& state, int quad_points = 0);

    const BvpState& state() const { return state_; }
    BvpPoint at(double lam) const;
    double residual(double lam) const;
    Eigen::VectorXd residual(const Eigen::VectorXd& lam) const;
    // S(lambda) = int_{1/2}^lambda (m / Phi - 1/x - 1/(1 - x)) dx
    double s_regular(double lam) const { return s_(lam) - s_half_; }
    double s_tail() const { return s_.tail_ratio(); }
    // Mean of residual (1 + m lambda), and the plain mean.
    double weighted_mean() const;
    double unweighted_mean() const;
    double residual_sup_grid(int points = 1000) const;

private:
    BvpState state_;
    ChebSeries p_, dp_, d2p_, s_;
    double s_half_ = 0;
    int quad_ = 0;
};

// The standard and alternate operators at the collocation nodes (nodes() first-kind Chebyshev points).
Eigen::VectorXd operator_F(const BvpState& state);
Eigen::VectorXd operator_F_alt(const BvpState& state);
Eigen::VectorXd residual(const BvpState& state);

// Jacobian with respect to (p, c) at the nodes; the last column is the c direction.
Eigen::MatrixXd jacobian(const BvpState& state);
Eigen::VectorXd linearize(const BvpState& state, const Eigen::VectorXd& dp, double k);

// D(u, k) = u'' + 2k (3 lambda^2 - 2 lambda)
ChebSeries model_D(const ChebSeries& u, double k);
struct ModelInverse {
    ChebSeries u;
    double k = 0;
};
// Requires zero mean of f; k = -6 int_0^1 int_0^y f.
ModelInverse model_D_inverse(const ChebSeries& f, double mean_tol = 1e-12);
// max(sup|u|, sup|u'|, sup|u''|) + |k|, sampled on a uniform grid.
double model_norm(const ModelInverse& x, int samples = 2001);

struct SolveOptions {
    int nodes = 64;
    double tol = 1e-9;
    int max_iter = 25;
    int max_halvings = 30;
    bool model_start = true;
};

struct SolveReport {
    double m = 0;
    Variant variant = Variant::standard;
    int nodes = 0;
    double residual_sup = 0;
    double residual_sup_grid = 0;
    double weighted_mean = 0;
    double unweighted_mean = 0;
    int iterations = 0;
    double phi_min_interior = 0;
    double c_value = 0;
    double c0 = 0;
    bool converged = false;
    std::vector<double> history;
    std::string message;
    BvpState state;
};

SolveReport solve(double m, Variant variant, const SolveOptions& opts = {});

struct OrderRow {
    double m = 0;
    double residual_sup = 0;
    double component1_sup = 0;
    double component2_sup = 0;
};

struct OrderScan {
    Variant variant = Variant::standard;
    std::vector<OrderRow> rows;
    double slope_residual = 0, slope_component1 = 0, slope_component2 = 0;
};

// Sup norms of the operator at (phi0, c0) and of the two first-order expressions, with log-log slopes.
OrderScan order_scan(const std::vector<double>& m_list, Variant variant = Variant::standard, int nodes = 64,
                     double c0_override = 0.0);
double loglog_slope(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace hcsck
