#pragma once

#include <Eigen/Dense>
#include <complex>
#include <functional>
#include <memory>

namespace hcsck {

using cplx = std::complex<double>;

struct ProfileJet {
    double phi = 0, dphi = 0, d2phi = 0;
};

// phi on [0, m] with phi(0) = phi(m) = 0, phi'(0) = 1, phi'(m) = -1, phi > 0 inside.
class MomentumProfile {
public:
    using JetFn = std::function<ProfileJet(double)>;
    using RegularFn = std::function<double(double)>;

    // `regular` returns 1/phi - 1/tau - 1/(m - tau); computed by subtraction when empty.
    MomentumProfile(double m, JetFn jet, RegularFn regular = {});

    // tau (m - tau)/m * (1 + tau (m - tau) p(tau)), p given by monomial coefficients.
    static MomentumProfile admissible(double m, const Eigen::VectorXd& p = Eigen::VectorXd());

    double m() const { return m_; }
    ProfileJet jet(double tau) const;
    double phi(double tau) const { return jet(tau).phi; }
    double regular(double tau) const;

private:
    double m_;
    JetFn jet_;
    RegularFn regular_;
};

// t(tau) = int_{m/2}^tau dx / phi = log(tau / (m - tau)) + R(tau).
class LegendreMap {
public:
    enum class Kind { finite, minus_infinity, plus_infinity };
    struct Value {
        Kind kind = Kind::finite;
        double value = 0;
    };

    explicit LegendreMap(MomentumProfile profile, double tol = 1e-13);

    Value t(double tau) const;
    double t_interior(double tau) const;
    double regular_integral(double tau) const;
    // (tau / (m - tau)) e^{R(tau)}
    double exp_t(double tau) const;
    double tau_from_t(double t) const;
    const MomentumProfile& profile() const { return profile_; }

private:
    MomentumProfile profile_;
    double tol_;
};

LegendreMap legendre_dictionary(const MomentumProfile& profile);

struct FiberPointData {
    double tau = 0;
    cplx dz_t, dz2_t;
    double g_sigma = 1;
    cplx zeta{1.0, 0.0};
    cplx gamma_sigma;  // d_z log g_sigma
};

struct MetricBlocks {
    Eigen::Matrix2cd g;          // g(a, b) = g_{a bbar}
    Eigen::Matrix2cd g_inverse;  // matrix inverse; g^{a bbar} = g_inverse(b, a)
};

MetricBlocks metric_blocks(const MomentumProfile& profile, const FiberPointData& pt);

double scalar_curvature(const MomentumProfile& profile, double tau, double s_sigma);

// 2 pi int phi(tau(t)) dt over the whole fibre, in the logarithmic radius t.
double fibre_volume(const MomentumProfile& profile);

// Mean of s against (1 + tau) d tau.
double average_scalar(const MomentumProfile& profile, double s_sigma_hat);
double average_scalar_closed_form(double m, double s_sigma_hat);

// Gamma^c_{ab}; index 1 is z, index 2 is zeta.
struct Christoffels {
    cplx g1_11, g2_11, g1_21, g2_21, g1_22, g2_22;
    cplx operator()(int c, int a, int b) const;
};

Christoffels christoffels(const MomentumProfile& profile, const FiberPointData& pt);

// Poincare dual of the Kaehler class: 2 pi (C + m Sigma_inf).
struct KahlerClass {
    double fibre_coefficient = 0;
    double section_coefficient = 0;
};
KahlerClass kahler_class(double m);

// Calabi ansatz over the Poincare disc: g_sigma = 2/(1 - |z|^2)^2 (s_sigma = -1),
// fibre metric a = lambda g_sigma, t = log(a |zeta|^2).
class CalabiLocalModel {
public:
    CalabiLocalModel(MomentumProfile profile, double lambda);

    static double g_sigma(cplx z);
    static cplx dz_log_g_sigma(cplx z);
    static cplx dz2_log_g_sigma(cplx z);

    double lambda() const { return lambda_; }
    double fibre_metric(cplx z) const { return lambda_ * g_sigma(z); }
    const MomentumProfile& profile() const { return legendre_->profile(); }
    const LegendreMap& legendre() const { return *legendre_; }

    double tau(cplx z, cplx zeta) const;
    FiberPointData point(cplx z, cplx zeta) const;
    // zeta with the given argument such that tau(z, zeta) = tau.
    cplx zeta_for_tau(cplx z, double tau, double arg = 0.0) const;

private:
    std::shared_ptr<const LegendreMap> legendre_;
    double lambda_;
};

}  // namespace hcsck
