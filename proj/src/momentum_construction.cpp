#include "hcsck/momentum_construction.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace hcsck {

namespace {

using boost::math::quadrature::gauss_kronrod;

template <class F>
double integrate(F f, double a, double b, double tol) {
    if (a == b) return 0.0;
    if (b < a) return -integrate(f, b, a, tol);
    return gauss_kronrod<double, 21>::integrate(f, a, b, 10, tol);
}

double poly(const Eigen::VectorXd& c, double x, int deriv) {
    double s = 0.0;
    for (Eigen::Index k = c.size() - 1; k >= deriv; --k) {
        double fac = 1.0;
        for (int d = 0; d < deriv; ++d) fac *= static_cast<double>(k - d);
        s = s * x + fac * c[k];
    }
    return s;
}

void require_interior(const MomentumProfile& p, double tau, const char* what) {
    if (!(tau > 0.0 && tau < p.m()))
        throw std::invalid_argument(std::string(what) + ": tau must lie in (0, m)");
}

}  // namespace

MomentumProfile::MomentumProfile(double m, JetFn jet, RegularFn regular)
    : m_(m), jet_(std::move(jet)), regular_(std::move(regular)) {
    if (!(m > 0.0)) throw std::invalid_argument("MomentumProfile: m must be positive");
    if (!jet_) throw std::invalid_argument("MomentumProfile: empty profile");
    const ProfileJet a = jet_(0.0), b = jet_(m);
    const double tol = 1e-9;
    if (std::abs(a.phi) > tol * m || std::abs(b.phi) > tol * m)
        throw std::invalid_argument("MomentumProfile: phi must vanish at 0 and m");
    if (std::abs(a.dphi - 1.0) > tol || std::abs(b.dphi + 1.0) > tol)
        throw std::invalid_argument("MomentumProfile: need phi'(0) = 1 and phi'(m) = -1");
    for (int i = 1; i < 256; ++i)
        if (!(jet_(m * i / 256.0).phi > 0.0))
            throw std::invalid_argument("MomentumProfile: phi must be positive on (0, m)");
}

MomentumProfile MomentumProfile::admissible(double m, const Eigen::VectorXd& p) {
    const Eigen::VectorXd c = p.size() == 0 ? Eigen::VectorXd::Zero(1) : p;
    auto jet = [m, c](double tau) {
        const double v = tau * (m - tau), v1 = m - 2.0 * tau, v2 = -2.0;
        const double q = poly(c, tau, 0), q1 = poly(c, tau, 1), q2 = poly(c, tau, 2);
        const double w = 1.0 + v * q;
        const double w1 = v1 * q + v * q1;
        const double w2 = v2 * q + 2.0 * v1 * q1 + v * q2;
        return ProfileJet{v * w / m, (v1 * w + v * w1) / m, (v2 * w + 2.0 * v1 * w1 + v * w2) / m};
    };
    auto regular = [m, c](double tau) {
        const double v = tau * (m - tau);
        const double q = poly(c, tau, 0);
        return -m * q / (1.0 + v * q);
    };
    return MomentumProfile(m, jet, regular);
}

ProfileJet MomentumProfile::jet(double tau) const { return jet_(tau); }

double MomentumProfile::regular(double tau) const {
    if (regular_) return regular_(tau);
    return 1.0 / jet_(tau).phi - 1.0 / tau - 1.0 / (m_ - tau);
}

LegendreMap::LegendreMap(MomentumProfile profile, double tol) : profile_(std::move(profile)), tol_(tol) {}

double LegendreMap::regular_integral(double tau) const {
    const double m = profile_.m();
    if (!(tau >= 0.0 && tau <= m)) throw std::invalid_argument("LegendreMap: tau outside [0, m]");
    return integrate([this](double x) { return profile_.regular(x); }, m / 2.0, tau, tol_);
}

LegendreMap::Value LegendreMap::t(double tau) const {
    const double m = profile_.m();
    if (!(tau >= 0.0 && tau <= m)) throw std::invalid_argument("LegendreMap: tau outside [0, m]");
    if (tau == 0.0) return {Kind::minus_infinity, -std::numeric_limits<double>::infinity()};
    if (tau == m) return {Kind::plus_infinity, std::numeric_limits<double>::infinity()};
    return {Kind::finite, std::log(tau / (m - tau)) + regular_integral(tau)};
}

double LegendreMap::t_interior(double tau) const {
    const Value v = t(tau);
    if (v.kind != Kind::finite) throw std::invalid_argument("LegendreMap: tau must lie in (0, m)");
    return v.value;
}

double LegendreMap::exp_t(double tau) const {
    const double m = profile_.m();
    if (tau == m) return std::numeric_limits<double>::infinity();
    return tau / (m - tau) * std::exp(regular_integral(tau));
}

double LegendreMap::tau_from_t(double t) const {
    // Newton in s = log(tau / (m - tau)): g(s) = s + R(tau(s)) - t, g' = tau (m - tau) / (m phi)
    const double m = profile_.m();
    auto tau_of = [m](double s) { return m / (1.0 + std::exp(-s)); };
    double s = t;
    for (int it = 0; it < 100; ++it) {
        const double tau = tau_of(s);
        if (!(tau > 0.0 && tau < m)) return tau;  // saturated in double precision
        const double g = s + regular_integral(tau) - t;
        const double dg = tau * (m - tau) / (m * profile_.phi(tau));
        const double step = g / dg;
        s -= step;
        if (std::abs(step) <= 1e-15 * (1.0 + std::abs(s))) break;
    }
    return tau_of(s);
}

LegendreMap legendre_dictionary(const MomentumProfile& profile) { return LegendreMap(profile); }

MetricBlocks metric_blocks(const MomentumProfile& profile, const FiberPointData& pt) {
    require_interior(profile, pt.tau, "metric_blocks");
    if (!(pt.g_sigma > 0.0)) throw std::invalid_argument("metric_blocks: g_sigma must be positive");
    if (pt.zeta == 0.0) throw std::invalid_argument("metric_blocks: zeta = 0 is outside the chart");
    const double phi = profile.phi(pt.tau);
    const double base = (1.0 + pt.tau) * pt.g_sigma;
    const cplx p = pt.dz_t, zeta = pt.zeta;
    const double r2 = std::norm(zeta);
    MetricBlocks mb;
    mb.g << base + phi * std::norm(p), phi * p / std::conj(zeta),
            phi * std::conj(p) / zeta, phi / r2;
    Eigen::Matrix2cd printed;
    printed << 1.0 / base, -std::conj(zeta) * std::conj(p) / base,
               -zeta * p / base, r2 / phi + r2 * std::norm(p) / base;
    mb.g_inverse = printed.transpose();
    return mb;
}

double scalar_curvature(const MomentumProfile& profile, double tau, double s_sigma) {
    if (!(tau >= 0.0 && tau <= profile.m())) throw std::invalid_argument("scalar_curvature: tau outside [0, m]");
    const ProfileJet j = profile.jet(tau);
    return s_sigma / (1.0 + tau) - j.d2phi - 2.0 * j.dphi / (1.0 + tau);
}

double fibre_volume(const MomentumProfile& profile) {
    const LegendreMap L(profile);
    const double m = profile.m();
    const double span = 40.0 + std::abs(L.regular_integral(0.0)) + std::abs(L.regular_integral(m)) +
                        std::abs(std::log(m));
    auto integrand = [&](double t) { return profile.phi(L.tau_from_t(t)); };
    const int pieces = static_cast<int>(std::ceil(span / 4.0));
    double total = 0.0;
    for (int k = -pieces; k < pieces; ++k) total += integrate(integrand, 4.0 * k, 4.0 * (k + 1), 1e-12);
    return 2.0 * std::numbers::pi * total;
}

double average_scalar(const MomentumProfile& profile, double s_sigma_hat) {
    const double m = profile.m();
    const double num = integrate(
        [&](double tau) { return scalar_curvature(profile, tau, s_sigma_hat) * (1.0 + tau); }, 0.0, m, 1e-12);
    return num / (m + 0.5 * m * m);
}

double average_scalar_closed_form(double m, double s_sigma_hat) {
    if (!(m > 0.0)) throw std::invalid_argument("average_scalar_closed_form: m must be positive");
    return 2.0 * s_sigma_hat / (m + 2.0) + 2.0 / m;
}

cplx Christoffels::operator()(int c, int a, int b) const {
    if (a > b) std::swap(a, b);
    const int key = 100 * c + 10 * b + a;  // symmetric in (a, b)
    switch (key) {
        case 111: return g1_11;
        case 211: return g2_11;
        case 121: return g1_21;
        case 221: return g2_21;
        case 122: return g1_22;
        case 222: return g2_22;
        default: throw std::invalid_argument("Christoffels: indices must be 1 or 2");
    }
}

Christoffels christoffels(const MomentumProfile& profile, const FiberPointData& pt) {
    require_interior(profile, pt.tau, "christoffels");
    if (pt.zeta == 0.0) throw std::invalid_argument("christoffels: zeta = 0 is outside the chart");
    const ProfileJet j = profile.jet(pt.tau);
    const double opt = 1.0 + pt.tau;
    const cplx p = pt.dz_t, zeta = pt.zeta;
    Christoffels G;
    G.g1_11 = 2.0 * j.phi * p / opt + pt.gamma_sigma;
    G.g2_11 = zeta * p * p * (-2.0 * j.phi / opt + j.dphi) + zeta * pt.dz2_t - zeta * p * pt.gamma_sigma;
    G.g1_21 = j.phi / (opt * zeta);
    G.g2_21 = p * (-j.phi / opt + j.dphi);
    G.g1_22 = 0.0;
    G.g2_22 = (j.dphi - 1.0) / zeta;
    return G;
}

KahlerClass kahler_class(double m) {
    return {2.0 * std::numbers::pi, 2.0 * std::numbers::pi * m};
}

CalabiLocalModel::CalabiLocalModel(MomentumProfile profile, double lambda)
    : legendre_(std::make_shared<const LegendreMap>(std::move(profile))), lambda_(lambda) {
    if (!(lambda > 0.0)) throw std::invalid_argument("CalabiLocalModel: lambda must be positive");
}

double CalabiLocalModel::g_sigma(cplx z) {
    const double d = 1.0 - std::norm(z);
    if (!(d > 0.0)) throw std::invalid_argument("CalabiLocalModel: z must lie in the unit disc");
    return 2.0 / (d * d);
}

cplx CalabiLocalModel::dz_log_g_sigma(cplx z) { return 2.0 * std::conj(z) / (1.0 - std::norm(z)); }

cplx CalabiLocalModel::dz2_log_g_sigma(cplx z) {
    const double d = 1.0 - std::norm(z);
    return 2.0 * std::conj(z) * std::conj(z) / (d * d);
}

double CalabiLocalModel::tau(cplx z, cplx zeta) const {
    if (zeta == 0.0) throw std::invalid_argument("CalabiLocalModel: zeta = 0 is outside the chart");
    return legendre_->tau_from_t(std::log(fibre_metric(z) * std::norm(zeta)));
}

FiberPointData CalabiLocalModel::point(cplx z, cplx zeta) const {
    FiberPointData pt;
    pt.tau = tau(z, zeta);
    pt.dz_t = dz_log_g_sigma(z);
    pt.dz2_t = dz2_log_g_sigma(z);
    pt.g_sigma = g_sigma(z);
    pt.zeta = zeta;
    pt.gamma_sigma = dz_log_g_sigma(z);
    return pt;
}

cplx CalabiLocalModel::zeta_for_tau(cplx z, double tau, double arg) const {
    const double r = std::sqrt(legendre_->exp_t(tau) / fibre_metric(z));
    return std::polar(r, arg);
}

}  // namespace hcsck
