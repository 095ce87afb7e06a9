#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "hcsck/momentum_construction.hpp"
#include "hcsck/random.hpp"
#include "oracles.hpp"

using namespace hcsck;

namespace {

constexpr double kPi = std::numbers::pi;

Eigen::VectorXd coeffs(std::initializer_list<double> c) {
    Eigen::VectorXd v(c.size());
    int i = 0;
    for (double x : c) v[i++] = x;
    return v;
}

// m = 1 approximate quartic profile in the tau variable.
MomentumProfile quartic_profile() {
    const double m = 1.0, K = m / (2 * (2 + m)), a = 4 + 2 * m, b = m * (4 + 3 * m);
    auto jet = [=](double t) {
        const double l = t * (1 - t), l1 = 1 - 2 * t;
        return ProfileJet{K * l * (a - b * l), K * (a - 2 * b * l) * l1, K * (-2 * b * l1 * l1 - 2 * (a - 2 * b * l))};
    };
    return MomentumProfile(m, jet);
}

struct Sample {
    cplx z, zeta;
};

Sample random_point(const CalabiLocalModel& M, CounterRng& rng) {
    const cplx z = std::polar(0.5 * std::sqrt(rng.uniform()), 2 * kPi * rng.uniform());
    const double tau = M.profile().m() * rng.uniform(0.1, 0.9);
    return {z, M.zeta_for_tau(z, tau, 2 * kPi * rng.uniform())};
}

Eigen::Matrix2cd metric_at(const CalabiLocalModel& M, cplx z, cplx zeta) {
    return metric_blocks(M.profile(), M.point(z, zeta)).g;
}

}  // namespace

TEST(Profile, AdmissibleAndRejected) {
    EXPECT_NO_THROW(MomentumProfile::admissible(0.5, coeffs({0.3, -0.2})));
    EXPECT_THROW(MomentumProfile::admissible(-1.0), std::invalid_argument);
    auto bad_slope = [](double t) { return ProfileJet{2 * t * (1 - t), 2 - 4 * t, -4}; };
    EXPECT_THROW(MomentumProfile(1.0, bad_slope), std::invalid_argument);
    auto negative = [](double t) { return ProfileJet{t * (1 - t) * (1 - 8 * t * (1 - t)), 0, 0}; };
    EXPECT_THROW(MomentumProfile(1.0, negative), std::invalid_argument);
    const MomentumProfile p = MomentumProfile::admissible(0.7, coeffs({0.4}));
    for (double t : {0.1, 0.35, 0.6}) {
        const ProfileJet j = p.jet(t);
        EXPECT_NEAR(p.regular(t), 1 / j.phi - 1 / t - 1 / (0.7 - t), 1e-12);
    }
}

TEST(MetricBlocks, NormalPointAndInverse) {
    const MomentumProfile p = MomentumProfile::admissible(0.5, coeffs({0.3, -0.2}));
    FiberPointData pt;
    pt.tau = 0.2;
    pt.g_sigma = 1.7;
    pt.zeta = cplx(0.4, -0.3);
    const double phi = p.phi(0.2);
    const MetricBlocks mb = metric_blocks(p, pt);
    EXPECT_NEAR(std::abs(mb.g(0, 0) - 1.2 * 1.7), 0.0, 1e-15);
    EXPECT_NEAR(std::abs(mb.g(1, 1) - phi / 0.25), 0.0, 1e-14);
    EXPECT_EQ(std::abs(mb.g(0, 1)), 0.0);
    EXPECT_EQ(std::abs(mb.g(1, 0)), 0.0);
    pt.tau = 0.6;
    EXPECT_THROW(metric_blocks(p, pt), std::invalid_argument);
    pt.tau = -0.1;
    EXPECT_THROW(metric_blocks(p, pt), std::invalid_argument);
}

TEST(MetricBlocks, RandomPoints) {
    CounterRng rng(51);
    const MomentumProfile p = MomentumProfile::admissible(0.8, coeffs({0.2, 0.1}));
    for (int s = 0; s < 100; ++s) {
        FiberPointData pt;
        pt.tau = 0.8 * rng.uniform(0.01, 0.99);
        pt.g_sigma = rng.uniform(0.5, 3.0);
        pt.dz_t = cplx(rng.uniform(-2, 2), rng.uniform(-2, 2));
        pt.zeta = std::polar(rng.uniform(0.2, 3.0), rng.uniform(0, 2 * kPi));
        const MetricBlocks mb = metric_blocks(p, pt);
        EXPECT_LT((mb.g * mb.g_inverse - Eigen::Matrix2cd::Identity()).cwiseAbs().maxCoeff(), 1e-12);
        EXPECT_LT((mb.g - mb.g.adjoint()).cwiseAbs().maxCoeff(), 1e-14 * mb.g.cwiseAbs().maxCoeff());
        const double det = (1 + pt.tau) * pt.g_sigma * p.phi(pt.tau) / std::norm(pt.zeta);
        EXPECT_NEAR(mb.g.determinant().real(), det, 1e-12 * det);
        Eigen::SelfAdjointEigenSolver<Eigen::Matrix2cd> es(mb.g);
        EXPECT_GT(es.eigenvalues().minCoeff(), 0.0);
        // printed layout: g^{a bbar} = g_inverse(b, a)
        EXPECT_NEAR(std::abs(mb.g_inverse(0, 0) - 1 / ((1 + pt.tau) * pt.g_sigma)), 0.0, 1e-14);
        const cplx printed12 = -std::conj(pt.zeta) * std::conj(pt.dz_t) / ((1 + pt.tau) * pt.g_sigma);
        EXPECT_NEAR(std::abs(mb.g_inverse(1, 0) - printed12), 0.0, 1e-13);
    }
}

TEST(ScalarCurvature, MatchesKahlerCurvatureOfModel) {
    const CalabiLocalModel M(quartic_profile(), 1.0);
    const cplx z = 0.0;  // d_z t = 0 here
    const cplx zeta = M.zeta_for_tau(z, 0.5, 0.3);
    auto logdet = [&](cplx w, cplx x) { return std::log(metric_at(M, w, x).determinant().real()); };
    const Eigen::Matrix2cd gi = metric_blocks(M.profile(), M.point(z, zeta)).g_inverse;
    const double h = 1e-3;
    cplx s = 0;
    for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b) {
            auto dbbar = [&](cplx w, cplx x) {
                return b == 0 ? oracle::dwbar([&](cplx v) { return cplx(logdet(v, x)); }, w, h)
                              : oracle::dwbar([&](cplx v) { return cplx(logdet(w, v)); }, x, h);
            };
            const cplx dd = a == 0 ? oracle::dw([&](cplx v) { return dbbar(v, zeta); }, z, h)
                                   : oracle::dw([&](cplx v) { return dbbar(z, v); }, zeta, h);
            s -= gi(b, a) * dd;
        }
    const double formula = scalar_curvature(M.profile(), 0.5, -1.0);
    EXPECT_LT(oracle::rel(s.real(), formula), 1e-4);
    EXPECT_THROW(scalar_curvature(M.profile(), 1.5, -1.0), std::invalid_argument);
}

TEST(FibreVolume, EqualsTwoPiM) {
    for (double m : {0.5, 1.0}) {
        EXPECT_NEAR(fibre_volume(MomentumProfile::admissible(m)), 2 * kPi * m, 1e-8);
        EXPECT_NEAR(fibre_volume(MomentumProfile::admissible(m, coeffs({0.5, -0.4}))), 2 * kPi * m, 1e-8);
    }
    EXPECT_NEAR(fibre_volume(quartic_profile()), 2 * kPi, 1e-8);
}

TEST(AverageScalar, ClosedFormAndQuadrature) {
    EXPECT_NEAR(average_scalar_closed_form(1.0, -1.0), 4.0 / 3.0, 1e-15);
    EXPECT_NEAR(average_scalar_closed_form(0.5, -1.0), 3.2, 1e-15);
    CounterRng rng(52);
    for (int s = 0; s < 10; ++s) {
        const double m = rng.uniform(0.1, 1.5);
        const Eigen::VectorXd c = coeffs({rng.uniform(-0.3, 0.3), rng.uniform(-0.3, 0.3)});
        const MomentumProfile p = MomentumProfile::admissible(m, c);
        EXPECT_NEAR(average_scalar(p, -1.0), average_scalar_closed_form(m, -1.0), 1e-8 * (1 + 2 / m));
    }
}

TEST(Christoffels, NormalPointValues) {
    const MomentumProfile p = MomentumProfile::admissible(0.5, coeffs({0.3}));
    FiberPointData pt;
    pt.tau = 0.3;
    pt.g_sigma = 2.0;
    pt.zeta = cplx(0.7, 0.2);
    const Christoffels G = christoffels(p, pt);
    EXPECT_EQ(std::abs(G.g2_11), 0.0);
    EXPECT_EQ(std::abs(G.g2_21), 0.0);
    EXPECT_EQ(std::abs(G.g1_22), 0.0);
    EXPECT_NEAR(std::abs(G.g2_22 - (p.jet(0.3).dphi - 1.0) / pt.zeta), 0.0, 1e-15);
    EXPECT_EQ(G(2, 1, 2), G(2, 2, 1));
    pt.zeta = 0.0;
    EXPECT_THROW(christoffels(p, pt), std::invalid_argument);
}

TEST(Christoffels, MatchFiniteDifferences) {
    const CalabiLocalModel M(MomentumProfile::admissible(0.6, coeffs({0.3, -0.2})), 1.3);
    CounterRng rng(53);
    for (int s = 0; s < 100; ++s) {
        const Sample q = random_point(M, rng);
        const Christoffels G = christoffels(M.profile(), M.point(q.z, q.zeta));
        const Eigen::Matrix2cd gi = metric_at(M, q.z, q.zeta).inverse();
        double err = 0, scale = 0;
        for (int a = 0; a < 2; ++a) {
            Eigen::Matrix2cd dg;
            for (int r = 0; r < 2; ++r)
                for (int c = 0; c < 2; ++c)
                    dg(r, c) = a == 0 ? oracle::dw([&](cplx w) { return metric_at(M, w, q.zeta)(r, c); }, q.z, 1e-3)
                                      : oracle::dw([&](cplx w) { return metric_at(M, q.z, w)(r, c); }, q.zeta,
                                                   1e-3 * std::max(1.0, std::abs(q.zeta)));
            const Eigen::Matrix2cd T = dg * gi;
            for (int b = 0; b < 2; ++b)
                for (int c = 0; c < 2; ++c) {
                    err = std::max(err, std::abs(T(b, c) - G(c + 1, a + 1, b + 1)));
                    scale = std::max(scale, std::abs(T(b, c)));
                }
        }
        EXPECT_LT(err / scale, 1e-5);
    }
}

TEST(Legendre, DictionaryProperties) {
    const double m = 0.8;
    const LegendreMap L(MomentumProfile::admissible(m, coeffs({0.3, -0.1})));
    EXPECT_NEAR(L.t_interior(m / 2), 0.0, 1e-15);
    EXPECT_EQ(L.t(0.0).kind, LegendreMap::Kind::minus_infinity);
    EXPECT_EQ(L.t(m).kind, LegendreMap::Kind::plus_infinity);
    EXPECT_THROW(L.t(m + 0.1), std::invalid_argument);
    double prev = -1e300;
    for (int i = 1; i < 100; ++i) {
        const double t = L.t_interior(m * i / 100);
        EXPECT_GT(t, prev);
        prev = t;
        EXPECT_NEAR(L.tau_from_t(t), m * i / 100, 1e-12);
    }
    // exp(t) ~ C tau near 0 and exp(t)(m - tau) stays bounded near m
    const double a = 1e-6, b = 1e-7;
    EXPECT_NEAR(std::log(L.exp_t(a) / L.exp_t(b)) / std::log(a / b), 1.0, 1e-5);
    EXPECT_NEAR(L.exp_t(m - a) * a, L.exp_t(m - b) * b, 1e-5 * L.exp_t(m - a) * a);
}

TEST(KahlerClass, Coefficients) {
    const KahlerClass k = kahler_class(0.3);
    EXPECT_DOUBLE_EQ(k.fibre_coefficient, 2 * kPi);
    EXPECT_DOUBLE_EQ(k.section_coefficient, 0.6 * kPi);
}
