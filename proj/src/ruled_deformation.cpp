#include "hcsck/ruled_deformation.hpp"

#include <array>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <stdexcept>

namespace hcsck {

namespace {

const cplx I2{0.0, 2.0};

template <class F>
auto stencil(const F& f, double h) {
    return (-f(2.0 * h) + 8.0 * f(h) - 8.0 * f(-h) + f(-2.0 * h)) / (12.0 * h);
}

// d/dw of g along w = w0 + s (real s) and w0 + i s, combined to the Wirtinger derivative.
template <class G>
auto wirtinger(const G& g, cplx w0, double h, bool conjugate) {
    auto one = [&](double hh) {
        auto dx = stencil([&](double s) { return g(w0 + s); }, hh);
        auto dy = stencil([&](double s) { return g(w0 + cplx(0.0, s)); }, hh);
        const cplx iu = conjugate ? cplx(0.0, 1.0) : cplx(0.0, -1.0);
        return 0.5 * (dx + iu * dy);
    };
    return (16.0 * one(0.5 * h) - one(h)) / 15.0;
}

cplx call(const ZFn& f, cplx z) { return f ? f(z) : cplx(0.0); }

void require_chart(cplx zeta, const char* what) {
    if (zeta == 0.0) throw std::invalid_argument(std::string(what) + ": zeta = 0 is outside the chart");
}

using Vec2c = std::array<cplx, 2>;

template <class VF>
cplx covariant_divergence(const VF& V, const CalabiLocalModel& model, cplx z, cplx zeta, double h) {
    const double hz = h * std::max(1.0, std::abs(z));
    const double hq = h * std::max(1.0, std::abs(zeta));
    const cplx d1 = wirtinger([&](cplx w) { return V(w, zeta)[0]; }, z, hz, false);
    const cplx d2 = wirtinger([&](cplx w) { return V(z, w)[1]; }, zeta, hq, false);
    const Christoffels G = christoffels(model.profile(), model.point(z, zeta));
    const Vec2c v = V(z, zeta);
    cplx out = d1 + d2;
    for (int c = 1; c <= 2; ++c) out += (G(1, 1, c) + G(2, 2, c)) * v[c - 1];
    return out;
}

}  // namespace

HiggsBeta HiggsBeta::zero(double lambda) {
    auto zf = [](cplx) { return cplx(0.0); };
    return HiggsBeta{zf, zf, zf, zf, lambda};
}

HiggsBeta HiggsBeta::upper_triangular(cplx qt, double lambda, ZFn b) {
    if (!b) b = [](cplx) { return cplx(0.0); };
    return HiggsBeta{b, b, [qt](cplx) { return qt; }, [](cplx) { return cplx(0.0); }, lambda};
}

double HiggsBeta::a(cplx z) const {
    if (!(lambda > 0.0)) throw std::invalid_argument("HiggsBeta: lambda must be positive");
    return lambda * CalabiLocalModel::g_sigma(z);
}

DeformationField::DeformationField(ZFn c0, ZFn c1, ZFn c2)
    : c0_(std::move(c0)), c1_(std::move(c1)), c2_(std::move(c2)) {}

cplx DeformationField::operator()(cplx z, cplx zeta) const {
    return call(c0_, z) + zeta * (call(c1_, z) + zeta * call(c2_, z));
}

cplx DeformationField::d_zeta(cplx z, cplx zeta) const { return call(c1_, z) + 2.0 * zeta * call(c2_, z); }

cplx DeformationField::d2_zeta(cplx z, cplx) const { return 2.0 * call(c2_, z); }

cplx DeformationField::d_z(cplx z, cplx zeta) const {
    if (is_zero()) return 0.0;
    return wirtinger([&](cplx w) { return (*this)(w, zeta); }, z, 1e-3, false);
}

cplx DeformationField::d_z_d_zeta(cplx z, cplx zeta) const {
    if (is_zero()) return 0.0;
    return wirtinger([&](cplx w) { return d_zeta(w, zeta); }, z, 1e-3, false);
}

DeformationField deformation_from_beta(const HiggsBeta& beta) {
    return DeformationField([beta](cplx z) { return I2 * beta.beta21(z); },
                            [beta](cplx z) { return I2 * beta.trace_part(z); },
                            [beta](cplx z) { return -I2 * beta.beta12(z); });
}

cplx a_from_beta(const HiggsBeta& beta, cplx z, cplx zeta) {
    return I2 * (beta.trace_part(z) * zeta - beta.beta12(z) * zeta * zeta + beta.beta21(z));
}

cplx a_from_beta_eta(const HiggsBeta& beta, cplx z, cplx eta) {
    return I2 * (-beta.trace_part(z) * eta - beta.beta21(z) * eta * eta + beta.beta12(z));
}

std::string ComplexMmConditions::failures() const {
    std::string s;
    auto add = [&](bool ok, const char* name) {
        if (ok) return;
        if (!s.empty()) s += ",";
        s += name;
    };
    add(q_tilde_constant, "q_tilde_constant");
    add(q_holomorphic, "q_holomorphic");
    add(trace_closed, "trace_closed");
    return s;
}

cplx wirtinger_dz(const ZFn& f, cplx z, double h) { return wirtinger(f, z, h, false); }
cplx wirtinger_dzbar(const ZFn& f, cplx z, double h) { return wirtinger(f, z, h, true); }

ComplexMmConditions check_complex_mm_conditions(const HiggsBeta& beta, double tol) {
    ComplexMmConditions r;
    const cplx q0 = beta.q_tilde(0.0);
    auto trace = [&](cplx z) { return beta.trace_part(z); };
    for (int ir = 0; ir <= 5; ++ir) {
        const double rad = 0.12 * ir;
        const int na = ir == 0 ? 1 : 8;
        for (int ia = 0; ia < na; ++ia) {
            const cplx z = std::polar(rad, 2.0 * M_PI * (ia + 0.5 * ir) / na);
            r.q_tilde_defect = std::max(r.q_tilde_defect, std::abs(beta.q_tilde(z) - q0));
            r.q_defect = std::max(r.q_defect, std::abs(wirtinger_dzbar(beta.q, z)));
            r.trace_defect = std::max(r.trace_defect, std::abs(wirtinger_dz(trace, z)));
        }
    }
    r.q_tilde_constant = r.q_tilde_defect <= tol;
    r.q_holomorphic = r.q_defect <= tol;
    r.trace_closed = r.trace_defect <= tol;
    return r;
}

cplx k_function(const DeformationField& A, const CalabiLocalModel&, cplx z, cplx zeta) {
    if (A.is_zero()) return 0.0;
    const cplx tz = CalabiLocalModel::dz_log_g_sigma(z);
    return -A.d_z(z, zeta) + tz * zeta * A.d_zeta(z, zeta) - tz * A(z, zeta);
}

cplx div_dbar_star(const DeformationField& A, const CalabiLocalModel& model, cplx z, cplx zeta) {
    require_chart(zeta, "div_dbar_star");
    if (A.is_zero()) return 0.0;
    const double tau = model.tau(z, zeta);
    const ProfileJet j = model.profile().jet(tau);
    const cplx tz = CalabiLocalModel::dz_log_g_sigma(z);
    const cplx k = k_function(A, model, z, zeta);
    const cplx dk = -A.d_z_d_zeta(z, zeta) + tz * zeta * A.d2_zeta(z, zeta);
    const cplx dlog = (j.dphi + j.phi / (1.0 + tau)) / zeta;
    return (dk - k / zeta + dlog * k) / ((1.0 + tau) * CalabiLocalModel::g_sigma(z));
}

cplx div_dbar_star_fd(const DeformationField& A, const CalabiLocalModel& model, cplx z, cplx zeta, double h) {
    require_chart(zeta, "div_dbar_star_fd");
    auto V = [&](cplx w, cplx x) {
        const FiberPointData pt = model.point(w, x);
        const MetricBlocks mb = metric_blocks(model.profile(), pt);
        const Christoffels G = christoffels(model.profile(), pt);
        const cplx Av = A(w, x);
        const Vec2c dA{wirtinger([&](cplx y) { return A(y, x); }, w, h, false),
                       wirtinger([&](cplx y) { return A(w, y); }, x, h * std::max(1.0, std::abs(x)), false)};
        Vec2c v{0.0, 0.0};
        for (int c = 0; c < 2; ++c)
            for (int a = 0; a < 2; ++a)
                v[c] -= mb.g_inverse(0, a) * ((c == 1 ? dA[a] : cplx(0.0)) + G(c + 1, a + 1, 2) * Av);
        return v;
    };
    return covariant_divergence(V, model, z, zeta, h);
}

double deformation_norm_sq(const CalabiLocalModel& model, const HiggsBeta& beta, cplx z, cplx zeta) {
    const double tau = model.tau(z, zeta);
    const double phi = model.profile().phi(tau);
    return 4.0 * phi * std::norm(zeta) * std::norm(beta.beta12(z)) / ((1.0 + tau) * CalabiLocalModel::g_sigma(z));
}

IdentityPair divergence_identity(const CalabiLocalModel& model, const HiggsBeta& beta, cplx z, cplx zeta,
                                 double h) {
    require_chart(zeta, "divergence_identity");
    if (std::abs(beta.beta21(z)) > 1e-14 || std::abs(beta.trace_part(z)) > 1e-14)
        throw std::invalid_argument("divergence_identity: beta must be upper triangular with equal diagonal");
    const double tau = model.tau(z, zeta);
    const ProfileJet j = model.profile().jet(tau);
    if (!(j.phi > 1e-8 * model.profile().m()))
        throw std::domain_error("divergence_identity: point too close to tau = 0 or tau = m");
    const DeformationField A = deformation_from_beta(beta);
    auto W = [&](cplx w, cplx x) {
        const FiberPointData pt = model.point(w, x);
        const MetricBlocks mb = metric_blocks(model.profile(), pt);
        const Christoffels G = christoffels(model.profile(), pt);
        const cplx Av = A(w, x);
        const Vec2c dA{wirtinger([&](cplx y) { return A(y, x); }, w, h, false),
                       wirtinger([&](cplx y) { return A(w, y); }, x, h * std::max(1.0, std::abs(x)), false)};
        Vec2c v{0.0, 0.0};
        for (int a = 0; a < 2; ++a)
            for (int b = 0; b < 2; ++b)
                for (int c = 0; c < 2; ++c) {
                    const cplx inner = (c == 1 ? std::conj(dA[b]) : cplx(0.0)) + std::conj(G(c + 1, b + 1, 2) * Av);
                    v[a] += mb.g_inverse(b, a) * mb.g_inverse(0, 0) * mb.g(1, c) * inner * Av;
                }
        return v;
    };
    IdentityPair r;
    r.lhs = 2.0 * covariant_divergence(W, model, z, zeta, h).real();
    r.rhs = 2.0 * deformation_norm_sq(model, beta, z, zeta) * (j.d2phi + (j.dphi + 1.0) * (j.dphi + 1.0) / j.phi);
    return r;
}

double source_total_integral(const MomentumProfile& profile) {
    const LegendreMap L(profile);
    auto f = [&](double tau) {
        const ProfileJet j = profile.jet(tau);
        return L.exp_t(tau) * ((j.dphi + 1.0) * (j.dphi + 1.0) + j.phi * j.d2phi);
    };
    return boost::math::quadrature::gauss_kronrod<double, 21>::integrate(f, 0.0, profile.m(), 10, 1e-12);
}

}  // namespace hcsck
