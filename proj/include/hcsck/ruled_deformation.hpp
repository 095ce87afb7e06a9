#pragma once

#include "hcsck/momentum_construction.hpp"

#include <complex>
#include <functional>
#include <string>

namespace hcsck {

using ZFn = std::function<cplx(cplx)>;

// Higgs field data on P(O + L) over the Poincare disc with fibre metric a = lambda g0.
// beta^1_2 = q_tilde a, beta^2_1 = conj(q) / a.
struct HiggsBeta {
    ZFn beta11, beta22;
    ZFn q_tilde;
    ZFn q;
    double lambda = 1.0;

    static HiggsBeta zero(double lambda = 1.0);
    // beta^2_2 = beta^1_1 = b, beta^2_1 = 0, beta^1_2 = qt a.
    static HiggsBeta upper_triangular(cplx qt, double lambda = 1.0, ZFn b = {});

    double a(cplx z) const;
    cplx beta12(cplx z) const { return q_tilde(z) * a(z); }
    cplx beta21(cplx z) const { return std::conj(q(z)) / a(z); }
    cplx trace_part(cplx z) const { return beta22(z) - beta11(z); }
};

// A^2_{1bar} = c0(z) + c1(z) zeta + c2(z) zeta^2, the only nonzero component of A^{1,0}.
class DeformationField {
public:
    DeformationField() = default;
    DeformationField(ZFn c0, ZFn c1, ZFn c2);

    cplx operator()(cplx z, cplx zeta) const;
    cplx d_zeta(cplx z, cplx zeta) const;
    cplx d2_zeta(cplx z, cplx zeta) const;
    // Wirtinger d/dz by a 4th order central stencil, Richardson-combined with the halved step.
    cplx d_z(cplx z, cplx zeta) const;
    cplx d_z_d_zeta(cplx z, cplx zeta) const;
    bool is_zero() const { return !c0_ && !c1_ && !c2_; }

private:
    ZFn c0_, c1_, c2_;
};

DeformationField deformation_from_beta(const HiggsBeta& beta);
cplx a_from_beta(const HiggsBeta& beta, cplx z, cplx zeta);
// Same field in the chart eta = 1 / zeta.
cplx a_from_beta_eta(const HiggsBeta& beta, cplx z, cplx eta);

struct ComplexMmConditions {
    bool q_tilde_constant = true;
    bool q_holomorphic = true;
    bool trace_closed = true;
    double q_tilde_defect = 0, q_defect = 0, trace_defect = 0;
    bool pass() const { return q_tilde_constant && q_holomorphic && trace_closed; }
    std::string failures() const;
};

ComplexMmConditions check_complex_mm_conditions(const HiggsBeta& beta, double tol = 1e-7);

// Wirtinger derivatives of a smooth function of z by 4th order stencils plus Richardson.
cplx wirtinger_dz(const ZFn& f, cplx z, double h = 1e-3);
cplx wirtinger_dzbar(const ZFn& f, cplx z, double h = 1e-3);

// k = -d_z A + d_z t zeta d_zeta A - d_z t A.
cplx k_function(const DeformationField& A, const CalabiLocalModel& model, cplx z, cplx zeta);

// div(dbar* A^{1,0}), closed form in terms of k.
cplx div_dbar_star(const DeformationField& A, const CalabiLocalModel& model, cplx z, cplx zeta);
// The same divergence assembled by finite differences from metric_blocks and christoffels.
cplx div_dbar_star_fd(const DeformationField& A, const CalabiLocalModel& model, cplx z, cplx zeta,
                      double h = 1e-3);

struct IdentityPair {
    double lhs = 0, rhs = 0;
};

// div[g(nabla^a A^{0,1}, A^{1,0}) d_a + c.c.] against 2|A|^2 (phi'' + (phi'+1)^2 / phi)
// for upper triangular beta with beta^2_2 = beta^1_1.
IdentityPair divergence_identity(const CalabiLocalModel& model, const HiggsBeta& beta, cplx z, cplx zeta,
                                 double h = 1e-3);

// |A^{1,0}|^2 = 4 phi |zeta|^2 |beta^1_2|^2 / ((1 + tau) g0)
double deformation_norm_sq(const CalabiLocalModel& model, const HiggsBeta& beta, cplx z, cplx zeta);

// int_0^m e^{t} ((phi' + 1)^2 + phi phi'') d tau, which vanishes.
double source_total_integral(const MomentumProfile& profile);

}  // namespace hcsck
