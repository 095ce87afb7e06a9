#include "hcsck/ruled_bvp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace hcsck {

namespace {

double chi0(double m) { return -m * m * (4.0 + 3.0 * m) / (2.0 * (2.0 + m)); }

int quad_count(int nodes, int requested) { return requested > 0 ? requested : std::max(256, 4 * nodes); }

void check_m(double m) {
    if (!(m > 0.0) || !std::isfinite(m)) throw std::invalid_argument("m must be positive");
}

// Local values entering both operators.
struct Local {
    double lam, phi, d1, d2, K, X;  // K = (c/m^2) E / (1 + m lam), X = K Phi
};

Local local(const BvpPoint& q, double m, double c) {
    const double s = c / (m * m) / (1.0 + m * q.lam);
    return {q.lam, q.phi, q.d1, q.d2, s * q.e, s * q.e_phi};
}

double lin_part(const Local& l, double m) {
    const double g = 1.0 + m * l.lam;
    return l.d2 + 2.0 * m * l.d1 / g + m * m / g;
}

double sqrt_arg(const Local& l) { return 4.0 - 2.0 * l.X; }

double eval_standard(const Local& l, double m) {
    const double b = l.K * (l.d1 + m) * (l.d1 + m) + l.X * l.d2;
    return lin_part(l, m) + 4.0 * m / (2.0 + m) - b;
}

double eval_alternate(const Local& l, double m) {
    const double arg = sqrt_arg(l);
    if (!(arg > 0.0)) {
        std::ostringstream os;
        os << "alternate operator: square root argument " << arg << " <= 0 at lambda = " << l.lam;
        throw std::domain_error(os.str());
    }
    const double w = std::sqrt(arg);
    const double g = 1.0 + m * l.lam;
    const double P = l.X * m * m / (g * g) * l.phi - l.K * (m + l.d1) * (m + l.d1);
    return w * lin_part(l, m) + 8.0 * m / (2.0 + m) + P / w;
}

struct Basis {
    Eigen::VectorXd nodes;
    Eigen::MatrixXd T, T1, T2;  // nodes x (N - 1)
};

Basis basis_at_nodes(int N) {
    Basis b;
    b.nodes = ChebSeries::points(N);
    b.T.resize(N, N - 1);
    b.T1.resize(N, N - 1);
    b.T2.resize(N, N - 1);
    for (int j = 0; j < N - 1; ++j) {
        Eigen::VectorXd e = Eigen::VectorXd::Zero(j + 1);
        e[j] = 1.0;
        const ChebSeries t(e), t1 = t.derivative(), t2 = t1.derivative();
        for (int i = 0; i < N; ++i) {
            b.T(i, j) = t(b.nodes[i]);
            b.T1(i, j) = t1(b.nodes[i]);
            b.T2(i, j) = t2(b.nodes[i]);
        }
    }
    return b;
}

void check_nodes(int N) {
    if (N < 8 || N % 2 != 0) throw std::invalid_argument("node count must be even and at least 8");
}

}  // namespace

const char* to_string(Variant v) { return v == Variant::standard ? "standard" : "alternate"; }

Variant variant_from_string(const std::string& s) {
    if (s == "standard") return Variant::standard;
    if (s == "alternate") return Variant::alternate;
    throw std::invalid_argument("unknown variant '" + s + "'");
}

double ApproxSolution::phi(double lam) const {
    const double l = lam * (1.0 - lam);
    return m / (2.0 * (2.0 + m)) * l * (4.0 + 2.0 * m - m * (4.0 + 3.0 * m) * l);
}

double ApproxSolution::d1(double lam) const {
    const double l = lam * (1.0 - lam), l1 = 1.0 - 2.0 * lam;
    const double a = 4.0 + 2.0 * m, b = m * (4.0 + 3.0 * m);
    return m / (2.0 * (2.0 + m)) * (a - 2.0 * b * l) * l1;
}

double ApproxSolution::d2(double lam) const {
    const double l = lam * (1.0 - lam), l1 = 1.0 - 2.0 * lam;
    const double a = 4.0 + 2.0 * m, b = m * (4.0 + 3.0 * m);
    return m / (2.0 * (2.0 + m)) * (-2.0 * b * l1 * l1 - 2.0 * (a - 2.0 * b * l));
}

ApproxSolution approx_solution(double m, Variant variant) {
    check_m(m);
    return {m, (variant == Variant::standard ? 2.0 : 8.0) * m * m};
}

BvpState BvpState::approximate(double m, Variant variant, int nodes) {
    check_nodes(nodes);
    return {m, Eigen::VectorXd::Zero(nodes - 1), approx_solution(m, variant).c0, variant};
}

BvpProfile::BvpProfile(const BvpState& state, int quad_points)
    : state_(state), p_(state.p.size() ? state.p : Eigen::VectorXd::Zero(1)) {
    check_m(state.m);
    dp_ = p_.derivative();
    d2p_ = dp_.derivative();
    quad_ = quad_count(state.nodes(), quad_points);
    const double m = state.m, x0 = chi0(m);
    const Eigen::VectorXd x = ChebSeries::points(quad_);
    Eigen::VectorXd r(quad_);
    for (int k = 0; k < quad_; ++k) {
        const double l = x[k] * (1.0 - x[k]);
        const double chi = x0 + p_(x[k]);
        const double psi = m + l * chi;
        if (!(psi > 0.0)) {
            std::ostringstream os;
            os << "profile is not positive near lambda = " << x[k];
            throw std::domain_error(os.str());
        }
        r[k] = -chi / psi;
    }
    s_ = ChebSeries::from_values(r).antiderivative();
    s_half_ = s_(0.5);
}

BvpPoint BvpProfile::at(double lam) const {
    const double m = state_.m;
    const double l = lam * (1.0 - lam), l1 = 1.0 - 2.0 * lam;
    const double p = p_(lam), p1 = dp_(lam), p2 = d2p_(lam);
    const double chi = chi0(m) + p;
    const double psi = m + l * chi;
    const double psi1 = l1 * chi + l * p1;
    const double psi2 = -2.0 * chi + 2.0 * l1 * p1 + l * p2;
    BvpPoint q;
    q.lam = lam;
    q.psi = psi;
    q.phi = l * psi;
    q.d1 = l1 * psi + l * psi1;
    q.d2 = -2.0 * psi + 2.0 * l1 * psi1 + l * psi2;
    if (!(q.phi > 0.0)) {
        std::ostringstream os;
        os << "profile is not positive at lambda = " << lam;
        throw std::domain_error(os.str());
    }
    const double es = std::exp(s_regular(lam));
    q.e = lam / (1.0 - lam) * es;
    q.e_phi = lam * lam * psi * es;
    return q;
}

double BvpProfile::residual(double lam) const {
    const Local l = local(at(lam), state_.m, state_.c);
    return state_.variant == Variant::standard ? eval_standard(l, state_.m) : eval_alternate(l, state_.m);
}

Eigen::VectorXd BvpProfile::residual(const Eigen::VectorXd& lam) const {
    Eigen::VectorXd out(lam.size());
    for (Eigen::Index i = 0; i < lam.size(); ++i) out[i] = residual(lam[i]);
    return out;
}

double BvpProfile::weighted_mean() const {
    const Eigen::VectorXd x = ChebSeries::points(quad_);
    Eigen::VectorXd v = residual(x);
    for (int k = 0; k < quad_; ++k) v[k] *= 1.0 + state_.m * x[k];
    return ChebSeries::from_values(v).integral();
}

double BvpProfile::unweighted_mean() const {
    return ChebSeries::from_values(residual(ChebSeries::points(quad_))).integral();
}

double BvpProfile::residual_sup_grid(int points) const {
    double s = 0.0;
    for (int i = 0; i < points; ++i) s = std::max(s, std::abs(residual((i + 0.5) / points)));
    return s;
}

Eigen::VectorXd operator_F(const BvpState& state) {
    BvpState s = state;
    s.variant = Variant::standard;
    return BvpProfile(s).residual(ChebSeries::points(s.nodes()));
}

Eigen::VectorXd operator_F_alt(const BvpState& state) {
    BvpState s = state;
    s.variant = Variant::alternate;
    return BvpProfile(s).residual(ChebSeries::points(s.nodes()));
}

Eigen::VectorXd residual(const BvpState& state) {
    return state.variant == Variant::standard ? operator_F(state) : operator_F_alt(state);
}

Eigen::MatrixXd jacobian(const BvpState& state) {
    const int N = state.nodes();
    check_nodes(N);
    const double m = state.m, c = state.c;
    const BvpProfile prof(state);
    const Basis B = basis_at_nodes(N);

    // I_j(lambda_i) = int_{1/2}^{lambda_i} m T_j / psi^2
    const int M = quad_count(N, 0);
    const Eigen::VectorXd xq = ChebSeries::points(M);
    const Eigen::MatrixXd V2C = ChebSeries::values_to_coeffs(M);
    const ChebSeries p(state.p);
    Eigen::MatrixXd Y(M, N - 1);
    for (int k = 0; k < M; ++k) {
        const double l = xq[k] * (1.0 - xq[k]);
        const double psi = m + l * (chi0(m) + p(xq[k]));
        const double w = m / (psi * psi);
        for (int j = 0; j < N - 1; ++j) Y(k, j) = w * ChebSeries::basis(j, xq[k]);
    }
    const Eigen::MatrixXd C = V2C * Y;
    Eigen::MatrixXd Ij(N, N - 1);
    for (int j = 0; j < N - 1; ++j) {
        const ChebSeries a = ChebSeries(C.col(j)).antiderivative();
        const double a0 = a(0.5);
        for (int i = 0; i < N; ++i) Ij(i, j) = a(B.nodes[i]) - a0;
    }

    Eigen::MatrixXd J(N, N);
    for (int i = 0; i < N; ++i) {
        const double lam = B.nodes[i];
        const Local l = local(prof.at(lam), m, c);
        const double g = 1.0 + m * lam;
        double gphi, gd1, gd2, kgk;  // kgk = K dG/dK
        if (state.variant == Variant::standard) {
            const double b = l.K * (l.d1 + m) * (l.d1 + m) + l.X * l.d2;
            gphi = -l.K * l.d2;
            gd1 = 2.0 * m / g - 2.0 * l.K * (l.d1 + m);
            gd2 = 1.0 - l.X;
            kgk = -b;
        } else {
            const double arg = sqrt_arg(l);
            if (!(arg > 0.0)) throw std::domain_error("alternate operator: square root argument <= 0");
            const double w = std::sqrt(arg), w3 = w * w * w;
            const double L = lin_part(l, m);
            const double Y2 = m * m / (g * g);
            const double P = l.X * Y2 * l.phi - l.K * (m + l.d1) * (m + l.d1);
            gphi = -l.K * L / w + 2.0 * l.K * Y2 * l.phi / w + l.K * P / w3;
            gd1 = 2.0 * m * w / g - 2.0 * l.K * (m + l.d1) / w;
            gd2 = w;
            kgk = -l.X * L / w + P / w + l.X * P / w3;
        }
        const double L2 = lam * lam * (1.0 - lam) * (1.0 - lam);
        const double ll = lam * (1.0 - lam), l1 = 1.0 - 2.0 * lam;
        for (int j = 0; j < N - 1; ++j) {
            const double v = L2 * B.T(i, j);
            const double v1 = 2.0 * ll * l1 * B.T(i, j) + L2 * B.T1(i, j);
            const double v2 = (2.0 * l1 * l1 - 4.0 * ll) * B.T(i, j) + 4.0 * ll * l1 * B.T1(i, j) + L2 * B.T2(i, j);
            J(i, j) = gphi * v + gd1 * v1 + gd2 * v2 - kgk * Ij(i, j);
        }
        J(i, N - 1) = kgk / c;
    }
    return J;
}

Eigen::VectorXd linearize(const BvpState& state, const Eigen::VectorXd& dp, double k) {
    const int N = state.nodes();
    if (dp.size() != N - 1) throw std::invalid_argument("linearize: direction has the wrong size");
    Eigen::VectorXd x(N);
    x << dp, k;
    return jacobian(state) * x;
}

ChebSeries model_D(const ChebSeries& u, double k) {
    const ChebSeries quad = ChebSeries::interpolate([](double x) { return 3.0 * x * x - 2.0 * x; }, 3);
    return u.derivative().derivative() + quad * (2.0 * k);
}

ModelInverse model_D_inverse(const ChebSeries& f, double mean_tol) {
    const double mean = f.integral();
    const double scale = std::max(1.0, f.coeffs().cwiseAbs().sum());
    if (std::abs(mean) > mean_tol * scale) {
        std::ostringstream os;
        os << "model_D_inverse: f must have zero mean, got " << mean;
        throw std::invalid_argument(os.str());
    }
    const ChebSeries F2 = f.antiderivative().antiderivative();
    const double k = -6.0 * F2(1.0);
    const ChebSeries quartic =
        ChebSeries::interpolate([](double x) { return x * x * x * x / 4.0 - x * x * x / 3.0; }, 5);
    return {F2 - quartic * (2.0 * k), k};
}

double model_norm(const ModelInverse& x, int samples) {
    const ChebSeries u1 = x.u.derivative(), u2 = u1.derivative();
    double s = 0.0;
    for (int i = 0; i < samples; ++i) {
        const double t = static_cast<double>(i) / (samples - 1);
        s = std::max({s, std::abs(x.u(t)), std::abs(u1(t)), std::abs(u2(t))});
    }
    return s + std::abs(x.k);
}

namespace {

double sup(const Eigen::VectorXd& v) { return v.cwiseAbs().maxCoeff(); }

bool try_residual(const BvpState& s, Eigen::VectorXd& out) {
    try {
        out = residual(s);
        return out.allFinite();
    } catch (const std::domain_error&) {
        return false;
    }
}

// One step of the model inverse: u = lambda^2 (1 - lambda)^2 q mapped back to p coefficients.
BvpState model_step(const BvpState& s, const Eigen::VectorXd& F) {
    const int N = s.nodes();
    const Eigen::VectorXd x = ChebSeries::points(N);
    Eigen::VectorXd fc = ChebSeries::from_values(F).coeffs();
    ChebSeries f(fc);
    fc[0] -= f.integral();
    const ModelInverse inv = model_D_inverse(ChebSeries(fc));
    Eigen::VectorXd q(N);
    for (int i = 0; i < N; ++i) {
        const double l = x[i] * (1.0 - x[i]);
        q[i] = inv.u(x[i]) / (l * l);
    }
    const double scale = s.variant == Variant::standard ? 1.0 : 0.5;
    BvpState out = s;
    out.p -= scale * ChebSeries::from_values(q).coeffs().head(N - 1);
    out.c -= scale * inv.k;
    return out;
}

}  // namespace

SolveReport solve(double m, Variant variant, const SolveOptions& opts) {
    check_m(m);
    check_nodes(opts.nodes);
    if (!(opts.tol > 0.0)) throw std::invalid_argument("tolerance must be positive");
    SolveReport rep;
    rep.m = m;
    rep.variant = variant;
    rep.nodes = opts.nodes;
    rep.c0 = approx_solution(m, variant).c0;
    BvpState s = BvpState::approximate(m, variant, opts.nodes);
    rep.state = s;
    rep.c_value = s.c;

    Eigen::VectorXd F;
    if (!try_residual(s, F)) {
        rep.message = "operator undefined at the approximate solution (profile not positive or sqrt domain)";
        rep.residual_sup = std::numeric_limits<double>::infinity();
        try {
            const Eigen::VectorXd x = ChebSeries::points(opts.nodes);
            const ApproxSolution a = approx_solution(m, variant);
            double mn = std::numeric_limits<double>::infinity();
            for (int i = 0; i < x.size(); ++i) mn = std::min(mn, a.phi(x[i]));
            rep.phi_min_interior = mn;
        } catch (...) {
        }
        return rep;
    }
    double r = sup(F);
    rep.history.push_back(r);

    if (opts.model_start) {
        const BvpState t = model_step(s, F);
        Eigen::VectorXd Ft;
        if (try_residual(t, Ft) && sup(Ft) < r) {
            s = t;
            F = Ft;
            r = sup(F);
            rep.history.push_back(r);
        }
    }

    int it = 0;
    while (r >= opts.tol && it < opts.max_iter) {
        ++it;
        Eigen::VectorXd dx;
        try {
            dx = jacobian(s).partialPivLu().solve(-F);
        } catch (const std::domain_error& e) {
            rep.message = e.what();
            break;
        }
        if (!dx.allFinite()) {
            rep.message = "singular linearization";
            break;
        }
        double step = 1.0;
        bool accepted = false;
        for (int h = 0; h <= opts.max_halvings; ++h, step *= 0.5) {
            BvpState t = s;
            t.p += step * dx.head(dx.size() - 1);
            t.c += step * dx[dx.size() - 1];
            Eigen::VectorXd Ft;
            if (try_residual(t, Ft) && sup(Ft) < r) {
                s = t;
                F = Ft;
                r = sup(F);
                accepted = true;
                break;
            }
        }
        rep.history.push_back(r);
        if (!accepted) {
            rep.message = "line search failed";
            break;
        }
    }

    rep.iterations = it;
    rep.state = s;
    rep.residual_sup = r;
    rep.c_value = s.c;
    const Eigen::VectorXd x = ChebSeries::points(opts.nodes);
    try {
        const BvpProfile prof(s);
        double mn = std::numeric_limits<double>::infinity();
        for (int i = 0; i < x.size(); ++i) mn = std::min(mn, prof.at(x[i]).phi);
        rep.phi_min_interior = mn;
        rep.weighted_mean = prof.weighted_mean();
        rep.unweighted_mean = prof.unweighted_mean();
        rep.residual_sup_grid = prof.residual_sup_grid();
    } catch (const std::domain_error& e) {
        rep.phi_min_interior = 0.0;
        if (rep.message.empty()) rep.message = e.what();
    }
    const bool small = r < opts.tol;
    rep.converged = small && rep.phi_min_interior > 0.0 && rep.c_value > 0.0;
    if (rep.message.empty()) {
        if (!small) rep.message = "no convergence within the iteration cap";
        else if (!rep.converged) rep.message = "positivity violated at the converged point";
        else rep.message = "converged";
    }
    return rep;
}

double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size() || x.size() < 2) throw std::invalid_argument("loglog_slope: need two or more points");
    const int n = static_cast<int>(x.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (int i = 0; i < n; ++i) {
        const double a = std::log(x[i]), b = std::log(y[i]);
        sx += a;
        sy += b;
        sxx += a * a;
        sxy += a * b;
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

OrderScan order_scan(const std::vector<double>& m_list, Variant variant, int nodes, double c0_override) {
    if (m_list.size() < 2) throw std::invalid_argument("order_scan: need at least two values of m");
    for (size_t i = 0; i < m_list.size(); ++i) {
        if (!(m_list[i] > 0.0 && m_list[i] <= 0.25)) throw std::invalid_argument("order_scan: m must lie in (0, 0.25]");
        if (i > 0 && !(m_list[i] < m_list[i - 1])) throw std::invalid_argument("order_scan: m list must be decreasing");
    }
    OrderScan scan;
    scan.variant = variant;
    const int G = 1000;
    for (double m : m_list) {
        BvpState s = BvpState::approximate(m, variant, nodes);
        if (c0_override > 0.0) s.c = c0_override * m * m;
        const BvpProfile prof(s);
        const BvpProfile base(BvpState{m, s.p, 0.0, Variant::standard});
        OrderRow row{m, 0, 0, 0};
        for (int i = 0; i < G; ++i) {
            const double lam = (i + 0.5) / G;
            row.residual_sup = std::max(row.residual_sup, std::abs(prof.residual(lam)));
            row.component1_sup = std::max(row.component1_sup, std::abs(base.residual(lam)));
            const BvpPoint q = base.at(lam);
            const double c2 = q.e / (1.0 + m * lam) * (q.d1 + m) * (q.d1 + m) + q.e_phi / (1.0 + m * lam) * q.d2;
            row.component2_sup = std::max(row.component2_sup, std::abs(c2));
        }
        scan.rows.push_back(row);
    }
    std::vector<double> ms, r, c1, c2;
    for (const auto& row : scan.rows) {
        ms.push_back(row.m);
        r.push_back(row.residual_sup);
        c1.push_back(row.component1_sup);
        c2.push_back(row.component2_sup);
    }
    scan.slope_residual = loglog_slope(ms, r);
    scan.slope_component1 = loglog_slope(ms, c1);
    scan.slope_component2 = loglog_slope(ms, c2);
    return scan;
}

}  // namespace hcsck
