#include "cli.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <numbers>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "CLI11.hpp"
#include "hcsck/bg_kernel.hpp"
#include "hcsck/curve_mm.hpp"
#include "hcsck/ruled_bvp.hpp"
#include "hcsck/ruled_deformation.hpp"

namespace hcsck::cli {

using nlohmann::json;

namespace {

std::string timestamp() {
    const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

std::string sci(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17e", x);
    return buf;
}

json header(const std::string& command, std::uint64_t seed) {
    return json{{"schema_version", kSchemaVersion}, {"version", kVersion}, {"command", command}, {"seed", seed}};
}

// Brute-force matrix of B -> -1/2 (A^2 B + B A^2) in E-coordinates, column convention.
Mat6 xi_brute(const Eigen::Matrix4d& A) {
    const auto& E = e_basis();
    const Eigen::Matrix4d A2 = A * A;
    Mat6 M;
    for (int j = 0; j < 6; ++j) M.col(j) = e_coordinates(-0.5 * (A2 * E[j] + E[j] * A2));
    return M;
}

double spectral_rho(const Eigen::Matrix4d& A) {
    const Mat6 M = xi_brute(A);
    const Mat6 G = e_gram();
    const Vec6 s = G.diagonal().cwiseSqrt();
    // G^{1/2} M G^{-1/2} is symmetric since M is self-adjoint for G.
    const Mat6 S = s.asDiagonal() * M * s.cwiseInverse().asDiagonal();
    Eigen::SelfAdjointEigenSolver<Mat6> es(0.5 * (S + S.transpose()));
    Vec6 fv;
    for (int i = 0; i < 6; ++i) fv[i] = bg_f(es.eigenvalues()[i]);
    const Vec6 b = s.asDiagonal() * e_coordinates(A);
    return b.dot(es.eigenvectors() * fv.asDiagonal() * es.eigenvectors().transpose() * b);
}

ACTangent sample_tangent(int n, CounterRng& rng, double max_norm) {
    const ACPoint J = random_ac_point(n, rng, 0.5);
    ACTangent A = random_tangent(J, rng);
    const double norm = std::sqrt(ac_metric(A, A));
    const double r = max_norm * rng.uniform();
    return ACTangent(norm > 0 ? (A.A() * (r / norm)).eval() : A.A(), J);
}

struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

void write_output(const std::string& path, const std::string& text, std::ostream& out) {
    if (path.empty()) {
        out << text;
        return;
    }
    std::ofstream f(path, std::ios::binary);
    if (!f) throw IoError("cannot open output file '" + path + "'");
    f << text;
    if (!f) throw IoError("write failed for '" + path + "'");
}

}  // namespace

json kernels_suite(int n, int samples, std::uint64_t seed) {
    if (n != 1 && n != 2) throw std::invalid_argument("--n must be 1 or 2");
    if (samples < 1) throw std::invalid_argument("--samples must be positive");
    CounterRng rng(seed, 1);
    json j = header("kernels", seed);
    j["n"] = n;
    j["samples"] = samples;
    double eig = 0, xi = 0, rho = 0, drho = 0, delta = 0, inv = 0, psi = 0;
    for (int s = 0; s < samples; ++s) {
        const ACTangent A = sample_tangent(n, rng, 0.95);
        const ACTangent Ab = to_base(A);
        const SymplecticMatrix h = random_symplectic(n, rng, 0.3);
        const ACTangent Ah = transport(h, A);
        if (n == 2) {
            const Mat6 M = xi_matrix_n2(A);
            xi = std::max(xi, (M - xi_brute(Ab.A())).cwiseAbs().maxCoeff());
            Eigen::EigenSolver<Mat6> es(M);
            std::vector<double> num, cf;
            for (int i = 0; i < 6; ++i) num.push_back(es.eigenvalues()[i].real());
            for (double v : eigenvalues_n2(A)) cf.insert(cf.end(), {v, v});
            std::sort(num.begin(), num.end());
            std::sort(cf.begin(), cf.end());
            for (int i = 0; i < 6; ++i) eig = std::max(eig, std::abs(num[i] - cf[i]));
            const SpectralData sd = spectral_data_n2(A);
            delta = std::max({delta, std::abs(sd.delta_plus + sd.delta_minus - sd.trace_sq),
                              std::abs(sd.delta_plus * sd.delta_minus - sd.det)});
            const double r = rho_n2(A);
            rho = std::max(rho, std::abs(r - spectral_rho(Ab.A())));
            inv = std::max(inv, std::abs(rho_n2(Ah) - r));
            const ACTangent D = random_tangent(A.base(), rng);
            const double hstep = 1e-5;
            const double fd = (rho_n2(ACTangent(A.A() + hstep * D.A(), A.base())) -
                               rho_n2(ACTangent(A.A() - hstep * D.A(), A.base()))) / (2 * hstep);
            const double an = drho_n2(A, D.A());
            drho = std::max(drho, std::abs(fd - an) / std::max(std::abs(an), 1e-3));
        } else {
            const double d = Ab.A().determinant();
            const double r = rho_n1(A);
            rho = std::max(rho, std::abs(r - bg_f(d) * 0.5 * (Ab.A() * Ab.A()).trace()));
            inv = std::max(inv, std::abs(rho_n1(Ah) - r));
            const double alpha = 2.0 * std::sqrt(std::max(0.0, -d));
            psi = std::max(psi, std::abs(psi_psitilde(A).psi - psi_n1_from_alpha_norm(alpha)));
        }
    }
    j["max_eigenvalue_deviation"] = eig;
    j["max_xi_matrix_deviation"] = xi;
    j["max_rho_spectral_deviation"] = rho;
    j["max_drho_relative_error"] = drho;
    j["max_delta_identity_error"] = delta;
    j["max_sp_invariance_error"] = inv;
    j["max_psi_form_deviation"] = psi;
    j["pass"] = eig < 1e-9 && xi < 1e-9 && rho < 1e-9 && drho < 1e-6 && delta < 1e-10 && inv < 1e-9 && psi < 1e-12;
    return j;
}

json curve_suite(int N, double tau, double amplitude, double perturbation, std::uint64_t seed) {
    if (N < 8 || N % 2) throw std::invalid_argument("--n must be even and at least 8");
    if (!(std::abs(tau) < 1.0)) throw std::invalid_argument("--tau must satisfy |tau| < 1");
    CounterRng rng(seed, 2);
    double a[3][3];
    for (auto& row : a)
        for (double& v : row) v = perturbation * rng.uniform(-1.0, 1.0);
    auto u0 = [&](double x, double y) {
        double s = amplitude * std::cos(x);
        for (int k = 0; k < 3; ++k)
            for (int l = 0; l < 3; ++l) s += a[k][l] * std::cos(k * x + l * y + 0.3 * (k + l));
        return s;
    };
    const TorusField exact = TorusField::sample(N, [](double, double) { return 0.0; },
                                                [&](double, double) { return cplx(tau, 0.0); });
    const TorusField start = TorusField::sample(N, u0, [&](double, double) { return cplx(tau, 0.0); });
    const CurveSolveReport rep = solve_curve(start.tau(), start.u());
    const Mat ug = rep.u.array() - rep.u.mean();
    json j = header("curve", seed);
    j["n"] = N;
    j["tau"] = tau;
    j["amplitude"] = amplitude;
    j["perturbation"] = perturbation;
    j["exact_residual_sup"] = curve_real_mm(exact).cwiseAbs().maxCoeff();
    j["converged"] = rep.converged;
    j["iterations"] = rep.iterations;
    j["residual_sup"] = rep.residual_sup;
    j["residual_history"] = rep.history;
    j["u_deviation_sup"] = ug.cwiseAbs().maxCoeff();
    j["message"] = rep.message;
    j["pass"] = rep.converged && rep.residual_sup < 1e-9;
    return j;
}

json deform_suite(double m, double lambda, int points, std::uint64_t seed) {
    if (!(m > 0.0) || !(lambda > 0.0) || points < 1) throw std::invalid_argument("need m > 0, lambda > 0, points > 0");
    CounterRng rng(seed, 3);
    Eigen::VectorXd p(2);
    p << 0.3, -0.2;
    const CalabiLocalModel model(MomentumProfile::admissible(m, p / std::max(1.0, m * m)), lambda);
    const HiggsBeta conforming = HiggsBeta::upper_triangular(cplx(1.0, 0.5), lambda);
    const HiggsBeta violating{[](cplx) { return cplx(0.0); }, [](cplx) { return cplx(0.0); },
                              [](cplx) { return cplx(1.0); }, [](cplx z) { return std::conj(z); }, lambda};
    const HiggsBeta generic{[](cplx z) { return z; }, [](cplx z) { return 0.3 * z * z; },
                            [](cplx z) { return 1.0 + 0.2 * z; }, [](cplx z) { return z + 0.3 * std::conj(z); },
                            lambda};
    const DeformationField Ac = deformation_from_beta(conforming), Av = deformation_from_beta(violating),
                           Ag = deformation_from_beta(generic);
    double chr = 0, ident = 0, divfd = 0, conf = 0, viol = 0, rmin = 1e300, rmax = -1e300;
    for (int i = 0; i < points; ++i) {
        const cplx z = std::polar(0.5 * std::sqrt(rng.uniform()), 2 * std::numbers::pi * rng.uniform());
        const double tau = m * rng.uniform(0.15, 0.85);
        const cplx zeta = model.zeta_for_tau(z, tau, 2 * std::numbers::pi * rng.uniform());
        // Christoffels against d_a g . g^{-1}
        const Christoffels G = christoffels(model.profile(), model.point(z, zeta));
        const Eigen::Matrix2cd gi = metric_blocks(model.profile(), model.point(z, zeta)).g_inverse;
        double err = 0, scale = 0;
        for (int a = 0; a < 2; ++a) {
            Eigen::Matrix2cd dg;
            for (int r = 0; r < 2; ++r)
                for (int c = 0; c < 2; ++c) {
                    auto entry = [&](cplx w) {
                        return metric_blocks(model.profile(), a == 0 ? model.point(w, zeta) : model.point(z, w)).g(r, c);
                    };
                    dg(r, c) = wirtinger_dz(entry, a == 0 ? z : zeta, 1e-3 * (a == 0 ? 1.0 : std::max(1.0, std::abs(zeta))));
                }
            const Eigen::Matrix2cd T = dg * gi;
            for (int b = 0; b < 2; ++b)
                for (int c = 0; c < 2; ++c) {
                    err = std::max(err, std::abs(T(b, c) - G(c + 1, a + 1, b + 1)));
                    scale = std::max(scale, std::abs(T(b, c)));
                }
        }
        chr = std::max(chr, err / scale);
        const IdentityPair id = divergence_identity(model, conforming, z, zeta);
        ident = std::max(ident, std::abs(id.lhs - id.rhs) / std::abs(id.rhs));
        const cplx cf = div_dbar_star(Ag, model, z, zeta), fd = div_dbar_star_fd(Ag, model, z, zeta);
        divfd = std::max(divfd, std::abs(cf - fd) / std::abs(cf));
        conf = std::max(conf, std::abs(div_dbar_star(Ac, model, z, zeta)));
        viol = std::max(viol, std::abs(div_dbar_star(Av, model, z, zeta)));
        const ProfileJet jt = model.profile().jet(tau);
        const double et = model.fibre_metric(z) * std::norm(zeta);
        const double ratio = id.rhs / (et / (1 + tau) * (jt.phi * jt.d2phi + (jt.dphi + 1) * (jt.dphi + 1)));
        rmin = std::min(rmin, ratio);
        rmax = std::max(rmax, ratio);
    }
    const double spread = (rmax - rmin) / std::abs(0.5 * (rmax + rmin));
    const double total = source_total_integral(model.profile());
    const ComplexMmConditions cc = check_complex_mm_conditions(conforming);
    const ComplexMmConditions cv = check_complex_mm_conditions(violating);
    json j = header("deform verify", seed);
    j["m"] = m;
    j["lambda"] = lambda;
    j["points"] = points;
    j["christoffel_max_rel_error"] = chr;
    j["divergence_identity_max_rel_error"] = ident;
    j["div_dbar_star_fd_max_rel_error"] = divfd;
    j["conforming_div_max"] = conf;
    j["violating_div_max"] = viol;
    j["source_ratio_spread"] = spread;
    j["source_ratio"] = 0.5 * (rmax + rmin);
    j["source_total_integral"] = total;
    j["conforming_conditions_pass"] = cc.pass();
    j["violating_conditions_failures"] = cv.failures();
    const KahlerClass kc = kahler_class(m);
    j["kahler_class_fibre"] = kc.fibre_coefficient;
    j["kahler_class_section"] = kc.section_coefficient;
    j["pass"] = chr < 1e-5 && ident < 1e-3 && divfd < 1e-4 && conf < 1e-9 && viol > 1e-3 && spread < 1e-6 &&
                std::abs(total) < 1e-8 && cc.pass() && !cv.pass();
    return j;
}

json ruled_solve_report(double m, const std::string& variant, int nodes, double tol) {
    SolveOptions opts;
    opts.nodes = nodes;
    opts.tol = tol;
    const SolveReport r = solve(m, variant_from_string(variant), opts);
    json j = header("ruled solve", 0);
    j["m"] = m;
    j["variant"] = variant;
    j["nodes"] = nodes;
    j["tol"] = tol;
    j["residual_sup"] = r.residual_sup;
    j["residual_sup_grid"] = r.residual_sup_grid;
    j["weighted_mean"] = r.weighted_mean;
    j["unweighted_mean"] = r.unweighted_mean;
    j["iterations"] = r.iterations;
    j["phi_min_interior"] = r.phi_min_interior;
    j["c_value"] = r.c_value;
    j["c0"] = r.c0;
    j["converged"] = r.converged;
    j["residual_history"] = r.history;
    j["message"] = r.message;
    j["pass"] = r.converged;
    for (auto& [k, v] : j.items())
        if (v.is_number_float() && !std::isfinite(v.get<double>())) v = nullptr;
    return j;
}

std::string ruled_scan_csv(const std::vector<double>& m_list, const std::vector<std::string>& variants, int nodes,
                           double c0_factor, bool* pass) {
    std::ostringstream os;
    os << "# schema_version=" << kSchemaVersion << "\n# version=" << kVersion << "\n# command=ruled scan\n# seed=0\n";
    os << "# nodes=" << nodes << "\n# c0_factor=" << sci(c0_factor) << "\n";
    os << "m,variant,residual_sup,component1_sup,component2_sup,slope_residual,slope_component1,slope_component2\n";
    bool ok = true;
    for (const auto& v : variants) {
        const OrderScan s = order_scan(m_list, variant_from_string(v), nodes, c0_factor);
        ok = ok && s.slope_residual >= 2.8 && s.slope_component1 >= 1.8 && s.slope_component2 >= 1.8;
        for (const auto& r : s.rows)
            os << sci(r.m) << ',' << v << ',' << sci(r.residual_sup) << ',' << sci(r.component1_sup) << ','
               << sci(r.component2_sup) << ',' << sci(s.slope_residual) << ',' << sci(s.slope_component1) << ','
               << sci(s.slope_component2) << "\n";
    }
    if (pass) *pass = ok;
    return os.str();
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Numerical toolkit for HcscK moment-map formulas", "hcsck"};
    app.set_version_flag("--version", kVersion);
    app.require_subcommand(1);
    std::string out_path;

    int k_n = 2, k_samples = 1000;
    std::uint64_t seed = 7;
    auto* kernels = app.add_subcommand("kernels", "Bg kernel oracle suite");
    kernels->add_option("--n", k_n, "Dimension index (1 or 2)")->check(CLI::IsMember({1, 2}));
    kernels->add_option("--samples", k_samples, "Random tangents")->check(CLI::PositiveNumber);
    kernels->add_option("--seed", seed, "Random seed");
    kernels->add_option("--out", out_path, "JSON output file");

    int c_n = 32;
    double c_tau = 0.5, c_amp = 0.1, c_pert = 0.0;
    auto* curve = app.add_subcommand("curve", "Solve the curve equation on a flat torus");
    curve->add_option("--n", c_n, "Grid resolution");
    curve->add_option("--tau", c_tau, "Constant quadratic differential");
    curve->add_option("--amplitude", c_amp, "Initial guess amplitude of cos(x)");
    curve->add_option("--perturbation", c_pert, "Amplitude of seeded low modes in the initial guess");
    curve->add_option("--seed", seed, "Random seed");
    curve->add_option("--out", out_path, "JSON output file");

    double d_m = 0.5, d_lambda = 1.3;
    int d_points = 50;
    auto* deform = app.add_subcommand("deform", "Deformation identities on the ruled surface");
    deform->require_subcommand(1);
    auto* verify = deform->add_subcommand("verify", "Check the identities at random points");
    verify->add_option("--m", d_m, "Fibre parameter")->check(CLI::PositiveNumber);
    verify->add_option("--lambda", d_lambda, "Fibre metric scale")->check(CLI::PositiveNumber);
    verify->add_option("--points", d_points, "Sample points")->check(CLI::PositiveNumber);
    verify->add_option("--seed", seed, "Random seed");
    verify->add_option("--out", out_path, "JSON output file");

    double r_m = 0.05, r_tol = 1e-9, r_c0 = 0.0;
    int r_nodes = 64;
    std::string r_variant = "standard", s_variant = "both";
    std::vector<double> m_list{0.2, 0.1, 0.05, 0.025};
    auto* ruled = app.add_subcommand("ruled", "Adiabatic boundary value problem");
    ruled->require_subcommand(1);
    auto* rsolve = ruled->add_subcommand("solve", "Newton solve for (Phi, C)");
    rsolve->add_option("--m", r_m, "Parameter m")->required()->check(CLI::PositiveNumber);
    rsolve->add_option("--variant", r_variant, "standard or alternate")->check(CLI::IsMember({"standard", "alternate"}));
    rsolve->add_option("--nodes", r_nodes, "Collocation nodes (even)");
    rsolve->add_option("--tol", r_tol, "Residual tolerance")->check(CLI::PositiveNumber);
    rsolve->add_option("--out", out_path, "JSON output file");
    auto* rscan = ruled->add_subcommand("scan", "Residual order of the approximate solution");
    rscan->add_option("--m-list", m_list, "Decreasing values of m")->delimiter(',');
    rscan->add_option("--variant", s_variant, "standard, alternate or both")
        ->check(CLI::IsMember({"standard", "alternate", "both"}));
    rscan->add_option("--nodes", r_nodes, "Collocation nodes (even)");
    rscan->add_option("--c0-factor", r_c0, "Use c0 = factor m^2 instead of the variant default");
    rscan->add_option("--out", out_path, "CSV output file");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) {
            app.exit(e, out, err);
            return ok;
        }
        err << "error: " << e.what() << "\n" << app.help();
        return invalid_input;
    }

    try {
        json j;
        if (*kernels) {
            j = kernels_suite(k_n, k_samples, seed);
        } else if (*curve) {
            j = curve_suite(c_n, c_tau, c_amp, c_pert, seed);
        } else if (*verify) {
            j = deform_suite(d_m, d_lambda, d_points, seed);
        } else if (*rsolve) {
            j = ruled_solve_report(r_m, r_variant, r_nodes, r_tol);
        } else {
            std::vector<std::string> vs =
                s_variant == "both" ? std::vector<std::string>{"standard", "alternate"} : std::vector{s_variant};
            bool pass = false;
            write_output(out_path, ruled_scan_csv(m_list, vs, r_nodes, r_c0, &pass), out);
            return pass ? ok : check_failed;
        }
        j["timestamp"] = timestamp();
        write_output(out_path, j.dump(2) + "\n", out);
        return j["pass"].get<bool>() ? ok : check_failed;
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << "\n";
        return invalid_input;
    } catch (const IoError& e) {
        err << "error: " << e.what() << "\n";
        return invalid_input;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return check_failed;
    }
}

}  // namespace hcsck::cli
