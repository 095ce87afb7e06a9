#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "json.hpp"

namespace hcsck::cli {

inline constexpr const char* kVersion = "0.1.0";
inline constexpr int kSchemaVersion = 1;

enum Exit { ok = 0, invalid_input = 1, check_failed = 2 };

// Runs the command line; output files are written, anything else goes to out/err.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

// Suites behind the subcommands. Each result carries a boolean "pass".
nlohmann::json kernels_suite(int n, int samples, std::uint64_t seed);
nlohmann::json curve_suite(int N, double tau, double amplitude, double perturbation, std::uint64_t seed);
nlohmann::json deform_suite(double m, double lambda, int points, std::uint64_t seed);
nlohmann::json ruled_solve_report(double m, const std::string& variant, int nodes, double tol);
std::string ruled_scan_csv(const std::vector<double>& m_list, const std::vector<std::string>& variants, int nodes,
                           double c0_factor, bool* pass = nullptr);

}  // namespace hcsck::cli
