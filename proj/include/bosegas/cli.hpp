#pragma once

// Command-line driver. Every subcommand emits a JSON summary that embeds the
// resolved configuration and a content hash of the numeric payload, so a run
// can be reproduced (and compared across thread counts) from its output
// alone. CSV side files are written on request.

#include <cstdint>
#include <exception>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "bosegas/bogoliubov.hpp"
#include "bosegas/config.hpp"
#include "bosegas/energy.hpp"
#include "bosegas/lattice.hpp"
#include "bosegas/numerics.hpp"
#include "bosegas/potential.hpp"
#include "bosegas/scattering.hpp"

namespace bosegas {
namespace cli {

using nlohmann::json;

inline std::string hash_hex(std::uint64_t h) {
    std::ostringstream out;
    out << std::hex << std::setw(16) << std::setfill('0') << h;
    return out.str();
}

// Hash of the payload with the config block and the hash field excluded, so
// runs that differ only in thread count report the same hash.
inline void seal_output(json& j, const RunConfig& cfg) {
    j.erase("config");
    j.erase("content_hash");
    j["content_hash"] = hash_hex(fnv1a(j.dump()));
    j["config"] = config_to_json(cfg);
}

inline void emit(const json& j, const std::string& out_path, std::ostream& out) {
    if (out_path.empty()) {
        out << j.dump(2) << '\n';
    } else {
        std::ofstream file(out_path);
        if (!file) throw std::runtime_error("cannot open output file '" + out_path + "'");
        file << j.dump(2) << '\n';
    }
}

inline void write_csv(const std::string& path, const std::string& header,
                      const std::vector<std::vector<double>>& rows) {
    std::ofstream file(path);
    if (!file) throw std::runtime_error("cannot open CSV file '" + path + "'");
    file << header << '\n';
    for (const auto& row : rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i) file << ',';
            file << format_double(row[i]);
        }
        file << '\n';
    }
}

inline std::string eta_csv_path(const std::string& path) {
    const auto dot = path.rfind('.');
    const auto slash = path.find_last_of("/\\");
    if (dot == std::string::npos || (slash != std::string::npos && dot < slash))
        return path + ".eta.csv";
    return path.substr(0, dot) + ".eta" + path.substr(dot);
}

// ---------------------------------------------------------------------------

inline json run_scattering(const RunConfig& cfg, const std::string& dump_profiles,
                           const std::string& csv_path) {
    json j;
    const RadialPotential V = make_potential(cfg);
    if (V.is_zero()) {
        j["a"] = 0.0;
        j["lambda"] = 0.0;
        j["check_residuals"] = json::array();
        return j;
    }
    const ScatteringSolution sol = solve_neumann(V, cfg.N, cfg.ell);
    j["a"] = sol.a;
    j["lambda"] = sol.lambda;
    j["R"] = sol.R;
    j["vf_integral"] = sol.vf_integral;

    const int K_res = cfg.cutoff;
    const RadialProfile eta =
        eta_profile(sol, two_pi * (std::max(6.0 * cfg.N, static_cast<double>(K_res)) + 2.0));
    json residuals = json::array();
    for (const LatticeVec p : {LatticeVec{1, 0, 0}, LatticeVec{1, 1, 0}, LatticeVec{2, 1, 0}}) {
        json entry;
        entry["p"] = {p[0], p[1], p[2]};
        entry["residual"] = scattering_residual(sol, p, K_res, &eta);
        residuals.push_back(entry);
    }
    j["check_residuals"] = residuals;
    j["residual_cutoff"] = K_res;

    const std::string profile_path = !dump_profiles.empty() ? dump_profiles : csv_path;
    if (!profile_path.empty()) {
        std::vector<std::vector<double>> rows;
        rows.reserve(sol.r_grid.size());
        for (std::size_t i = 0; i < sol.r_grid.size(); ++i) {
            const double r = sol.r_grid[i];
            const double f = r > 0.0 ? sol.u_grid[i] / r : sol.du_at_0;
            rows.push_back({r, f, sol.w_grid[i]});
        }
        write_csv(profile_path, "r,f,w", rows);
        std::vector<std::vector<double>> eta_rows;
        eta_rows.reserve(eta.grid.size());
        for (std::size_t i = 0; i < eta.grid.size(); ++i) {
            eta_rows.push_back({eta.grid[i], eta.values[i]});
        }
        const std::string eta_path = eta_csv_path(profile_path);
        write_csv(eta_path, "q,eta", eta_rows);
        j["profiles"] = profile_path;
        j["eta_profile"] = eta_path;
    }
    return j;
}

inline json run_spectrum(const RunConfig& cfg, const std::string& csv_path) {
    json j;
    const RadialPotential V = make_potential(cfg);
    const double a = scattering_length(V);
    j["a"] = a;
    j["cutoff"] = cfg.cutoff;
    const ShellTable table = build_shells(cfg.cutoff);
    std::vector<std::vector<double>> rows;
    rows.reserve(table.shells.size());
    json jrows = json::array();
    for (const Shell& s : table.shells) {
        const double q = two_pi * std::sqrt(static_cast<double>(s.n2));
        const double eps = dispersion(q, a);
        rows.push_back({q, eps});
        jrows.push_back({q, eps});
    }
    j["rows"] = jrows;
    if (!csv_path.empty()) {
        write_csv(csv_path, "q,epsilon", rows);
        j["csv"] = csv_path;
    }
    return j;
}

inline json run_elambda(const RunConfig& cfg) {
    json j;
    const TorusConstant el = e_lambda(cfg.max_m);
    j["estimate"] = el.value;
    j["band"] = el.band;
    j["estimate_at_half"] = el.value_at_half;
    j["band_at_half"] = el.band_at_half;
    j["converged"] = el.converged;
    j["max_m"] = cfg.max_m;
    return j;
}

inline json run_constants(const RunConfig& cfg, int threads) {
    json j;
    const RadialPotential V = make_potential(cfg);
    const ScatteringSolution sol = solve_neumann(V, cfg.N, cfg.ell);
    const BogoliubovCoefficients coeffs = bogoliubov_coefficients(sol, cfg.cutoff);
    const ConstantIdentity ident = c_O1_identity_check(coeffs, cfg.N, cfg.cutoff, threads);
    j["C_GN"] = ident.c_GN;
    j["C_O1"] = ident.lhs;
    j["identity"] = {{"lhs", ident.lhs}, {"rhs", ident.rhs}, {"diff", ident.diff}};
    j["N"] = cfg.N;
    j["cutoff"] = cfg.cutoff;
    return j;
}

inline json run_logterm(const RunConfig& cfg, int threads, bool have_N,
                        const std::string& csv_path) {
    json j;
    j["mode"] = cfg.mode;
    std::vector<double> ladder;
    if (have_N) {
        ladder = {cfg.N};
    } else if (cfg.mode == "integral") {
        ladder = {128.0, 256.0, 512.0, 1024.0, 2048.0};
    } else {
        // smallest ladder with nonzero sums that still spans the factor of 8
        // required by log_coefficient_fit
        ladder = {8.0, 16.0, 32.0, 64.0};
    }
    const double a = cfg.a;
    const double a4 = std::pow(a, 4);
    const bool do_lattice = cfg.mode != "integral";
    const bool do_integral = cfg.mode != "lattice";

    json jrows = json::array();
    std::vector<std::vector<double>> csv_rows;
    std::vector<std::pair<double, double>> fit_points;
    for (const double N : ladder) {
        json row;
        row["N"] = N;
        std::vector<double> csv_row{N};
        double fit_value = 0.0;
        if (do_lattice) {
            const double S = third_order_raw_sum(N, threads);
            const double cl = 1024.0 * std::pow(pi, 4) * a4 / N * S;
            row["lattice"] = cl;
            row["raw_sum"] = S;
            csv_row.push_back(cl);
            fit_value = N * cl / a4;
        }
        if (do_integral) {
            const double I = third_order_raw_integral(N);
            const double ci = 1024.0 * std::pow(pi, 4) * a4 / N * I;
            row["integral"] = ci;
            row["raw_integral"] = I;
            csv_row.push_back(ci);
            fit_value = N * ci / a4;
        }
        if (do_lattice && do_integral) {
            row["raw_abs_diff"] = std::abs(row["raw_sum"].get<double>() -
                                           row["raw_integral"].get<double>());
        }
        jrows.push_back(row);
        csv_rows.push_back(csv_row);
        fit_points.emplace_back(N, fit_value);
    }
    j["rows"] = jrows;
    j["a"] = a;

    if (cfg.fit) {
        // slope of N * c_tilde / a^4 against log N, compared with the
        // closed-form constant
        const LogFit fit = log_coefficient_fit(fit_points);
        j["fit"] = {{"c", fit.c},
                    {"d", fit.d},
                    {"max_residual", fit.max_residual},
                    {"reference", third_order_constant},
                    {"relative_deviation",
                     std::abs(fit.c - third_order_constant) / std::abs(third_order_constant)}};
    }
    if (!csv_path.empty()) {
        std::string header = "N";
        if (do_lattice) header += ",lattice";
        if (do_integral) header += ",integral";
        write_csv(csv_path, header, csv_rows);
        j["csv"] = csv_path;
    }
    return j;
}

inline json run_energy(const RunConfig& cfg, int threads) {
    json j;
    const RadialPotential V = make_potential(cfg);
    const EnergyBreakdown e = energy_expansion(V, cfg.N, cfg.ell, cfg.cutoff, cfg.max_m, threads);
    j["term1"] = e.term1;
    j["term2"] = e.term2;
    j["term3"] = e.term3;
    j["term4"] = e.term4;
    j["total"] = e.total;
    j["a"] = e.a;
    j["N"] = e.N;
    j["metadata"] = {{"cutoff", e.cutoff},
                     {"e_lambda_M", e.e_lambda_M},
                     {"e_lambda_value", e.e_lambda_value},
                     {"e_lambda_band", e.e_lambda_band},
                     {"second_order_tail", e.second_order_tail},
                     {"remainder_order", e.remainder_order}};
    return j;
}

inline json run_lhy(const RunConfig& cfg) {
    json j;
    j["rho"] = cfg.rho;
    j["a"] = cfg.a;
    j["energy_per_particle"] = lhy_energy(cfg.rho, cfg.a);
    j["log_term_consistency"] = lhy_consistency();
    return j;
}

}  // namespace cli

// Entry point shared by the binary and the tests. Returns the process exit
// status; all output goes through the provided streams.
inline int cli_run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    using cli::json;

    CLI::App app{"dilute Bose gas ground-state energy expansion"};
    app.require_subcommand(1);

    std::string config_path, out_path, csv_path, dump_profiles;
    RunConfig flags;
    app.add_option("--config", config_path, "configuration file (key=value or JSON)");
    const CLI::Option* oN = app.add_option("--N", flags.N, "particle number");
    const CLI::Option* oell = app.add_option("--ell", flags.ell, "box parameter in (0, 1/2)");
    const CLI::Option* ocut = app.add_option("--cutoff", flags.cutoff, "shell cutoff K");
    const CLI::Option* othr = app.add_option("--threads", flags.threads, "worker thread count");
    app.add_option("--out", out_path, "write the JSON summary here instead of stdout");
    app.add_option("--csv", csv_path, "write CSV side file");
    const CLI::Option* omode =
        app.add_option("--mode", flags.mode, "third-order route: lattice, integral or both");
    const CLI::Option* omaxm = app.add_option("--max-m", flags.max_m, "layer cutoff");
    const CLI::Option* ofit = app.add_flag("--fit", flags.fit, "fit the log coefficient");
    const CLI::Option* orho = app.add_option("--rho", flags.rho, "density");
    const CLI::Option* oa = app.add_option("--a", flags.a, "scattering length");

    CLI::App* sub_scattering =
        app.add_subcommand("scattering", "scattering length, eigenvalue and residual checks");
    sub_scattering->add_option("--dump-profiles", dump_profiles,
                               "write (r,f,w) CSV plus a (q,eta) side file");
    CLI::App* sub_spectrum = app.add_subcommand("spectrum", "dispersion table");
    CLI::App* sub_elambda = app.add_subcommand("elambda", "simple-cubic lattice constant");
    CLI::App* sub_constants =
        app.add_subcommand("constants", "order-one constants and identity check");
    CLI::App* sub_logterm = app.add_subcommand("logterm", "third-order lattice/integral ladder");
    CLI::App* sub_energy = app.add_subcommand("energy", "four-term energy expansion");
    CLI::App* sub_lhy = app.add_subcommand("lhy", "dilute-limit energy density");
    for (CLI::App* sub : {sub_scattering, sub_spectrum, sub_elambda, sub_constants, sub_logterm,
                          sub_energy, sub_lhy}) {
        sub->fallthrough();
    }

    std::vector<const char*> argv;
    argv.reserve(args.size() + 1);
    argv.push_back("bosegas");
    for (const auto& s : args) argv.push_back(s.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::ParseError& e) {
        json u;
        u["error"] = {{"code", "usage"}, {"message", e.what()}};
        out << u.dump(2) << '\n';
        err << "usage error: " << e.what() << '\n';
        return 2;
    }

    RunConfig cfg;
    std::string module = "config";
    try {
        if (!config_path.empty()) cfg = load_config(config_path);
        if (oN->count()) cfg.N = flags.N;
        if (oell->count()) cfg.ell = flags.ell;
        if (ocut->count()) cfg.cutoff = flags.cutoff;
        if (othr->count()) cfg.threads = flags.threads;
        if (omode->count()) cfg.mode = flags.mode;
        if (omaxm->count()) cfg.max_m = flags.max_m;
        if (ofit->count()) cfg.fit = flags.fit;
        if (orho->count()) cfg.rho = flags.rho;
        if (oa->count()) cfg.a = flags.a;
        validate_config(cfg);
        const int threads = resolve_threads(cfg);
        cfg.threads = threads;

        json j;
        if (sub_scattering->parsed()) {
            module = "scattering";
            j = cli::run_scattering(cfg, dump_profiles, csv_path);
        } else if (sub_spectrum->parsed()) {
            module = "bogoliubov";
            j = cli::run_spectrum(cfg, csv_path);
        } else if (sub_elambda->parsed()) {
            module = "bogoliubov";
            j = cli::run_elambda(cfg);
        } else if (sub_constants->parsed()) {
            module = "bogoliubov";
            j = cli::run_constants(cfg, threads);
        } else if (sub_logterm->parsed()) {
            module = "energy";
            j = cli::run_logterm(cfg, threads, oN->count() > 0, csv_path);
        } else if (sub_energy->parsed()) {
            module = "energy";
            j = cli::run_energy(cfg, threads);
        } else {
            module = "energy";
            j = cli::run_lhy(cfg);
        }
        cli::seal_output(j, cfg);
        cli::emit(j, out_path, out);
        return 0;
    } catch (const ConfigError& e) {
        json u;
        u["error"] = {{"code", "invalid_config"}, {"field", e.field}, {"message", e.what()}};
        out << u.dump(2) << '\n';
        err << "invalid config: " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        json u;
        u["error"] = {{"code", "compute"}, {"module", module}, {"message", e.what()}};
        out << u.dump(2) << '\n';
        err << "error in " << module << ": " << e.what() << '\n';
        return 1;
    }
}

}  // namespace bosegas
