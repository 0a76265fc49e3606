// latcharge_cli.cpp -- command-line front end: binds JSON run configurations
// to the library and writes JSON reports / CSV landscapes.
//
// Exit codes: 0 ok, 2 configuration error, 3 numerical failure,
// 4 route disagreement, 5 verification mismatch.

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "latcharge/energy.hpp"
#include "latcharge/optimize.hpp"
#include "latcharge/special_functions.hpp"

using json = nlohmann::ordered_json;
using namespace latcharge;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitNumeric = 3;
constexpr int kExitRouteDisagreement = 4;
constexpr int kExitMismatch = 5;

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

json preset_table() {
    json p;
    p["madelung"] = {{"lattice", {{"preset", "cubic"}, {"dimension", 3}}},
                     {"potential", {{"kind", "riesz"}, {"s", 1.0}}},
                     {"N", 2},
                     {"charges", {{"preset", "alternating"}}},
                     {"routes", {"ewald"}},
                     {"tol", 1e-9}};
    p["coulomb-1d"] = {{"lattice", {{"preset", "cubic"}, {"dimension", 1}}},
                       {"potential", {{"kind", "riesz"}, {"s", 1.0}}},
                       {"N", 2},
                       {"charges", {{"preset", "alternating"}}},
                       {"routes", {"ewald", "convergence_factor", "epstein"}},
                       {"etas", {0.2, 0.1, 0.05, 0.025, 0.0125, 0.00625}},
                       {"tol", 1e-8}};
    p["born-cubic"] = {{"lattice", {{"preset", "cubic"}, {"dimension", 3}}},
                       {"potential", {{"kind", "riesz"}, {"s", 1.0}}},
                       {"N", 2},
                       {"samples", 200},
                       {"tol", 1e-12}};
    p["born-triangular"] = {{"lattice", {{"preset", "triangular"}}},
                            {"potential", {{"kind", "riesz"}, {"s", 1.0}}},
                            {"N", 3},
                            {"samples", 200},
                            {"tol", 1e-12}};
    p["theta-cubic"] = {{"lattice", {{"preset", "cubic"}, {"dimension", 3}}},
                        {"grid", 8},
                        {"alphas", {0.5, 1.0, 2.0}}};
    p["theta-triangular"] = {{"lattice", {{"preset", "triangular"}}},
                             {"grid", 12},
                             {"alphas", {0.5, 1.0, 2.0}}};
    return p;
}

json load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    json cfg;
    try {
        in >> cfg;
    } catch (const json::exception& e) {
        throw ConfigError(std::string("config is not valid JSON: ") + e.what());
    }
    if (!cfg.is_object()) throw ConfigError("config root must be a JSON object");
    if (cfg.contains("preset")) {
        const json presets = preset_table();
        const std::string name = cfg.at("preset").get<std::string>();
        if (!presets.contains(name)) throw ConfigError("unknown preset: " + name);
        json merged = presets.at(name);
        for (auto& [key, value] : cfg.items())
            if (key != "preset") merged[key] = value;
        return merged;
    }
    return cfg;
}

double finite_number(const json& j, const std::string& what) {
    if (!j.is_number()) throw ConfigError(what + " must be a number");
    const double v = j.get<double>();
    if (!std::isfinite(v)) throw ConfigError(what + " must be finite");
    return v;
}

BravaisLattice parse_lattice(const json& cfg) {
    if (!cfg.contains("lattice")) throw ConfigError("missing 'lattice'");
    const json& l = cfg.at("lattice");
    if (l.contains("generator")) {
        const json& rows = l.at("generator");
        if (!rows.is_array() || rows.empty()) throw ConfigError("'generator' must be an array of rows");
        const int d = static_cast<int>(rows.size());
        Eigen::MatrixXd A(d, d);
        for (int i = 0; i < d; ++i) {
            if (!rows[i].is_array() || static_cast<int>(rows[i].size()) != d)
                throw ConfigError("'generator' must be a square row-major matrix");
            for (int j = 0; j < d; ++j) A(i, j) = finite_number(rows[i][j], "generator entry");
        }
        return BravaisLattice(A);
    }
    const std::string preset = l.value("preset", "");
    if (preset == "cubic") return cubic(l.value("dimension", 3));
    if (preset == "triangular") return triangular();
    if (preset == "orthorhombic") {
        if (!l.contains("lengths")) throw ConfigError("orthorhombic lattice needs 'lengths'");
        std::vector<double> lengths;
        for (const auto& v : l.at("lengths")) lengths.push_back(finite_number(v, "length"));
        return orthorhombic(lengths);
    }
    throw ConfigError("lattice needs a 'generator' or a known 'preset'");
}

Potential parse_potential(const json& cfg) {
    if (!cfg.contains("potential")) throw ConfigError("missing 'potential'");
    const json& p = cfg.at("potential");
    const std::string kind = p.value("kind", "");
    if (kind == "riesz") return Potential::riesz(finite_number(p.at("s"), "riesz exponent"));
    if (kind == "gaussian")
        return Potential::gaussian(finite_number(p.at("t0"), "gaussian t0"), p.value("weight", 1.0));
    throw ConfigError("potential 'kind' must be 'riesz' or 'gaussian'");
}

int parse_period(const json& cfg) {
    if (!cfg.contains("N")) throw ConfigError("missing 'N'");
    const int N = cfg.at("N").get<int>();
    if (N < 1) throw ConfigError("'N' must be >= 1");
    return N;
}

ChargeConfiguration parse_charges(const json& cfg, const BravaisLattice& L, int N) {
    if (!cfg.contains("charges")) throw ConfigError("missing 'charges'");
    const json& c = cfg.at("charges");
    if (c.contains("values")) {
        const MultiIndex mi(L.dimension(), N);
        const json& vals = c.at("values");
        if (static_cast<std::int64_t>(vals.size()) != mi.size())
            throw ConfigError("'charges.values' must hold N^d entries in lexicographic order");
        Eigen::VectorXd v(mi.size());
        for (std::int64_t i = 0; i < mi.size(); ++i) v(i) = finite_number(vals[i], "charge");
        return ChargeConfiguration(L, N, std::move(v));
    }
    const std::string preset = c.value("preset", "");
    if (preset == "alternating") {
        if (N != 2) throw ConfigError("charges preset 'alternating' requires N = 2");
        return alternating(L);
    }
    if (preset == "honeycomb") {
        if (N != 3) throw ConfigError("charges preset 'honeycomb' requires N = 3");
        const ChargeConfiguration hc = honeycomb_triangular();
        if ((L.generator() - hc.lattice().generator()).cwiseAbs().maxCoeff() > 1e-12)
            throw ConfigError("charges preset 'honeycomb' requires the triangular lattice");
        return hc;
    }
    if (preset == "constant") {
        const MultiIndex mi(L.dimension(), N);
        return ChargeConfiguration(L, N, Eigen::VectorXd::Ones(mi.size()));
    }
    throw ConfigError("charges need 'values' or a preset in {alternating, honeycomb, constant}");
}

double parse_tol(const json& cfg, std::optional<double> override_tol) {
    double tol = override_tol.value_or(cfg.value("tol", 1e-9));
    if (!(tol >= 1e-14 && tol <= 1e-2))
        throw ConfigError("'tol' must lie in [1e-14, 1e-2]");
    return tol;
}

std::vector<double> parse_alphas(const json& cfg) {
    std::vector<double> alphas;
    if (cfg.contains("alphas"))
        for (const auto& a : cfg.at("alphas")) {
            const double v = finite_number(a, "alpha");
            if (!(v > 0.0)) throw ConfigError("'alphas' must be positive");
            alphas.push_back(v);
        }
    return alphas;
}

void write_file(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << text;
}

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

json route_json(const EnergyReport& r) {
    json j;
    j["route"] = route_name(r.route);
    j["value"] = r.value;
    j["alpha"] = r.alpha;
    j["radius_real"] = r.radius_real;
    j["radius_dual"] = r.radius_dual;
    j["estimated_error"] = r.estimated_error;
    j["converged"] = r.converged;
    if (r.route == EnergyRoute::Epstein) j["boundary_s"] = r.boundary_s;
    return j;
}

json charges_json(const ChargeConfiguration& phi) {
    json arr = json::array();
    for (std::int64_t i = 0; i < phi.values().size(); ++i) arr.push_back(phi.values()(i));
    return arr;
}

// --- subcommands -----------------------------------------------------------

int run_theta(const json& cfg, const std::filesystem::path& outdir) {
    const BravaisLattice L = parse_lattice(cfg);
    const int d = L.dimension();
    const int grid = cfg.value("grid", 12);
    if (grid < 1) throw ConfigError("'grid' must be >= 1");
    std::vector<double> alphas = parse_alphas(cfg);
    if (alphas.empty() && cfg.contains("alphas")) throw ConfigError("'alphas' must not be empty");
    if (alphas.empty()) alphas = {0.25, 0.5, 1.0, 2.0, 4.0};

    std::ostringstream csv;
    for (int i = 0; i < d; ++i) csv << "l" << i + 1 << ",";
    csv << "alpha,value,branch,tail\n";
    const MultiIndex mesh(d, grid + 1);  // closed grid including lambda_i = 1
    for (double alpha : alphas) {
        for (std::int64_t i = 0; i < mesh.size(); ++i) {
            const Eigen::VectorXd lam = mesh.coords(i).cast<double>() / grid;
            const ThetaEvaluation th =
                translated_theta(L, L.generator() * lam, alpha, 1e-13);
            for (int c = 0; c < d; ++c) csv << format_double(lam(c)) << ",";
            csv << format_double(alpha) << "," << format_double(th.value) << ","
                << (th.branch == ThetaBranch::Direct ? "direct" : "dual") << ","
                << format_double(th.tail_bound) << "\n";
        }
    }
    write_file(outdir / "theta.csv", csv.str());
    std::cout << "wrote " << (outdir / "theta.csv").string() << "\n";
    return kExitOk;
}

int run_energy(const json& cfg, const std::filesystem::path& outdir, double tol,
               std::uint64_t seed) {
    const BravaisLattice L = parse_lattice(cfg);
    const Potential P = parse_potential(cfg);
    const int N = parse_period(cfg);
    const ChargeConfiguration phi = parse_charges(cfg, L, N);

    std::vector<std::string> routes;
    if (cfg.contains("routes"))
        for (const auto& r : cfg.at("routes")) routes.push_back(r.get<std::string>());
    if (routes.empty()) routes = {"ewald"};

    std::vector<EnergyReport> reports;
    for (const std::string& r : routes) {
        if (r == "ewald") {
            reports.push_back(energy_ewald(P, phi, cfg.value("alpha", kDefaultEwaldAlpha),
                                           std::min(tol, 1e-10)));
        } else if (r == "direct") {
            reports.push_back(energy_direct(P, phi, cfg.value("radius", 60.0)));
        } else if (r == "convergence_factor") {
            std::vector<double> etas;
            if (cfg.contains("etas"))
                for (const auto& e : cfg.at("etas")) etas.push_back(finite_number(e, "eta"));
            reports.push_back(energy_convergence_factor(P, phi, etas));
        } else if (r == "spectral") {
            reports.push_back(energy_spectral(P, phi, std::nullopt, std::min(tol, 1e-10)));
        } else if (r == "epstein") {
            if (!P.is_riesz()) throw ConfigError("epstein route requires a riesz potential");
            reports.push_back(energy_epstein(P.riesz_kind().s, phi, std::min(tol, 1e-10)));
        } else {
            throw ConfigError("unknown route: " + r);
        }
    }

    double lo = reports.front().value, hi = reports.front().value, err_sum = 0.0;
    for (const auto& r : reports) {
        lo = std::min(lo, r.value);
        hi = std::max(hi, r.value);
        err_sum += std::abs(r.estimated_error);
    }
    const double allowed = std::max(tol, err_sum);
    const bool agree = hi - lo <= allowed;

    json out;
    out["value"] = reports.front().value;
    out["seed"] = seed;
    out["tolerance"] = tol;
    out["routes"] = json::array();
    for (const auto& r : reports) out["routes"].push_back(route_json(r));
    out["agreement"] = {{"max_difference", hi - lo}, {"allowed", allowed}, {"ok", agree}};

    // mode table from the first spectral report, if any
    for (const auto& r : reports)
        if (!r.mode_table.empty()) {
            std::ostringstream csv;
            for (int i = 0; i < L.dimension(); ++i) csv << "k" << i + 1 << ",";
            csv << "value\n";
            for (const auto& m : r.mode_table) {
                for (int i = 0; i < m.k.size(); ++i) csv << m.k(i) << ",";
                csv << format_double(m.value) << "\n";
            }
            write_file(outdir / "modes.csv", csv.str());
            break;
        }

    const std::string text = out.dump(2) + "\n";
    write_file(outdir / "energy.json", text);
    std::cout << text;
    return agree ? kExitOk : kExitRouteDisagreement;
}

int run_optimize(const json& cfg, const std::filesystem::path& outdir, double tol) {
    const BravaisLattice L = parse_lattice(cfg);
    const Potential P = parse_potential(cfg);
    const int N = parse_period(cfg);

    const ThetaMinimum tm = minimize_translated_theta(L.dual());
    VerificationReport rep;
    const ChargeConfiguration phi = optimal_charges(L, P, N, &rep, std::min(tol, 1e-10));

    json out;
    out["theta"] = json::object();
    out["theta"]["minimizers"] = json::array();
    for (const auto& m : tm.minimizers) {
        json row = json::array();
        for (int i = 0; i < m.size(); ++i) row.push_back(m(i));
        out["theta"]["minimizers"].push_back(row);
    }
    out["theta"]["alphas"] = tm.alphas;
    out["theta"]["value"] = tm.value;
    out["theta"]["multiplicity"] = tm.multiplicity;
    out["theta"]["representability"] = tm.representability;
    out["theta"]["alpha_consistent"] = tm.alpha_consistent;
    json argmin = json::array();
    for (int i = 0; i < rep.argmin_k.size(); ++i) argmin.push_back(rep.argmin_k(i));
    out["argmin_k"] = argmin;
    out["degeneracy"] = rep.degeneracy;
    out["energy"] = rep.constructed_energy;
    out["summable"] = rep.summable;
    out["charges"] = charges_json(phi);

    const std::string text = out.dump(2) + "\n";
    write_file(outdir / "optimize.json", text);
    std::cout << text;
    return kExitOk;
}

int run_verify(const json& cfg, const std::filesystem::path& outdir, double tol,
               std::uint64_t seed) {
    BornSpec spec{parse_lattice(cfg), parse_potential(cfg), parse_period(cfg),
                  cfg.value("samples", 200), seed, std::min(tol, 1e-10)};
    if (spec.random_samples < 0) throw ConfigError("'samples' must be >= 0");
    const VerificationReport rep = verify_born(spec);

    json out;
    out["match"] = rep.match;
    out["summable"] = rep.summable;
    out["constructed_energy"] = rep.constructed_energy;
    out["brute_force_energy"] = rep.brute_force_energy;
    out["eigen_gap"] = rep.eigen_gap;
    out["degeneracy"] = rep.degeneracy;
    json argmin = json::array();
    for (int i = 0; i < rep.argmin_k.size(); ++i) argmin.push_back(rep.argmin_k(i));
    out["argmin_k"] = argmin;
    out["membership_residual"] = rep.membership_residual;
    out["random_margin"] = rep.random_margin;
    out["samples"] = spec.random_samples;
    out["seed"] = seed;
    if (rep.constructed) out["constructed_charges"] = charges_json(rep.constructed->canonicalized());
    if (rep.brute_force) out["brute_force_charges"] = charges_json(*rep.brute_force);

    const std::string text = out.dump(2) + "\n";
    write_file(outdir / "verify.json", text);
    std::cout << text;
    return rep.match ? kExitOk : kExitMismatch;
}

int run_presets(const std::filesystem::path& outdir) {
    const std::string text = preset_table().dump(2) + "\n";
    write_file(outdir / "presets.json", text);
    std::cout << text;
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"lattice charge energies and optimal periodic charge configurations"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_dir = ".";
    double tol_flag = -1.0;
    std::int64_t seed_flag = -1;
    app.add_option("--config", config_path, "path to a JSON run configuration");
    app.add_option("--out", out_dir, "output directory");
    app.add_option("--tol", tol_flag, "tolerance override");
    app.add_option("--seed", seed_flag, "seed override for random sweeps");

    auto* cmd_theta = app.add_subcommand("theta", "CSV landscape of the translated theta function");
    auto* cmd_energy = app.add_subcommand("energy", "energy report via the configured routes");
    auto* cmd_optimize = app.add_subcommand("optimize", "construct the optimal charge configuration");
    auto* cmd_verify = app.add_subcommand("verify", "verify the construction against the eigen oracle");
    auto* cmd_presets = app.add_subcommand("presets", "print the built-in run configurations");

    CLI11_PARSE(app, argc, argv);

    try {
        const std::filesystem::path outdir(out_dir);
        std::filesystem::create_directories(outdir);
        if (cmd_presets->parsed()) return run_presets(outdir);

        if (config_path.empty()) throw ConfigError("--config is required");
        const json cfg = load_config(config_path);
        const double tol = parse_tol(cfg, tol_flag >= 0.0 ? std::optional<double>(tol_flag)
                                                          : std::nullopt);
        const std::uint64_t seed = seed_flag >= 0 ? static_cast<std::uint64_t>(seed_flag)
                                                  : cfg.value("seed", std::uint64_t{0});

        if (cmd_theta->parsed()) return run_theta(cfg, outdir);
        if (cmd_energy->parsed()) return run_energy(cfg, outdir, tol, seed);
        if (cmd_optimize->parsed()) return run_optimize(cfg, outdir, tol);
        if (cmd_verify->parsed()) return run_verify(cfg, outdir, tol, seed);
        throw ConfigError("unknown subcommand");
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const std::domain_error& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const nlohmann::json::exception& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const std::exception& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return kExitNumeric;
    }
}
