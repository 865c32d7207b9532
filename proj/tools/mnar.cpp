// Command-line front end: simulate, estimate, estimate-f, energy-curve,
// experiment. Matrices and curves go to CSV, reports to JSON, and every
// simulated run writes a manifest so it can be replayed bit-identically.

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <future>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "mnar/festimate.hpp"
#include "mnar/ingest.hpp"
#include "mnar/metrics.hpp"
#include "mnar/nucmin.hpp"
#include "mnar/obsmodel.hpp"
#include "mnar/usvt.hpp"

namespace fs = std::filesystem;
using json = nlohmann::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitIo = 3;
constexpr int kExitNoConverge = 4;

struct NonConvergence : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct SimulatedInstance {
    mnar::Matrix truth;
    mnar::ObservedMatrix observed;
};

SimulatedInstance simulate_instance(int n, int rank, const std::string& f_spec,
                                    const std::string& noise, mnar::Seed seed) {
    mnar::Rng root(seed);
    const mnar::Seed gen_seed = root.split(1).next_u64();
    const mnar::Seed noise_seed = root.split(2).next_u64();
    const mnar::Seed mask_seed = root.split(3).next_u64();

    const mnar::MissingnessFn f = mnar::MissingnessFn::parse(f_spec);
    SimulatedInstance inst;
    if (noise == "bernoulli") {
        // Bernoulli noise needs entries in [0,1]: use the unshifted matrix.
        inst.truth = mnar::generate_uniform_low_rank(n, rank, false, gen_seed);
        mnar::Matrix x = mnar::bernoulli_noise(inst.truth, noise_seed);
        inst.observed = mnar::apply_missingness(inst.truth, x, f, mask_seed);
    } else if (noise == "none") {
        inst.truth = mnar::generate_uniform_low_rank(n, rank, true, gen_seed);
        inst.observed = mnar::apply_missingness(inst.truth, inst.truth, f, mask_seed);
    } else {
        throw std::invalid_argument("unknown noise model: " + noise);
    }
    return inst;
}

struct EstimateOutcome {
    mnar::Matrix estimate;
    double wall_seconds = 0.0;
    std::optional<mnar::SolveDiagnostics> diagnostics;
};

EstimateOutcome run_estimator(const mnar::ObservedMatrix& obs,
                              const std::string& method,
                              const mnar::UsvtParams& usvt_params,
                              const mnar::SolverParams& solver_params) {
    EstimateOutcome out;
    const auto t0 = std::chrono::steady_clock::now();
    if (method == "usvt") {
        out.estimate = mnar::modified_usvt(obs, usvt_params);
    } else if (method == "candes_recht") {
        auto [est, diag] = mnar::modified_candes_recht(obs, solver_params);
        out.estimate = std::move(est);
        out.diagnostics = diag;
    } else {
        throw std::invalid_argument("unknown method: " + method);
    }
    out.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return out;
}

void write_json(const json& j, const fs::path& path) {
    std::ofstream out(path);
    if (!out) throw mnar::IoError("cannot open " + path.string() + " for writing");
    out << j.dump(2) << '\n';
}

json diagnostics_json(const mnar::SolveDiagnostics& d) {
    return {{"iterations", d.iterations},
            {"primal_residual", d.primal_residual},
            {"dual_residual", d.dual_residual},
            {"converged", d.converged},
            {"final_nuclear_norm", d.final_nuclear_norm}};
}

int cmd_simulate(int n, int rank, const std::string& f_spec,
                 const std::string& noise, mnar::Seed seed,
                 const std::string& out_dir) {
    fs::create_directories(out_dir);
    SimulatedInstance inst = simulate_instance(n, rank, f_spec, noise, seed);
    mnar::write_matrix_csv(inst.truth, out_dir + "/truth.csv");
    mnar::write_dense_csv(inst.observed, out_dir + "/observed.csv");
    json manifest = {{"command", "simulate"}, {"n", n},       {"rank", rank},
                     {"f", f_spec},           {"noise", noise}, {"seed", seed}};
    write_json(manifest, out_dir + "/manifest.json");
    std::cout << "wrote " << out_dir << "/{truth.csv,observed.csv,manifest.json}\n";
    return kExitOk;
}

int cmd_estimate(const std::string& observed_path, const std::string& truth_path,
                 const std::string& method, const mnar::UsvtParams& usvt_params,
                 const mnar::SolverParams& solver_params,
                 const std::string& out_dir) {
    fs::create_directories(out_dir);
    const mnar::ObservedMatrix obs = mnar::read_dense_csv(observed_path);
    EstimateOutcome out = run_estimator(obs, method, usvt_params, solver_params);
    mnar::write_matrix_csv(out.estimate, out_dir + "/estimate.csv");

    json report = {{"method", method},
                   {"wall_time_seconds", out.wall_seconds},
                   {"observed", observed_path}};
    if (method == "usvt") {
        report["params"] = {{"eta", usvt_params.eta}};
    } else {
        report["params"] = {{"rho", solver_params.rho},
                            {"tol", solver_params.tol},
                            {"max_iters", solver_params.max_iters},
                            {"over_relaxation", solver_params.over_relaxation}};
    }
    if (out.diagnostics) report["diagnostics"] = diagnostics_json(*out.diagnostics);
    if (!truth_path.empty()) {
        const mnar::Matrix truth = mnar::read_matrix_csv(truth_path);
        report["mse"] = mnar::mse(out.estimate, truth);
    }
    write_json(report, out_dir + "/report.json");
    std::cout << report.dump(2) << '\n';
    if (out.diagnostics && !out.diagnostics->converged)
        throw NonConvergence("solver hit max_iters without reaching tolerance");
    return kExitOk;
}

int cmd_estimate_f(const std::string& observed_path, const std::string& estimate_path,
                   int b, mnar::Seed seed, const std::string& f_spec,
                   const std::string& truth_path, const std::string& out_dir) {
    fs::create_directories(out_dir);
    const mnar::ObservedMatrix obs = mnar::read_dense_csv(observed_path);
    const mnar::Matrix m_hat = mnar::read_matrix_csv(estimate_path);
    const mnar::PiecewiseConstantFn f_hat =
        mnar::estimate_f(obs.mask, m_hat, b, seed);
    mnar::write_fhat_csv(f_hat, out_dir + "/fhat.csv");

    json report = {{"b", b}, {"seed", seed}, {"intervals", f_hat.values.size()}};
    if (!f_spec.empty()) {
        const mnar::MissingnessFn f_true = mnar::MissingnessFn::parse(f_spec);
        // ISE integrates against the empirical distribution of the true
        // entries when a truth matrix is given, else of the estimate.
        const mnar::Matrix& mu_source =
            truth_path.empty() ? m_hat : mnar::read_matrix_csv(truth_path);
        report["ise"] = mnar::integrated_sq_error(f_hat, f_true, mu_source);
        report["f_true"] = f_spec;
    }
    write_json(report, out_dir + "/report.json");
    std::cout << report.dump(2) << '\n';
    return kExitOk;
}

int cmd_energy_curve(const std::string& input_path, const std::string& out_path) {
    const mnar::Matrix a = mnar::read_matrix_csv(input_path);
    const std::vector<double> curve = mnar::rank_energy_curve(a);
    std::ofstream out(out_path);
    if (!out) throw mnar::IoError("cannot open " + out_path + " for writing");
    out << "k,cumulative_energy\n";
    for (std::size_t k = 0; k < curve.size(); ++k)
        out << (k + 1) << ',' << mnar::detail::format_double(curve[k]) << '\n';
    std::cout << "wrote " << out_path << " (" << curve.size() << " rows)\n";
    return kExitOk;
}

// End-to-end replicate fan-out: simulate + estimate over k consecutive
// seeds, aggregate median and mean MSE.
int cmd_experiment(int n, int rank, const std::string& f_spec,
                   const std::string& noise, mnar::Seed seed0, int seeds,
                   const std::string& method, const mnar::UsvtParams& usvt_params,
                   const mnar::SolverParams& solver_params,
                   const std::string& out_path) {
    std::vector<std::future<double>> futures;
    for (int k = 0; k < seeds; ++k) {
        futures.push_back(std::async(std::launch::async, [=] {
            SimulatedInstance inst =
                simulate_instance(n, rank, f_spec, noise, seed0 + mnar::Seed(k));
            EstimateOutcome out =
                run_estimator(inst.observed, method, usvt_params, solver_params);
            return mnar::mse(out.estimate, inst.truth);
        }));
    }
    std::vector<double> mses;
    for (auto& fut : futures) mses.push_back(fut.get());
    std::vector<double> sorted = mses;
    std::sort(sorted.begin(), sorted.end());
    const std::size_t mid = sorted.size() / 2;
    const double median = sorted.size() % 2
                              ? sorted[mid]
                              : 0.5 * (sorted[mid - 1] + sorted[mid]);
    double mean = 0.0;
    for (double v : mses) mean += v;
    mean /= double(mses.size());

    json report = {{"command", "experiment"}, {"n", n},
                   {"rank", rank},            {"f", f_spec},
                   {"noise", noise},          {"seed", seed0},
                   {"seeds", seeds},          {"method", method},
                   {"mse_per_seed", mses},    {"mse_median", median},
                   {"mse_mean", mean}};
    if (!out_path.empty()) write_json(report, out_path);
    std::cout << report.dump(2) << '\n';
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Matrix completion under entry-dependent missingness"};
    app.require_subcommand(1);
    app.set_config("--config", "", "Read options from an INI config file");

    // simulate
    auto* sim = app.add_subcommand("simulate", "Generate a low-rank instance");
    int n = 100, rank = 7;
    std::string f_spec = "quad", noise = "none", out_dir = "run";
    std::uint64_t seed = 1;
    sim->add_option("--n", n, "matrix side length")->check(CLI::PositiveNumber);
    sim->add_option("--rank", rank, "target rank (2..20)");
    sim->add_option("--f", f_spec, "missingness: quad | identity | const:c");
    sim->add_option("--noise", noise, "none | bernoulli");
    sim->add_option("--seed", seed, "RNG seed");
    sim->add_option("--out", out_dir, "output directory");

    // estimate
    auto* est = app.add_subcommand("estimate", "Run an estimator on an instance");
    std::string observed_path, truth_path, method = "usvt";
    mnar::UsvtParams usvt_params;
    mnar::SolverParams solver_params;
    est->add_option("--observed", observed_path, "observed-matrix CSV")->required();
    est->add_option("--truth", truth_path, "truth CSV (enables MSE)");
    est->add_option("--method", method, "usvt | candes_recht");
    est->add_option("--eta", usvt_params.eta, "USVT threshold slack");
    est->add_option("--rho", solver_params.rho, "splitting penalty");
    est->add_option("--tol", solver_params.tol, "solver residual tolerance");
    est->add_option("--max-iters", solver_params.max_iters, "solver iteration cap");
    est->add_option("--relax", solver_params.over_relaxation, "over-relaxation");
    est->add_option("--out", out_dir, "output directory");

    // estimate-f
    auto* estf = app.add_subcommand("estimate-f", "Estimate the missingness function");
    std::string estimate_path;
    int b = 25;
    estf->add_option("--observed", observed_path, "observed-matrix CSV")->required();
    estf->add_option("--estimate", estimate_path, "matrix-estimate CSV")->required();
    estf->add_option("--b", b, "bin parameter (2b+2 intervals)")->required();
    estf->add_option("--seed", seed, "jitter seed");
    estf->add_option("--f", f_spec, "true f for ISE (optional)")->expected(1);
    estf->add_option("--truth", truth_path, "truth CSV for the ISE measure");
    estf->add_option("--out", out_dir, "output directory");

    // energy-curve
    auto* energy = app.add_subcommand("energy-curve", "Cumulative rank-k energy");
    std::string input_path, curve_out = "energy.csv";
    energy->add_option("--input", input_path, "matrix CSV")->required();
    energy->add_option("--out", curve_out, "output CSV");

    // experiment
    auto* expc = app.add_subcommand("experiment",
                                    "Simulate + estimate over several seeds");
    int nseeds = 5;
    std::string report_out;
    expc->add_option("--n", n, "matrix side length")->check(CLI::PositiveNumber);
    expc->add_option("--rank", rank, "target rank (2..20)");
    expc->add_option("--f", f_spec, "missingness: quad | identity | const:c");
    expc->add_option("--noise", noise, "none | bernoulli");
    expc->add_option("--seed", seed, "base seed");
    expc->add_option("--seeds", nseeds, "number of replicates")
        ->check(CLI::PositiveNumber);
    expc->add_option("--method", method, "usvt | candes_recht");
    expc->add_option("--eta", usvt_params.eta, "USVT threshold slack");
    expc->add_option("--rho", solver_params.rho, "splitting penalty");
    expc->add_option("--tol", solver_params.tol, "solver residual tolerance");
    expc->add_option("--max-iters", solver_params.max_iters, "solver iteration cap");
    expc->add_option("--relax", solver_params.over_relaxation, "over-relaxation");
    expc->add_option("--out", report_out, "report JSON path");

    // estimate-f's --f default should be empty (ISE only when supplied)
    if (argc > 1 && std::string(argv[1]) == "estimate-f") f_spec.clear();

    CLI11_PARSE(app, argc, argv);

    try {
        if (*sim) return cmd_simulate(n, rank, f_spec, noise, seed, out_dir);
        if (*est)
            return cmd_estimate(observed_path, truth_path, method, usvt_params,
                                solver_params, out_dir);
        if (*estf)
            return cmd_estimate_f(observed_path, estimate_path, b, seed, f_spec,
                                  truth_path, out_dir);
        if (*energy) return cmd_energy_curve(input_path, curve_out);
        if (*expc)
            return cmd_experiment(n, rank, f_spec, noise, seed, nseeds, method,
                                  usvt_params, solver_params, report_out);
    } catch (const NonConvergence& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitNoConverge;
    } catch (const mnar::IoError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitIo;
    } catch (const mnar::ParseError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitIo;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitConfig;
    }
    return kExitConfig;
}
