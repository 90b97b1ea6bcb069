#include <cstdint>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "nuosc/experiment.hpp"
#include "nuosc/mitigation.hpp"
#include "nuosc/model.hpp"
#include "nuosc/noise.hpp"
#include "nuosc/observables.hpp"
#include "nuosc/tomography.hpp"

namespace {

struct CommonFlags {
    std::string config_path;
    std::uint64_t seed = 0;
    bool seed_set = false;
    std::string out_dir;
    std::string format;
    std::string propagator;
    std::string noise_levels;
};

void add_common_flags(CLI::App* cmd, CommonFlags& flags) {
    cmd->add_option("--config", flags.config_path, "Path to a JSON configuration file");
    cmd->add_option("--seed", flags.seed, "Master seed override")
        ->each([&](const std::string&) { flags.seed_set = true; });
    cmd->add_option("--out", flags.out_dir, "Output directory override");
    cmd->add_option("--format", flags.format, "Output format: csv or json")
        ->check(CLI::IsMember({"csv", "json"}));
    cmd->add_option("--propagator", flags.propagator, "Propagator: exact, u1 or u2")
        ->check(CLI::IsMember({"exact", "u1", "u2"}));
    cmd->add_option("--noise-levels", flags.noise_levels,
                    "Comma-separated odd noise amplification factors, e.g. 1,3,5,7");
}

nuosc::ExperimentConfig resolve_config(const CommonFlags& flags) {
    nuosc::ExperimentConfig config =
        flags.config_path.empty() ? nuosc::default_config() : nuosc::load_config(flags.config_path);
    if (flags.seed_set) config.master_seed = flags.seed;
    if (!flags.out_dir.empty()) config.out_dir = flags.out_dir;
    if (!flags.format.empty()) config.format = flags.format;
    if (!flags.propagator.empty()) config.propagator = flags.propagator;
    if (!flags.noise_levels.empty()) {
        std::vector<int> levels;
        std::stringstream ss(flags.noise_levels);
        std::string item;
        while (std::getline(ss, item, ',')) levels.push_back(std::stoi(item));
        config.noise_levels = levels;
    }
    config.validate();
    return config;
}

int run_pipeline(const CommonFlags& flags) {
    const nuosc::ExperimentConfig config = resolve_config(flags);
    std::cout << "running experiment (config hash " << nuosc::config_hash(config) << ")\n";
    const nuosc::ResultsBundle bundle = nuosc::run_experiment(config);
    nuosc::emit_series(bundle);
    std::cout << "wrote " << bundle.series.size() << " series to " << config.out_dir << "\n";
    return 0;
}

int run_compare(const CommonFlags& flags) {
    const nuosc::ExperimentConfig config = resolve_config(flags);
    const auto report = nuosc::compare_propagators(config);
    nuosc::emit_propagator_report(report, config.out_dir, config.format);
    std::cout << "wrote propagator comparison (" << report.size() << " rows) to "
              << config.out_dir << "\n";
    return 0;
}

// Noiseless 8192-shot tomography of every pair marginal of the exactly
// evolved state; reports the worst ML trace distance over pairs and times.
int run_tomography_selftest(const CommonFlags& flags) {
    nuosc::ExperimentConfig config = resolve_config(flags);
    const nuosc::NeutrinoModel model =
        nuosc::build_model(config.n, config.theta_v, config.max_cos, config.matter_a);
    const nuosc::Statevector psi0 =
        nuosc::new_basis_state(config.n, config.initial_bitstring);
    double worst = 0.0;
    for (const double t : config.time_grid) {
        const nuosc::Statevector psi = nuosc::exact_evolve(psi0, model, t);
        for (int p = 0; p < config.n; ++p)
            for (int q = p + 1; q < config.n; ++q) {
                const nuosc::DensityMatrix exact = nuosc::reduced_density(psi, {p, q});
                nuosc::SettingCounts counts;
                for (const auto& setting : nuosc::measurement_settings()) {
                    const Eigen::Vector4d probs =
                        nuosc::setting_probabilities(nuosc::Mat4(exact.matrix), setting);
                    const nuosc::CountsRecord rec = nuosc::sample_counts(
                        probs, config.shots,
                        nuosc::derive_seed(config.master_seed,
                                           {"selftest", std::to_string(t),
                                            std::to_string(p) + std::to_string(q), setting}),
                        2, setting);
                    nuosc::SettingData data;
                    for (const auto& [bits, c] : rec.counts)
                        data.weights[std::stoul(bits, nullptr, 2)] = static_cast<double>(c);
                    data.total = static_cast<double>(rec.shots);
                    counts[setting] = data;
                }
                const nuosc::Mat4 rho = nuosc::ml_reconstruct(counts).rho;
                const nuosc::Mat4 diff = rho - nuosc::Mat4(exact.matrix);
                Eigen::SelfAdjointEigenSolver<nuosc::Mat4> es(diff);
                const double tdist = 0.5 * es.eigenvalues().cwiseAbs().sum();
                worst = std::max(worst, tdist);
            }
    }
    std::cout << "tomography selftest: worst trace distance " << worst << "\n";
    if (worst > 0.03) {
        std::cout << "FAIL (threshold 0.03)\n";
        return 1;
    }
    std::cout << "PASS\n";
    return 0;
}

// Extrapolator exactness on synthetic ansatz data plus a Bayesian readout
// round-trip on <Z> of |0>.
int run_mitigation_selftest(const CommonFlags& flags) {
    const nuosc::ExperimentConfig config = resolve_config(flags);
    bool ok = true;

    const double a = 0.7, b = 0.31;
    const auto expv = [&](double r) { return a * std::exp(-b * r); };
    const double exp_err = std::abs(nuosc::exp_extrapolate(expv(1), expv(3), 1, 3) - a);
    const double lin_err =
        std::abs(nuosc::richardson_extrapolate({{1.0, 0.8}, {3.0, 0.4}}) - 1.0);
    const auto shifted = [&](double r) { return 1.0 - 0.6 * std::exp(-b * r); };
    const double shift_err =
        std::abs(nuosc::shifted_exp_extrapolate(shifted(1), shifted(3), 1, 3, 1.0) - 0.4);
    std::cout << "exp recovery error " << exp_err << ", richardson " << lin_err
              << ", shifted-exp " << shift_err << "\n";
    ok = ok && exp_err < 1e-10 && lin_err < 1e-12 && shift_err < 1e-10;

    // 200 seeded trials: corrupted |0> measurement, Bayesian correction,
    // coverage of the true <Z> = 1 by the 68% interval.
    const nuosc::NoiseModel noise = nuosc::NoiseModel::uniform(1, 0.0, 0.05, 0.05);
    int covered = 0;
    const int trials = 200;
    for (int trial = 0; trial < trials; ++trial) {
        const std::uint64_t seed =
            nuosc::derive_seed(config.master_seed, {"selftest", std::to_string(trial)});
        Eigen::VectorXd ideal(2);
        ideal << 1.0, 0.0;
        const Eigen::VectorXd corrupted = nuosc::corrupt_readout(ideal, noise);
        const nuosc::CountsRecord rec =
            nuosc::sample_counts(corrupted, config.shots, seed, 1, "Z");
        const nuosc::CalibrationRecord calib = nuosc::calibration_run(
            noise, 1, config.shots, nuosc::derive_seed(seed, {"calib"}));
        const auto replicas = nuosc::mitigate_readout_ensemble(
            rec, calib, 200, nuosc::derive_seed(seed, {"mitigate"}));
        std::vector<double> z_values;
        for (const auto& p : replicas) z_values.push_back(p(0) - p(1));
        const nuosc::EnsembleEstimate est = nuosc::ensemble_statistics(z_values);
        if (est.ci_low <= 1.0 && 1.0 <= est.ci_high) ++covered;
    }
    const double coverage = static_cast<double>(covered) / trials;
    std::cout << "readout mitigation coverage " << coverage << " (expect ~0.68)\n";
    ok = ok && coverage >= 0.55 && coverage <= 0.80;

    std::cout << (ok ? "PASS" : "FAIL") << "\n";
    return ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Collective neutrino oscillation simulator"};
    app.require_subcommand(1);

    CommonFlags flags;
    CLI::App* cmd_run = app.add_subcommand("run", "Full simulate/tomograph/mitigate pipeline");
    CLI::App* cmd_cmp =
        app.add_subcommand("compare-propagators", "Exact vs Trotter propagator diagnostics");
    CLI::App* cmd_tomo =
        app.add_subcommand("tomography-selftest", "Noiseless tomography accuracy check");
    CLI::App* cmd_mit =
        app.add_subcommand("mitigation-selftest", "Extrapolation and readout mitigation checks");
    for (CLI::App* cmd : {cmd_run, cmd_cmp, cmd_tomo, cmd_mit}) add_common_flags(cmd, flags);

    CLI11_PARSE(app, argc, argv);
    try {
        if (cmd_run->parsed()) return run_pipeline(flags);
        if (cmd_cmp->parsed()) return run_compare(flags);
        if (cmd_tomo->parsed()) return run_tomography_selftest(flags);
        if (cmd_mit->parsed()) return run_mitigation_selftest(flags);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
