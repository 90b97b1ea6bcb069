#include "nuosc/experiment.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <stdexcept>

#include <json.hpp>

#include "nuosc/observables.hpp"
#include "nuosc/tomography.hpp"

namespace nuosc {

void ExperimentConfig::validate() const {
    if (n < 2) throw std::invalid_argument("config: need at least two neutrinos");
    if (static_cast<int>(initial_bitstring.size()) != n)
        throw std::invalid_argument("config: initial bitstring length must equal n");
    for (char c : initial_bitstring)
        if (c != '0' && c != '1') throw std::invalid_argument("config: bitstring must be 0/1");
    if (static_cast<int>(ordering.size()) != n)
        throw std::invalid_argument("config: ordering length must equal n");
    if (time_grid.empty()) throw std::invalid_argument("config: empty time grid");
    for (size_t i = 1; i < time_grid.size(); ++i)
        if (time_grid[i] <= time_grid[i - 1])
            throw std::invalid_argument("config: time grid must be strictly increasing");
    if (propagator != "exact" && propagator != "u1" && propagator != "u2")
        throw std::invalid_argument("config: propagator must be exact, u1 or u2");
    if (noise_levels.empty()) throw std::invalid_argument("config: no noise levels");
    for (int r : noise_levels)
        if (r < 1 || r % 2 == 0) throw std::invalid_argument("config: noise levels must be odd");
    if (extrapolation_levels.size() != 2 ||
        extrapolation_levels[0] >= extrapolation_levels[1])
        throw std::invalid_argument("config: extrapolation needs two increasing levels");
    for (int r : extrapolation_levels)
        if (std::find(noise_levels.begin(), noise_levels.end(), r) == noise_levels.end())
            throw std::invalid_argument("config: extrapolation level not in noise levels");
    if (shots < 1) throw std::invalid_argument("config: shots must be >= 1");
    if (replicas < 2) throw std::invalid_argument("config: need at least two replicas");
    if (format != "csv" && format != "json")
        throw std::invalid_argument("config: format must be csv or json");
}

ExperimentConfig default_config() {
    ExperimentConfig c;
    for (int i = 0; i <= 16; ++i) c.time_grid.push_back(0.5 * i);
    c.recipes["p_inv"] = {"shifted-exp", 0.5};
    c.recipes["single_spin_entropy"] = {"shifted-exp", 1.0};
    c.recipes["pair_entropy"] = {"shifted-exp", 2.0};
    c.recipes["concurrence"] = {"richardson", 0.0};
    c.recipes["extended_concurrence"] = {"shifted-exp", -0.5};
    return c;
}

nlohmann::json config_to_json(const ExperimentConfig& c) {
    nlohmann::json j;
    j["model"] = {{"n", c.n},
                  {"theta_v", c.theta_v},
                  {"max_cos", c.max_cos},
                  {"matter_a", c.matter_a}};
    j["initial_bitstring"] = c.initial_bitstring;
    j["ordering"] = c.ordering;
    j["time_grid"] = c.time_grid;
    j["propagator"] = c.propagator;
    j["noise"] = {{"depol_2q", c.depol_2q},
                  {"readout_e0", c.readout_e0},
                  {"readout_e1", c.readout_e1}};
    j["noise_levels"] = c.noise_levels;
    j["extrapolation_levels"] = c.extrapolation_levels;
    j["shots"] = c.shots;
    j["replicas"] = c.replicas;
    nlohmann::json recipes = nlohmann::json::object();
    for (const auto& [name, recipe] : c.recipes)
        recipes[name] = {{"ansatz", recipe.ansatz}, {"asymptote", recipe.asymptote}};
    j["recipes"] = recipes;
    j["master_seed"] = c.master_seed;
    j["out_dir"] = c.out_dir;
    j["format"] = c.format;
    return j;
}

ExperimentConfig config_from_json(const nlohmann::json& j) {
    ExperimentConfig c = default_config();
    if (j.contains("model")) {
        const auto& m = j.at("model");
        c.n = m.value("n", c.n);
        c.theta_v = m.value("theta_v", c.theta_v);
        c.max_cos = m.value("max_cos", c.max_cos);
        c.matter_a = m.value("matter_a", c.matter_a);
    }
    c.initial_bitstring = j.value("initial_bitstring", c.initial_bitstring);
    if (j.contains("ordering")) c.ordering = j.at("ordering").get<std::vector<int>>();
    if (j.contains("time_grid")) c.time_grid = j.at("time_grid").get<std::vector<double>>();
    c.propagator = j.value("propagator", c.propagator);
    if (j.contains("noise")) {
        const auto& noise = j.at("noise");
        c.depol_2q = noise.value("depol_2q", c.depol_2q);
        c.readout_e0 = noise.value("readout_e0", c.readout_e0);
        c.readout_e1 = noise.value("readout_e1", c.readout_e1);
    }
    if (j.contains("noise_levels")) c.noise_levels = j.at("noise_levels").get<std::vector<int>>();
    if (j.contains("extrapolation_levels"))
        c.extrapolation_levels = j.at("extrapolation_levels").get<std::vector<int>>();
    c.shots = j.value("shots", c.shots);
    c.replicas = j.value("replicas", c.replicas);
    if (j.contains("recipes"))
        for (const auto& [name, r] : j.at("recipes").items())
            c.recipes[name] = {r.value("ansatz", std::string("shifted-exp")),
                               r.value("asymptote", 0.0)};
    c.master_seed = j.value("master_seed", c.master_seed);
    c.out_dir = j.value("out_dir", c.out_dir);
    c.format = j.value("format", c.format);
    return c;
}

ExperimentConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config file: " + path);
    nlohmann::json j;
    in >> j;
    return config_from_json(j);
}

std::string config_hash(const ExperimentConfig& config) {
    const std::string dump = config_to_json(config).dump();
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (const char c : dump) {
        h ^= static_cast<unsigned char>(c);
        h *= 0x100000001b3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

std::string format_significant(double value) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", value);
    return buf;
}

Statevector initial_wire_state(const ExperimentConfig& config, bool use_ordering) {
    std::string bits(config.n, '0');
    for (int w = 0; w < config.n; ++w) {
        const int logical = use_ordering ? config.ordering[w] - 1 : w;
        bits[w] = config.initial_bitstring[logical];
    }
    return new_basis_state(config.n, bits);
}

MatX placement_unitary(const std::vector<int>& place) {
    const int n = static_cast<int>(place.size());
    const Eigen::Index dim = Eigen::Index(1) << n;
    MatX p = MatX::Zero(dim, dim);
    for (Eigen::Index i = 0; i < dim; ++i) {
        Eigen::Index j = 0;
        for (int k = 0; k < n; ++k) {
            const Eigen::Index bit = (i >> (n - 1 - k)) & 1;
            j |= bit << (n - 1 - place[k]);
        }
        p(j, i) = 1.0;
    }
    return p;
}

namespace {

std::string num(long long v) { return std::to_string(v); }

DensityMatrix pure_density(const Statevector& psi) {
    DensityMatrix rho;
    rho.n_qubits = psi.n_qubits;
    rho.matrix = psi.amplitudes * psi.amplitudes.adjoint();
    return rho;
}

// Collapse a full-register record onto two wires; wire_a becomes the high
// bit of the two-bit outcome.
CountsRecord marginalize_counts(const CountsRecord& rec, int wire_a, int wire_b) {
    CountsRecord out;
    out.setting = rec.setting;
    out.shots = rec.shots;
    std::array<long, 4> tally{};
    for (const auto& [bits, count] : rec.counts) {
        const int idx = (bits[wire_a] == '1' ? 2 : 0) | (bits[wire_b] == '1' ? 1 : 0);
        tally[static_cast<size_t>(idx)] += count;
    }
    for (int k = 0; k < 4; ++k) {
        const std::string key = {k & 2 ? '1' : '0', k & 1 ? '1' : '0'};
        out.counts[key] = tally[static_cast<size_t>(k)];
    }
    return out;
}

CalibrationRecord marginalize_calibration(const CalibrationRecord& calib, int wire_a,
                                          int wire_b) {
    return {marginalize_counts(calib.zeros, wire_a, wire_b),
            marginalize_counts(calib.ones, wire_a, wire_b)};
}

Mat2 trace_low(const Mat4& rho) {
    Mat2 out;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            out(i, j) = rho(2 * i, 2 * j) + rho(2 * i + 1, 2 * j + 1);
    return out;
}

Mat2 trace_high(const Mat4& rho) {
    Mat2 out;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) out(i, j) = rho(i, j) + rho(i + 2, j + 2);
    return out;
}

double extrapolate_value(const ObservableRecipe& recipe, double r1, double v1, double r2,
                         double v2) {
    const std::vector<std::pair<double, double>> pts = {{r1, v1}, {r2, v2}};
    if (recipe.ansatz == "richardson") return richardson_extrapolate(pts);
    try {
        if (recipe.ansatz == "exp") return exp_extrapolate(v1, v2, r1, r2);
        if (recipe.ansatz == "shifted-exp")
            return shifted_exp_extrapolate(v1, v2, r1, r2, recipe.asymptote);
    } catch (const std::domain_error&) {
        // ansatz inapplicable for this replica (sign change across the
        // asymptote); fall back to the linear estimate
        return richardson_extrapolate(pts);
    }
    throw std::invalid_argument("unknown extrapolation ansatz: " + recipe.ansatz);
}

struct SeriesKey {
    std::string observable;
    std::string label;
    bool operator<(const SeriesKey& o) const {
        return std::tie(observable, label) < std::tie(o.observable, o.label);
    }
};

}  // namespace

ResultsBundle run_experiment(const ExperimentConfig& config) {
    config.validate();
    const NeutrinoModel model = build_model(config.n, config.theta_v, config.max_cos,
                                            config.matter_a);
    const NoiseModel noise = NoiseModel::uniform(config.n, config.depol_2q,
                                                 config.readout_e0, config.readout_e1);
    const CalibrationRecord calibration =
        calibration_run(noise, config.n, config.shots,
                        derive_seed(config.master_seed, {"calibration"}));

    const int n = config.n;
    const int n_levels = static_cast<int>(config.noise_levels.size());
    const int L = config.replicas;
    const bool exact_mode = config.propagator == "exact";

    std::vector<std::pair<int, int>> pairs;
    for (int p = 0; p < n; ++p)
        for (int q = p + 1; q < n; ++q) pairs.emplace_back(p, q);
    const auto pair_label = [](int p, int q) {
        return std::to_string(p + 1) + std::to_string(q + 1);
    };

    ResultsBundle bundle;
    bundle.config = config;
    bundle.hash = config_hash(config);

    // Fixed emission order for the series.
    std::map<SeriesKey, ObservableSeries> series;
    const auto series_ref = [&](const std::string& obs, const std::string& label)
        -> ObservableSeries& {
        auto& s = series[{obs, label}];
        s.observable = obs;
        s.label = label;
        return s;
    };

    // Gate counts and permutation from the largest-time compiled circuit.
    {
        const double t_meta = config.time_grid.back();
        if (config.propagator == "u2") {
            const Circuit compiled =
                compile_circuit(swap_network_circuit(model, t_meta, config.ordering));
            bundle.gates = gate_counts(compiled);
            bundle.permutation = compiled.permutation;
        } else if (config.propagator == "u1") {
            const Circuit compiled = compile_circuit(trotter_u1_circuit(model, t_meta));
            bundle.gates = gate_counts(compiled);
            bundle.permutation = compiled.permutation;
        } else {
            bundle.permutation.resize(n);
            std::iota(bundle.permutation.begin(), bundle.permutation.end(), 0);
        }
    }

    const double r1 = config.extrapolation_levels[0];
    const double r2 = config.extrapolation_levels[1];

    for (size_t it = 0; it < config.time_grid.size(); ++it) {
        const double t = config.time_grid[it];

        Circuit compiled;
        std::vector<int> perm(n);
        std::iota(perm.begin(), perm.end(), 0);
        if (config.propagator == "u2") {
            compiled = compile_circuit(swap_network_circuit(model, t, config.ordering));
            perm = compiled.permutation;
        } else if (config.propagator == "u1") {
            compiled = compile_circuit(trotter_u1_circuit(model, t));
            perm = compiled.permutation;
        }
        const Statevector initial = initial_wire_state(config, config.propagator == "u2");

        // Replica values indexed [noise level][replica].
        std::vector<std::vector<std::vector<double>>> pinv_reps(
            n, std::vector<std::vector<double>>(n_levels));
        // Pair observables indexed [pair][noise level][replica].
        const size_t n_pairs = pairs.size();
        const auto pair_store = [&] {
            return std::vector<std::vector<std::vector<double>>>(
                n_pairs, std::vector<std::vector<double>>(n_levels));
        };
        auto pair_entropy_reps = pair_store();
        auto concurrence_reps = pair_store();
        auto ext_concurrence_reps = pair_store();
        auto spin_high_reps = pair_store();  // entropy of the pair's first qubit
        auto spin_low_reps = pair_store();   // entropy of the pair's second qubit

        for (int ir = 0; ir < n_levels; ++ir) {
            const int r = config.noise_levels[ir];
            DensityMatrix rho;
            if (exact_mode)
                rho = pure_density(exact_evolve(initial, model, t));
            else
                rho = run_noisy_density(amplify_noise(compiled, r), initial, noise);

            const std::string tr_tags = "t=" + num(static_cast<long long>(it)) +
                                        ";r=" + num(r);

            // Z-basis record for the inversion probabilities.
            const std::string z_setting(static_cast<size_t>(n), 'Z');
            const Eigen::VectorXd z_probs =
                corrupt_readout(measurement_probabilities(rho, z_setting), noise);
            const CountsRecord z_rec =
                sample_counts(z_probs, config.shots,
                              derive_seed(config.master_seed, {tr_tags, "measure", z_setting}),
                              n, z_setting);
            const std::vector<Eigen::VectorXd> z_replicas = mitigate_readout_ensemble(
                z_rec, calibration, L,
                derive_seed(config.master_seed, {tr_tags, "mitigate", z_setting}));
            for (int k = 0; k < n; ++k) {
                const int bit = config.initial_bitstring[k] == '1' ? 1 : 0;
                auto& dest = pinv_reps[k][ir];
                dest.reserve(L);
                for (const auto& probs : z_replicas)
                    dest.push_back(inversion_probability(probs, n, k, bit, perm));
            }

            // Pair tomography.
            for (size_t pi = 0; pi < n_pairs; ++pi) {
                const auto [p, q] = pairs[pi];
                const int wp = perm[p], wq = perm[q];
                const CalibrationRecord pair_calib =
                    marginalize_calibration(calibration, wp, wq);

                SettingCounts point_counts;
                std::vector<SettingCounts> replica_counts(static_cast<size_t>(L));
                const ReadoutParams point_params = estimate_readout(pair_calib, 2);
                const Eigen::Matrix4d point_map =
                    readout_correction_map(point_params, {0, 1});

                for (const std::string& ab : measurement_settings()) {
                    std::string s(static_cast<size_t>(n), 'Z');
                    s[wp] = ab[0];
                    s[wq] = ab[1];
                    const Eigen::VectorXd probs =
                        corrupt_readout(measurement_probabilities(rho, s), noise);
                    const CountsRecord rec = sample_counts(
                        probs, config.shots,
                        derive_seed(config.master_seed,
                                    {tr_tags, "pair=" + pair_label(p, q), "measure", s}),
                        n, s);
                    const CountsRecord pair_rec = marginalize_counts(rec, wp, wq);

                    Eigen::Vector4d freq = Eigen::Vector4d::Zero();
                    for (const auto& [bits, count] : pair_rec.counts)
                        freq(static_cast<Eigen::Index>(std::stoul(bits, nullptr, 2))) =
                            static_cast<double>(count) / static_cast<double>(pair_rec.shots);
                    const Eigen::Vector4d corrected = point_map * freq;
                    // Readout correction can produce small negative
                    // quasi-weights; the multinomial likelihood needs
                    // nonnegative data, so clamp at zero here.
                    SettingData point_data;
                    for (int k = 0; k < 4; ++k)
                        point_data.weights[static_cast<size_t>(k)] =
                            std::max(0.0, corrected(k)) * static_cast<double>(config.shots);
                    point_data.total = static_cast<double>(config.shots);
                    point_counts[ab] = point_data;

                    const std::vector<Eigen::VectorXd> corrected_reps =
                        mitigate_readout_ensemble(
                            pair_rec, pair_calib, L,
                            derive_seed(config.master_seed,
                                        {tr_tags, "pair=" + pair_label(p, q), "mitigate", ab}));
                    for (int l = 0; l < L; ++l) {
                        SettingData data;
                        for (int k = 0; k < 4; ++k)
                            data.weights[static_cast<size_t>(k)] =
                                std::max(0.0, corrected_reps[static_cast<size_t>(l)](k)) *
                                static_cast<double>(config.shots);
                        data.total = static_cast<double>(config.shots);
                        replica_counts[static_cast<size_t>(l)][ab] = data;
                    }
                }

                Mat4 rho_point;
                try {
                    rho_point = ml_reconstruct(point_counts).rho;
                } catch (const std::exception& e) {
                    throw std::runtime_error("tomography point fit failed at t index " +
                                             num(static_cast<long long>(it)) + ", r=" + num(r) +
                                             ", pair " + pair_label(p, q) + ": " + e.what());
                }
                MlOptions warm;
                warm.has_warm_start = true;
                warm.warm_start = rho_point;
                for (int l = 0; l < L; ++l) {
                    Mat4 rho_l;
                    try {
                        rho_l = ml_reconstruct(replica_counts[static_cast<size_t>(l)], warm).rho;
                    } catch (const std::exception& e) {
                        throw std::runtime_error(
                            "tomography replica fit failed at t index " +
                            num(static_cast<long long>(it)) + ", r=" + num(r) + ", pair " +
                            pair_label(p, q) + ", replica " + num(l) + ": " + e.what());
                    }
                    pair_entropy_reps[pi][ir].push_back(von_neumann_entropy(rho_l));
                    concurrence_reps[pi][ir].push_back(concurrence(rho_l));
                    ext_concurrence_reps[pi][ir].push_back(extended_concurrence(rho_l));
                    spin_high_reps[pi][ir].push_back(von_neumann_entropy(MatX(trace_low(rho_l))));
                    spin_low_reps[pi][ir].push_back(von_neumann_entropy(MatX(trace_high(rho_l))));
                }
            }
        }

        // Assemble series rows for this time.
        const auto level_index = [&](int r) {
            for (int ir = 0; ir < n_levels; ++ir)
                if (config.noise_levels[ir] == r) return ir;
            throw std::logic_error("noise level lookup");
        };
        const int ir1 = level_index(config.extrapolation_levels[0]);
        const int ir2 = level_index(config.extrapolation_levels[1]);

        const auto emit_rows = [&](ObservableSeries& dest, const std::string& obs,
                                   const std::vector<std::vector<double>>& reps) {
            for (int ir = 0; ir < n_levels; ++ir) {
                const EnsembleEstimate est = ensemble_statistics(reps[ir]);
                dest.points.push_back({t, "r=" + num(config.noise_levels[ir]), est.mean,
                                       est.ci_low, est.ci_high});
            }
            if (config.recipes.count(obs)) {
                const ObservableRecipe& recipe = config.recipes.at(obs);
                std::vector<double> extrapolated(static_cast<size_t>(L));
                for (int l = 0; l < L; ++l)
                    extrapolated[static_cast<size_t>(l)] =
                        extrapolate_value(recipe, r1, reps[ir1][static_cast<size_t>(l)], r2,
                                          reps[ir2][static_cast<size_t>(l)]);
                const EnsembleEstimate est = ensemble_statistics(extrapolated);
                dest.points.push_back({t, recipe.ansatz, est.mean, est.ci_low, est.ci_high});
            }
        };

        for (int k = 0; k < n; ++k)
            emit_rows(series_ref("p_inv", "n" + num(k + 1)), "p_inv", pinv_reps[k]);
        for (size_t pi = 0; pi < n_pairs; ++pi) {
            const auto [p, q] = pairs[pi];
            const std::string label = pair_label(p, q);
            emit_rows(series_ref("pair_entropy", label), "pair_entropy", pair_entropy_reps[pi]);
            emit_rows(series_ref("concurrence", label), "concurrence", concurrence_reps[pi]);
            emit_rows(series_ref("extended_concurrence", label), "extended_concurrence",
                      ext_concurrence_reps[pi]);
        }

        // Single-spin entropy: average over the three pairs containing each
        // qubit; the error bar is the average of the three per-pair errors.
        for (int k = 0; k < n; ++k) {
            ObservableSeries& dest = series_ref("single_spin_entropy", "n" + num(k + 1));
            // per-pair replica vectors for qubit k
            std::vector<const std::vector<std::vector<double>>*> members;
            for (size_t pi = 0; pi < n_pairs; ++pi) {
                if (pairs[pi].first == k) members.push_back(&spin_high_reps[pi]);
                else if (pairs[pi].second == k) members.push_back(&spin_low_reps[pi]);
            }
            const auto averaged_row = [&](const std::string& tag,
                                          const std::vector<EnsembleEstimate>& parts) {
                double mean = 0.0, err = 0.0;
                for (const auto& e : parts) {
                    mean += e.mean;
                    err += 0.5 * (e.ci_high - e.ci_low);
                }
                mean /= static_cast<double>(parts.size());
                err /= static_cast<double>(parts.size());
                dest.points.push_back({t, tag, mean, mean - err, mean + err});
            };
            for (int ir = 0; ir < n_levels; ++ir) {
                std::vector<EnsembleEstimate> parts;
                for (const auto* m : members)
                    parts.push_back(ensemble_statistics((*m)[static_cast<size_t>(ir)]));
                averaged_row("r=" + num(config.noise_levels[ir]), parts);
            }
            if (config.recipes.count("single_spin_entropy")) {
                const ObservableRecipe& recipe = config.recipes.at("single_spin_entropy");
                std::vector<EnsembleEstimate> parts;
                for (const auto* m : members) {
                    std::vector<double> extrapolated(static_cast<size_t>(L));
                    for (int l = 0; l < L; ++l)
                        extrapolated[static_cast<size_t>(l)] = extrapolate_value(
                            recipe, r1, (*m)[static_cast<size_t>(ir1)][static_cast<size_t>(l)],
                            r2, (*m)[static_cast<size_t>(ir2)][static_cast<size_t>(l)]);
                    parts.push_back(ensemble_statistics(extrapolated));
                }
                averaged_row(recipe.ansatz, parts);
            }
        }
    }

    for (auto& [key, s] : series) bundle.series.push_back(std::move(s));
    return bundle;
}

nlohmann::json bundle_to_json(const ResultsBundle& bundle) {
    nlohmann::json j;
    j["config"] = config_to_json(bundle.config);
    j["config_hash"] = bundle.hash;
    j["version"] = "0.1.0";
    j["gate_counts"] = {{"entanglers", bundle.gates.entanglers},
                        {"single_qubit_rotations", bundle.gates.single_qubit_rotations}};
    j["permutation"] = bundle.permutation;
    nlohmann::json series = nlohmann::json::array();
    for (const auto& s : bundle.series) {
        nlohmann::json js;
        js["observable"] = s.observable;
        js["label"] = s.label;
        nlohmann::json pts = nlohmann::json::array();
        for (const auto& p : s.points)
            pts.push_back({{"t", p.t},
                           {"tag", p.tag},
                           {"mean", p.mean},
                           {"ci_low", p.ci_low},
                           {"ci_high", p.ci_high}});
        js["points"] = pts;
        series.push_back(js);
    }
    j["series"] = series;
    return j;
}

ResultsBundle bundle_from_json(const nlohmann::json& j) {
    ResultsBundle bundle;
    bundle.config = config_from_json(j.at("config"));
    bundle.hash = j.at("config_hash").get<std::string>();
    bundle.gates.entanglers = j.at("gate_counts").at("entanglers").get<int>();
    bundle.gates.single_qubit_rotations =
        j.at("gate_counts").at("single_qubit_rotations").get<int>();
    bundle.permutation = j.at("permutation").get<std::vector<int>>();
    for (const auto& js : j.at("series")) {
        ObservableSeries s;
        s.observable = js.at("observable").get<std::string>();
        s.label = js.at("label").get<std::string>();
        for (const auto& p : js.at("points"))
            s.points.push_back({p.at("t").get<double>(), p.at("tag").get<std::string>(),
                                p.at("mean").get<double>(), p.at("ci_low").get<double>(),
                                p.at("ci_high").get<double>()});
        bundle.series.push_back(std::move(s));
    }
    return bundle;
}

void emit_series(const ResultsBundle& bundle) {
    namespace fs = std::filesystem;
    const fs::path dir(bundle.config.out_dir);
    fs::create_directories(dir);
    if (bundle.config.format == "csv") {
        for (const auto& s : bundle.series) {
            std::ofstream out(dir / (s.observable + "_" + s.label + ".csv"),
                              std::ios::binary);
            if (!out) throw std::runtime_error("cannot write series CSV");
            out << "t,r_or_tag,mean,ci_low,ci_high\n";
            for (const auto& p : s.points)
                out << format_significant(p.t) << ',' << p.tag << ','
                    << format_significant(p.mean) << ',' << format_significant(p.ci_low)
                    << ',' << format_significant(p.ci_high) << '\n';
        }
    }
    std::ofstream out(dir / "results.json", std::ios::binary);
    if (!out) throw std::runtime_error("cannot write results.json");
    out << bundle_to_json(bundle).dump(2) << '\n';
}

std::vector<PropagatorPoint> compare_propagators(const ExperimentConfig& config) {
    config.validate();
    const NeutrinoModel model = build_model(config.n, config.theta_v, config.max_cos,
                                            config.matter_a);
    const int n = config.n;
    const Statevector psi0 = new_basis_state(n, config.initial_bitstring);

    std::vector<std::vector<int>> orderings;
    orderings.push_back(config.ordering);
    std::vector<int> trivial(static_cast<size_t>(n));
    std::iota(trivial.begin(), trivial.end(), 1);
    if (trivial != config.ordering) orderings.push_back(trivial);

    std::vector<int> identity_perm(static_cast<size_t>(n));
    std::iota(identity_perm.begin(), identity_perm.end(), 0);

    const auto spectral_norm = [](const MatX& m) {
        return Eigen::JacobiSVD<MatX>(m).singularValues()(0);
    };

    std::vector<PropagatorPoint> report;
    for (const double t : config.time_grid) {
        const MatX u_exact = exact_propagator(model, t);
        const Statevector psi_exact = exact_evolve(psi0, model, t);

        const Circuit c1 = trotter_u1_circuit(model, t);
        const MatX u1 = circuit_unitary(c1);
        const double norm_u1 = spectral_norm(u_exact - u1);
        const double fid_u1 = std::norm(psi_exact.amplitudes.dot(u1 * psi0.amplitudes));

        for (const auto& ordering : orderings) {
            const Circuit c2 = swap_network_circuit(model, t, ordering);
            // initial placement: wire w carries logical ordering[w]-1
            std::vector<int> place(static_cast<size_t>(n));
            for (int w = 0; w < n; ++w) place[static_cast<size_t>(ordering[w] - 1)] = w;
            const MatX u2 = placement_unitary(c2.permutation).adjoint() *
                            circuit_unitary(c2) * placement_unitary(place);

            PropagatorPoint pt;
            pt.t = t;
            std::string label;
            for (int v : ordering) label += std::to_string(v) + "-";
            pt.ordering = label.substr(0, label.size() - 1);
            pt.norm_u1 = norm_u1;
            pt.fidelity_u1 = fid_u1;
            pt.norm_u2 = spectral_norm(u_exact - u2);
            pt.fidelity_u2 = std::norm(psi_exact.amplitudes.dot(u2 * psi0.amplitudes));

            const Eigen::VectorXd probs_exact = probabilities(psi_exact);
            Statevector psi2 = psi0;
            psi2.amplitudes = u2 * psi0.amplitudes;
            const Eigen::VectorXd probs_u2 = probabilities(psi2);
            const int bit1 = config.initial_bitstring[0] == '1' ? 1 : 0;
            const int bit2 = config.initial_bitstring[1] == '1' ? 1 : 0;
            pt.p_inv_exact_n1 = inversion_probability(probs_exact, n, 0, bit1, identity_perm);
            pt.p_inv_u2_n1 = inversion_probability(probs_u2, n, 0, bit1, identity_perm);
            pt.p_inv_exact_n2 = inversion_probability(probs_exact, n, 1, bit2, identity_perm);
            pt.p_inv_u2_n2 = inversion_probability(probs_u2, n, 1, bit2, identity_perm);
            report.push_back(pt);
        }
    }
    return report;
}

void emit_propagator_report(const std::vector<PropagatorPoint>& report,
                            const std::string& out_dir, const std::string& format) {
    namespace fs = std::filesystem;
    fs::create_directories(out_dir);
    if (format == "csv") {
        std::ofstream out(fs::path(out_dir) / "compare_propagators.csv", std::ios::binary);
        if (!out) throw std::runtime_error("cannot write compare_propagators.csv");
        out << "t,ordering,norm_u1,norm_u2,fidelity_u1,fidelity_u2,"
               "p_inv_exact_n1,p_inv_u2_n1,p_inv_exact_n2,p_inv_u2_n2\n";
        for (const auto& p : report)
            out << format_significant(p.t) << ',' << p.ordering << ','
                << format_significant(p.norm_u1) << ',' << format_significant(p.norm_u2) << ','
                << format_significant(p.fidelity_u1) << ','
                << format_significant(p.fidelity_u2) << ','
                << format_significant(p.p_inv_exact_n1) << ','
                << format_significant(p.p_inv_u2_n1) << ','
                << format_significant(p.p_inv_exact_n2) << ','
                << format_significant(p.p_inv_u2_n2) << '\n';
    } else {
        nlohmann::json rows = nlohmann::json::array();
        for (const auto& p : report)
            rows.push_back({{"t", p.t},
                            {"ordering", p.ordering},
                            {"norm_u1", p.norm_u1},
                            {"norm_u2", p.norm_u2},
                            {"fidelity_u1", p.fidelity_u1},
                            {"fidelity_u2", p.fidelity_u2},
                            {"p_inv_exact_n1", p.p_inv_exact_n1},
                            {"p_inv_u2_n1", p.p_inv_u2_n1},
                            {"p_inv_exact_n2", p.p_inv_exact_n2},
                            {"p_inv_u2_n2", p.p_inv_u2_n2}});
        std::ofstream out(fs::path(out_dir) / "compare_propagators.json", std::ios::binary);
        if (!out) throw std::runtime_error("cannot write compare_propagators.json");
        out << rows.dump(2) << '\n';
    }
}

}  // namespace nuosc
