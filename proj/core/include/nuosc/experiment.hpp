#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "nuosc/circuit.hpp"
#include "nuosc/mitigation.hpp"
#include "nuosc/model.hpp"
#include "nuosc/noise.hpp"

namespace nuosc {

// Experiment orchestration: configuration, the simulate -> tomograph ->
// mitigate -> extrapolate pipeline over a time grid, and CSV/JSON emission.

struct ObservableRecipe {
    std::string ansatz = "shifted-exp";  // richardson | exp | shifted-exp
    double asymptote = 0.0;              // used by shifted-exp only
};

struct ExperimentConfig {
    int n = 4;
    double theta_v = 0.195;
    double max_cos = 0.9;
    double matter_a = 0.0;
    std::string initial_bitstring = "0011";  // flavor of neutrino k ('0' = e)
    std::vector<int> ordering = {1, 3, 2, 4};
    std::vector<double> time_grid;           // default: 17 points, 0..8
    std::string propagator = "u2";           // exact | u1 | u2
    double depol_2q = 0.01;
    double readout_e0 = 0.02;
    double readout_e1 = 0.02;
    std::vector<int> noise_levels = {1, 3, 5, 7};
    std::vector<int> extrapolation_levels = {1, 3};
    long shots = 8192;
    int replicas = 1000;
    std::map<std::string, ObservableRecipe> recipes;  // keyed by observable name
    std::uint64_t master_seed = 20481;
    std::string out_dir = "results";
    std::string format = "csv";  // csv | json

    void validate() const;  // throws std::invalid_argument on bad fields
};

ExperimentConfig default_config();

nlohmann::json config_to_json(const ExperimentConfig& config);
ExperimentConfig config_from_json(const nlohmann::json& j);
ExperimentConfig load_config(const std::string& path);

// FNV-1a hash of the canonical JSON form, as fixed-width hex.
std::string config_hash(const ExperimentConfig& config);

struct SeriesPoint {
    double t = 0.0;
    std::string tag;  // "r=1", "r=3", ... or the mitigation ansatz name
    double mean = 0.0;
    double ci_low = 0.0;
    double ci_high = 0.0;
};

struct ObservableSeries {
    std::string observable;  // p_inv | single_spin_entropy | pair_entropy |
                             // concurrence | extended_concurrence
    std::string label;       // "n1".."n4" for neutrinos, "12".."34" for pairs
    std::vector<SeriesPoint> points;
};

struct ResultsBundle {
    ExperimentConfig config;
    std::string hash;
    GateCounts gates;              // compiled single-step circuit (empty for exact)
    std::vector<int> permutation;  // logical -> physical wire after the circuit
    std::vector<ObservableSeries> series;
};

ResultsBundle run_experiment(const ExperimentConfig& config);

// One CSV file per series (columns t,r_or_tag,mean,ci_low,ci_high; floats at
// 12 significant digits) when format is "csv", plus a results.json mirror
// with full metadata in either format.
void emit_series(const ResultsBundle& bundle);

nlohmann::json bundle_to_json(const ResultsBundle& bundle);
ResultsBundle bundle_from_json(const nlohmann::json& j);

std::string format_significant(double value);  // 12 significant digits

struct PropagatorPoint {
    double t = 0.0;
    std::string ordering;     // e.g. "1-3-2-4"
    double norm_u1 = 0.0;     // ||exp(-iHt) - U1(t)||_2
    double norm_u2 = 0.0;
    double fidelity_u1 = 0.0;
    double fidelity_u2 = 0.0;
    double p_inv_exact_n1 = 0.0, p_inv_u2_n1 = 0.0;
    double p_inv_exact_n2 = 0.0, p_inv_u2_n2 = 0.0;
};

// Appendix-style diagnostic: norm errors, state fidelities, and exact vs U2
// inversion probabilities over the time grid, for the configured ordering
// and for the trivial ordering 1..N.
std::vector<PropagatorPoint> compare_propagators(const ExperimentConfig& config);

void emit_propagator_report(const std::vector<PropagatorPoint>& report,
                            const std::string& out_dir, const std::string& format);

// Wire-basis initial state: wire w holds the flavor bit of the neutrino
// placed there by `ordering` (identity for the exact propagator).
Statevector initial_wire_state(const ExperimentConfig& config, bool use_ordering);

// Permutation matrix P with (P psi_logical) indexed by wires, where
// place[k] is the wire carrying logical qubit k.
MatX placement_unitary(const std::vector<int>& place);

}  // namespace nuosc
