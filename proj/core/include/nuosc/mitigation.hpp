#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "nuosc/noise.hpp"
#include "nuosc/rng.hpp"
#include "nuosc/statevector.hpp"
#include "nuosc/tomography.hpp"

namespace nuosc {

// Bayesian treatment of finite-shot data: conjugate posterior updates over
// outcome probabilities, posterior-predictive resampling into an ensemble of
// replicas, readout-error inversion with uncertainty propagation, and
// zero-noise extrapolation in three ansatze.

struct BetaPosterior {
    double alpha = 1.0;
    double beta = 1.0;

    double mean() const { return alpha / (alpha + beta); }
};

BetaPosterior beta_update(const BetaPosterior& prior, double successes, double trials);

struct DirichletPosterior {
    std::vector<double> concentration;
};

DirichletPosterior dirichlet_update(const DirichletPosterior& prior,
                                    const std::vector<double>& counts);

// L posterior-predictive replicas: for each, draw outcome probabilities from
// the posterior and resample counts at the original trial number.
std::vector<std::vector<double>> sample_predictive(const DirichletPosterior& posterior,
                                                   long long trials, int replicas,
                                                   std::uint64_t seed);

// Single-replica form for callers that manage their own stream.
std::vector<double> sample_predictive_one(const DirichletPosterior& posterior,
                                          long long trials, Rng& rng);

struct ReadoutParams {
    std::vector<double> e0;  // P(read 1 | prepared 0), per qubit
    std::vector<double> e1;  // P(read 0 | prepared 1), per qubit
};

// Posterior means of the per-qubit error rates given calibration counts.
ReadoutParams estimate_readout(const CalibrationRecord& calib, int n_qubits);

// Draw per-qubit error rates from their beta posteriors.
ReadoutParams sample_readout(const CalibrationRecord& calib, int n_qubits, Rng& rng);

// Tensor product of inverted per-qubit confusion matrices over the listed
// qubits (order fixes bit significance: qubits[0] is the most significant
// bit of the outcome index). Maps observed frequencies to corrected
// quasi-probabilities; no clipping.
Eigen::MatrixXd readout_correction_map(const ReadoutParams& params,
                                       const std::vector<int>& qubits);

// L corrected probability-vector replicas over the full 2^n outcome space:
// Dirichlet predictive resample of the counts, beta resample of the
// calibration errors, correction map applied. Quasi-probabilities pass
// through unclipped.
std::vector<Eigen::VectorXd> mitigate_readout_ensemble(const CountsRecord& measurement,
                                                       const CalibrationRecord& calibration,
                                                       int replicas, std::uint64_t seed);

// Polynomial Richardson estimate at r = 0 (linear fit for two points).
double richardson_extrapolate(const std::vector<std::pair<double, double>>& points);

// Exponential ansatz v(r) = A exp(-b r): A = v_r (v_rp / v_r)^(r/(r-rp)).
double exp_extrapolate(double v_r, double v_rp, double r, double rp);

// Exponential approach to a known asymptote a: v(r) = a + (v0 - a) exp(-b r).
double shifted_exp_extrapolate(double v_r, double v_rp, double r, double rp,
                               double asymptote);

struct EnsembleEstimate {
    double mean = 0.0;
    double ci_low = 0.0;   // 16th percentile
    double ci_high = 0.0;  // 84th percentile
};

// Mean and central 68% interval by empirical quantiles of the replicas.
EnsembleEstimate ensemble_statistics(std::vector<double> samples);

}  // namespace nuosc
