#include "nuosc/mitigation.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace nuosc {

BetaPosterior beta_update(const BetaPosterior& prior, double successes, double trials) {
    if (prior.alpha <= 0.0 || prior.beta <= 0.0)
        throw std::invalid_argument("beta prior parameters must be positive");
    if (successes < 0.0 || successes > trials)
        throw std::invalid_argument("successes must lie in [0, trials]");
    return {prior.alpha + successes, prior.beta + (trials - successes)};
}

DirichletPosterior dirichlet_update(const DirichletPosterior& prior,
                                    const std::vector<double>& counts) {
    if (prior.concentration.size() != counts.size())
        throw std::invalid_argument("counts dimension mismatch");
    DirichletPosterior post = prior;
    for (size_t k = 0; k < counts.size(); ++k) {
        if (counts[k] < 0.0) throw std::invalid_argument("counts must be nonnegative");
        post.concentration[k] += counts[k];
    }
    return post;
}

std::vector<double> sample_predictive_one(const DirichletPosterior& posterior,
                                          long long trials, Rng& rng) {
    const Eigen::VectorXd conc = Eigen::Map<const Eigen::VectorXd>(
        posterior.concentration.data(), static_cast<Eigen::Index>(posterior.concentration.size()));
    const Eigen::VectorXd p = rng.dirichlet(conc);
    const std::vector<long> counts = rng.multinomial(p, static_cast<long>(trials));
    std::vector<double> out(counts.size());
    for (size_t k = 0; k < counts.size(); ++k) out[k] = static_cast<double>(counts[k]);
    return out;
}

std::vector<std::vector<double>> sample_predictive(const DirichletPosterior& posterior,
                                                   long long trials, int replicas,
                                                   std::uint64_t seed) {
    if (replicas < 1) throw std::invalid_argument("need at least one replica");
    Rng rng(seed);
    std::vector<std::vector<double>> out;
    out.reserve(replicas);
    for (int l = 0; l < replicas; ++l) out.push_back(sample_predictive_one(posterior, trials, rng));
    return out;
}

namespace {

// Per-qubit calibration tallies: (errors, shots) for the 0- and 1-prepared runs.
struct CalibTally {
    double err0 = 0.0, tot0 = 0.0;
    double err1 = 0.0, tot1 = 0.0;
};

std::vector<CalibTally> tally_calibration(const CalibrationRecord& calib, int n_qubits) {
    std::vector<CalibTally> tally(n_qubits);
    for (const auto& [bits, count] : calib.zeros.counts) {
        if (static_cast<int>(bits.size()) != n_qubits)
            throw std::invalid_argument("calibration bitstring length mismatch");
        for (int q = 0; q < n_qubits; ++q) {
            tally[q].tot0 += count;
            if (bits[q] == '1') tally[q].err0 += count;
        }
    }
    for (const auto& [bits, count] : calib.ones.counts) {
        if (static_cast<int>(bits.size()) != n_qubits)
            throw std::invalid_argument("calibration bitstring length mismatch");
        for (int q = 0; q < n_qubits; ++q) {
            tally[q].tot1 += count;
            if (bits[q] == '0') tally[q].err1 += count;
        }
    }
    return tally;
}

}  // namespace

ReadoutParams estimate_readout(const CalibrationRecord& calib, int n_qubits) {
    const auto tally = tally_calibration(calib, n_qubits);
    ReadoutParams params;
    for (const auto& t : tally) {
        params.e0.push_back(beta_update({}, t.err0, t.tot0).mean());
        params.e1.push_back(beta_update({}, t.err1, t.tot1).mean());
    }
    return params;
}

ReadoutParams sample_readout(const CalibrationRecord& calib, int n_qubits, Rng& rng) {
    const auto tally = tally_calibration(calib, n_qubits);
    ReadoutParams params;
    for (const auto& t : tally) {
        const BetaPosterior p0 = beta_update({}, t.err0, t.tot0);
        const BetaPosterior p1 = beta_update({}, t.err1, t.tot1);
        params.e0.push_back(rng.beta(p0.alpha, p0.beta));
        params.e1.push_back(rng.beta(p1.alpha, p1.beta));
    }
    return params;
}

Eigen::MatrixXd readout_correction_map(const ReadoutParams& params,
                                       const std::vector<int>& qubits) {
    Eigen::MatrixXd map = Eigen::MatrixXd::Identity(1, 1);
    for (int q : qubits) {
        if (q < 0 || q >= static_cast<int>(params.e0.size()))
            throw std::invalid_argument("qubit outside calibrated range");
        const double e0 = params.e0[q];
        const double e1 = params.e1[q];
        Eigen::Matrix2d confusion;
        confusion << 1.0 - e0, e1, e0, 1.0 - e1;
        if (std::abs(confusion.determinant()) < 1e-12)
            throw std::invalid_argument("singular readout confusion matrix");
        const Eigen::Matrix2d inv = confusion.inverse();
        // kron(accumulated, inv): earlier qubits stay in the higher bits.
        Eigen::MatrixXd next(map.rows() * 2, map.cols() * 2);
        for (Eigen::Index i = 0; i < map.rows(); ++i)
            for (Eigen::Index j = 0; j < map.cols(); ++j)
                next.block(i * 2, j * 2, 2, 2) = map(i, j) * inv;
        map = std::move(next);
    }
    return map;
}

std::vector<Eigen::VectorXd> mitigate_readout_ensemble(const CountsRecord& measurement,
                                                       const CalibrationRecord& calibration,
                                                       int replicas, std::uint64_t seed) {
    if (replicas < 1) throw std::invalid_argument("need at least one replica");
    int n_qubits = 0;
    if (!measurement.counts.empty())
        n_qubits = static_cast<int>(measurement.counts.begin()->first.size());
    else
        throw std::invalid_argument("measurement record has no counts");
    const Eigen::Index dim = Eigen::Index(1) << n_qubits;
    std::vector<double> counts(dim, 0.0);
    for (const auto& [bits, c] : measurement.counts) {
        Eigen::Index idx = 0;
        for (char b : bits) idx = (idx << 1) | (b == '1' ? 1 : 0);
        counts[idx] += static_cast<double>(c);
    }
    DirichletPosterior prior{std::vector<double>(dim, 1.0)};
    const DirichletPosterior post = dirichlet_update(prior, counts);

    std::vector<int> all_qubits(n_qubits);
    for (int q = 0; q < n_qubits; ++q) all_qubits[q] = q;

    Rng rng(seed);
    std::vector<Eigen::VectorXd> out;
    out.reserve(replicas);
    for (int l = 0; l < replicas; ++l) {
        const std::vector<double> resampled = sample_predictive_one(post, measurement.shots, rng);
        const ReadoutParams params = sample_readout(calibration, n_qubits, rng);
        const Eigen::MatrixXd map = readout_correction_map(params, all_qubits);
        Eigen::VectorXd freq(dim);
        for (Eigen::Index k = 0; k < dim; ++k)
            freq(k) = resampled[k] / static_cast<double>(measurement.shots);
        out.push_back(map * freq);
    }
    return out;
}

double richardson_extrapolate(const std::vector<std::pair<double, double>>& points) {
    if (points.size() < 2) throw std::invalid_argument("need at least two noise levels");
    for (size_t i = 0; i < points.size(); ++i)
        for (size_t j = i + 1; j < points.size(); ++j)
            if (points[i].first == points[j].first)
                throw std::invalid_argument("duplicate noise level");
    // Lagrange interpolation evaluated at r = 0.
    double value = 0.0;
    for (size_t i = 0; i < points.size(); ++i) {
        double weight = 1.0;
        for (size_t j = 0; j < points.size(); ++j) {
            if (j == i) continue;
            weight *= -points[j].first / (points[i].first - points[j].first);
        }
        value += weight * points[i].second;
    }
    return value;
}

double exp_extrapolate(double v_r, double v_rp, double r, double rp) {
    if (r == rp) throw std::invalid_argument("noise levels must differ");
    if (v_r == 0.0 || v_rp == 0.0 || (v_r > 0.0) != (v_rp > 0.0))
        throw std::domain_error("exponential ansatz inapplicable");
    return v_r * std::pow(v_rp / v_r, r / (r - rp));
}

double shifted_exp_extrapolate(double v_r, double v_rp, double r, double rp,
                               double asymptote) {
    return asymptote + exp_extrapolate(v_r - asymptote, v_rp - asymptote, r, rp);
}

EnsembleEstimate ensemble_statistics(std::vector<double> samples) {
    if (samples.size() < 2) throw std::invalid_argument("need at least two samples");
    EnsembleEstimate est;
    double sum = 0.0;
    for (double v : samples) sum += v;
    est.mean = sum / static_cast<double>(samples.size());
    std::sort(samples.begin(), samples.end());
    const auto quantile = [&](double q) {
        const double pos = q * static_cast<double>(samples.size() - 1);
        const size_t lo = static_cast<size_t>(pos);
        const size_t hi = std::min(lo + 1, samples.size() - 1);
        const double frac = pos - static_cast<double>(lo);
        return samples[lo] * (1.0 - frac) + samples[hi] * frac;
    };
    est.ci_low = quantile(0.16);
    est.ci_high = quantile(0.84);
    return est;
}

}  // namespace nuosc
