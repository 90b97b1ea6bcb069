#pragma once

#include <cstdint>
#include <random>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

namespace nuosc {

// Reproducible random source. The generator algorithm (mt19937_64) and every
// variate transform below are fixed by this file, so results are identical
// across platforms for a given seed. Distributions from <random> are
// deliberately not used: their output is implementation-defined.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : eng_(seed) {}

    // uniform double in [0, 1) with 53 bits of randomness
    double uniform();

    // standard normal via Box-Muller (cached second value)
    double normal();

    // Gamma(shape, 1) via Marsaglia-Tsang, boosted for shape < 1
    double gamma(double shape);

    double beta(double alpha, double beta);

    Eigen::VectorXd dirichlet(const Eigen::VectorXd& concentration);

    // Binomial(n, p) via CDF inversion (small mean) or Hormann's BTRS
    // transformed rejection, both exact
    long binomial(long n, double p);

    // multinomial draw over len(probs) categories via conditional binomials;
    // probs renormalized
    std::vector<long> multinomial(const Eigen::VectorXd& probs, long trials);

    std::uint64_t raw() { return eng_(); }

  private:
    std::mt19937_64 eng_;
    bool have_cached_normal_ = false;
    double cached_normal_ = 0.0;
};

// Derive an independent stream seed from a master seed and a label path,
// e.g. derive_seed(master, "t=3", "pair=1,2", "replica=17"). SplitMix64 over
// an FNV-1a hash of the labels; documented so runs are reproducible in part.
std::uint64_t derive_seed(std::uint64_t master, std::initializer_list<std::string_view> tags);

}  // namespace nuosc
