#include "nuosc/rng.hpp"

#include <cmath>
#include <stdexcept>

namespace nuosc {

double Rng::uniform() {
    return static_cast<double>(eng_() >> 11) * 0x1.0p-53;
}

double Rng::normal() {
    if (have_cached_normal_) {
        have_cached_normal_ = false;
        return cached_normal_;
    }
    double u1 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    cached_normal_ = r * std::sin(2.0 * M_PI * u2);
    have_cached_normal_ = true;
    return r * std::cos(2.0 * M_PI * u2);
}

double Rng::gamma(double shape) {
    if (shape <= 0.0) throw std::invalid_argument("gamma: shape must be positive");
    if (shape < 1.0) {
        // Gamma(a) = Gamma(a+1) * U^{1/a}
        const double g = gamma(shape + 1.0);
        double u = uniform();
        while (u <= 0.0) u = uniform();
        return g * std::pow(u, 1.0 / shape);
    }
    const double d = shape - 1.0 / 3.0;
    const double c = 1.0 / std::sqrt(9.0 * d);
    for (;;) {
        double x, v;
        do {
            x = normal();
            v = 1.0 + c * x;
        } while (v <= 0.0);
        v = v * v * v;
        const double u = uniform();
        if (u < 1.0 - 0.0331 * x * x * x * x) return d * v;
        if (u > 0.0 && std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) return d * v;
    }
}

double Rng::beta(double alpha, double b) {
    const double x = gamma(alpha);
    const double y = gamma(b);
    return x / (x + y);
}

Eigen::VectorXd Rng::dirichlet(const Eigen::VectorXd& concentration) {
    Eigen::VectorXd out(concentration.size());
    double total = 0.0;
    for (Eigen::Index i = 0; i < concentration.size(); ++i) {
        out[i] = gamma(concentration[i]);
        total += out[i];
    }
    return out / total;
}

namespace {

// Correction term of Stirling's series for log k!, used by the BTRS sampler.
double stirling_tail(double k) {
    static const double exact[] = {0.0810614667953272,  0.0413406959554092,
                                   0.0276779256849983,  0.02079067210376509,
                                   0.0166446911898211,  0.0138761288230707,
                                   0.0118967099458917,  0.0104112652619720,
                                   0.00925546218271273, 0.00833056343336287};
    if (k < 10.0) return exact[static_cast<int>(k)];
    const double kp1sq = (k + 1.0) * (k + 1.0);
    return (1.0 / 12.0 - (1.0 / 360.0 - 1.0 / 1260.0 / kp1sq) / kp1sq) / (k + 1.0);
}

}  // namespace

long Rng::binomial(long n, double p) {
    if (n < 0) throw std::invalid_argument("binomial: negative trial count");
    if (n == 0 || p <= 0.0) return 0;
    if (p >= 1.0) return n;
    if (p > 0.5) return n - binomial(n, 1.0 - p);

    const double np = static_cast<double>(n) * p;
    if (np < 10.0) {
        // sequential CDF inversion; fast when the mean is small
        const double q = 1.0 - p;
        const double ratio = p / q;
        double pmf = std::pow(q, static_cast<double>(n));
        double cdf = pmf;
        const double u = uniform();
        long k = 0;
        while (u > cdf && k < n) {
            ++k;
            pmf *= ratio * static_cast<double>(n - k + 1) / static_cast<double>(k);
            cdf += pmf;
        }
        return k;
    }

    // Hormann's BTRS transformed-rejection sampler: exact and O(1).
    const double stddev = std::sqrt(np * (1.0 - p));
    const double b = 1.15 + 2.53 * stddev;
    const double a = -0.0873 + 0.0248 * b + 0.01 * p;
    const double c = np + 0.5;
    const double v_r = 0.92 - 4.2 / b;
    const double r = p / (1.0 - p);
    const double alpha = (2.83 + 5.1 / b) * stddev;
    const double m = std::floor((static_cast<double>(n) + 1.0) * p);
    for (;;) {
        const double u = uniform() - 0.5;
        double v = uniform();
        const double us = 0.5 - std::abs(u);
        const double k = std::floor((2.0 * a / us + b) * u + c);
        if (k < 0.0 || k > static_cast<double>(n)) continue;
        if (us >= 0.07 && v <= v_r) return static_cast<long>(k);
        if (v <= 0.0) continue;
        v = std::log(v * alpha / (a / (us * us) + b));
        const double nd = static_cast<double>(n);
        const double bound =
            (m + 0.5) * std::log((m + 1.0) / (r * (nd - m + 1.0))) +
            (nd + 1.0) * std::log((nd - m + 1.0) / (nd - k + 1.0)) +
            (k + 0.5) * std::log(r * (nd - k + 1.0) / (k + 1.0)) +
            stirling_tail(m) + stirling_tail(nd - m) - stirling_tail(k) -
            stirling_tail(nd - k);
        if (v <= bound) return static_cast<long>(k);
    }
}

std::vector<long> Rng::multinomial(const Eigen::VectorXd& probs, long trials) {
    const Eigen::Index k = probs.size();
    double total = 0.0;
    for (Eigen::Index i = 0; i < k; ++i) total += std::max(0.0, probs[i]);
    if (total <= 0.0) throw std::invalid_argument("multinomial: probabilities sum to zero");
    // chain of conditional binomials
    std::vector<long> counts(k, 0);
    long remaining = trials;
    double remaining_p = total;
    for (Eigen::Index i = 0; i + 1 < k && remaining > 0; ++i) {
        const double pi = std::max(0.0, probs[i]);
        const double cond = remaining_p > 0.0 ? std::min(1.0, pi / remaining_p) : 1.0;
        counts[i] = binomial(remaining, cond);
        remaining -= counts[i];
        remaining_p -= pi;
    }
    if (k > 0) counts[k - 1] += remaining;
    return counts;
}

namespace {
std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}
}  // namespace

std::uint64_t derive_seed(std::uint64_t master, std::initializer_list<std::string_view> tags) {
    std::uint64_t h = splitmix64(master);
    for (const auto& tag : tags) {
        std::uint64_t f = 0xcbf29ce484222325ULL;  // FNV-1a
        for (const char c : tag) {
            f ^= static_cast<unsigned char>(c);
            f *= 0x100000001b3ULL;
        }
        h = splitmix64(h ^ f);
    }
    return h;
}

}  // namespace nuosc
