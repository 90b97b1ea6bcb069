#include <doctest.h>

#include <cmath>
#include <set>

#include <nuosc/rng.hpp>

using nuosc::Rng;

TEST_CASE("uniform stays in [0,1) and is deterministic per seed") {
    Rng a(42), b(42), c(43);
    bool all_in_range = true;
    bool same = true;
    bool differs = false;
    for (int i = 0; i < 1000; ++i) {
        const double ua = a.uniform();
        const double ub = b.uniform();
        const double uc = c.uniform();
        all_in_range = all_in_range && ua >= 0.0 && ua < 1.0;
        same = same && ua == ub;
        differs = differs || ua != uc;
    }
    CHECK(all_in_range);
    CHECK(same);
    CHECK(differs);
}

TEST_CASE("normal moments match a standard normal") {
    Rng rng(7);
    const int n = 200000;
    double sum = 0.0, sum2 = 0.0;
    for (int i = 0; i < n; ++i) {
        const double x = rng.normal();
        sum += x;
        sum2 += x * x;
    }
    const double mean = sum / n;
    const double var = sum2 / n - mean * mean;
    CHECK(std::abs(mean) < 0.01);        // ~4.5 sigma of the sample mean
    CHECK(std::abs(var - 1.0) < 0.02);
}

TEST_CASE("gamma mean and variance match shape") {
    Rng rng(11);
    for (const double shape : {0.5, 1.0, 4.7}) {
        const int n = 100000;
        double sum = 0.0, sum2 = 0.0;
        for (int i = 0; i < n; ++i) {
            const double x = rng.gamma(shape);
            sum += x;
            sum2 += x * x;
        }
        const double mean = sum / n;
        const double var = sum2 / n - mean * mean;
        CHECK(mean == doctest::Approx(shape).epsilon(0.03));
        CHECK(var == doctest::Approx(shape).epsilon(0.06));
    }
}

TEST_CASE("beta mean matches alpha/(alpha+beta)") {
    Rng rng(13);
    const int n = 100000;
    double sum = 0.0;
    for (int i = 0; i < n; ++i) sum += rng.beta(2.0, 6.0);
    CHECK(sum / n == doctest::Approx(0.25).epsilon(0.02));
}

TEST_CASE("dirichlet draws are a simplex point with the right mean") {
    Rng rng(17);
    Eigen::VectorXd conc(3);
    conc << 1.0, 2.0, 7.0;
    Eigen::VectorXd mean = Eigen::VectorXd::Zero(3);
    const int n = 50000;
    bool simplex = true;
    for (int i = 0; i < n; ++i) {
        const Eigen::VectorXd d = rng.dirichlet(conc);
        simplex = simplex && std::abs(d.sum() - 1.0) < 1e-12 && d.minCoeff() >= 0.0;
        mean += d;
    }
    mean /= n;
    CHECK(simplex);
    CHECK(mean(0) == doctest::Approx(0.1).epsilon(0.05));
    CHECK(mean(2) == doctest::Approx(0.7).epsilon(0.02));
}

TEST_CASE("binomial matches mean/variance in both sampling regimes") {
    Rng rng(19);
    // np < 10 -> CDF inversion; np large -> BTRS rejection
    struct Case { long n; double p; };
    for (const Case c : {Case{40, 0.1}, Case{5000, 0.3}}) {
        const int reps = 40000;
        double sum = 0.0, sum2 = 0.0;
        long min_v = c.n, max_v = 0;
        for (int i = 0; i < reps; ++i) {
            const long k = rng.binomial(c.n, c.p);
            min_v = std::min(min_v, k);
            max_v = std::max(max_v, k);
            sum += static_cast<double>(k);
            sum2 += static_cast<double>(k) * static_cast<double>(k);
        }
        CHECK(min_v >= 0);
        CHECK(max_v <= c.n);
        const double mean = sum / reps;
        const double var = sum2 / reps - mean * mean;
        CHECK(mean == doctest::Approx(c.n * c.p).epsilon(0.01));
        CHECK(var == doctest::Approx(c.n * c.p * (1 - c.p)).epsilon(0.05));
    }
    CHECK(rng.binomial(100, 0.0) == 0);
    CHECK(rng.binomial(100, 1.0) == 100);
}

TEST_CASE("multinomial conserves trials and matches category means") {
    Rng rng(23);
    Eigen::VectorXd probs(4);
    probs << 0.1, 0.2, 0.3, 0.4;
    const long trials = 8192;
    Eigen::VectorXd mean = Eigen::VectorXd::Zero(4);
    const int reps = 5000;
    bool conserved = true;
    for (int i = 0; i < reps; ++i) {
        const std::vector<long> draw = rng.multinomial(probs, trials);
        long total = 0;
        for (const long k : draw) total += k;
        conserved = conserved && total == trials;
        for (int k = 0; k < 4; ++k) mean(k) += static_cast<double>(draw[static_cast<size_t>(k)]);
    }
    mean /= reps;
    CHECK(conserved);
    for (int k = 0; k < 4; ++k)
        CHECK(mean(k) == doctest::Approx(trials * probs(k)).epsilon(0.01));
}

TEST_CASE("derive_seed is deterministic and tag-sensitive") {
    const std::uint64_t s1 = nuosc::derive_seed(99, {"t=3", "pair=1,2"});
    const std::uint64_t s2 = nuosc::derive_seed(99, {"t=3", "pair=1,2"});
    const std::uint64_t s3 = nuosc::derive_seed(99, {"t=3", "pair=1,3"});
    const std::uint64_t s4 = nuosc::derive_seed(100, {"t=3", "pair=1,2"});
    CHECK(s1 == s2);
    CHECK(s1 != s3);
    CHECK(s1 != s4);

    std::set<std::uint64_t> seen;
    for (int i = 0; i < 1000; ++i)
        seen.insert(nuosc::derive_seed(1, {"replica", std::to_string(i)}));
    CHECK(seen.size() == 1000);
}
