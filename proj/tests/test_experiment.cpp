#include <doctest.h>

#include <filesystem>
#include <fstream>

#include <nuosc/experiment.hpp>

using namespace nuosc;

namespace {

ExperimentConfig tiny_config(const std::string& out_dir) {
    ExperimentConfig config = default_config();
    config.time_grid = {0.0, 2.0};
    config.noise_levels = {1, 3};
    config.extrapolation_levels = {1, 3};
    config.shots = 512;
    config.replicas = 16;
    config.out_dir = out_dir;
    return config;
}

std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    return std::string(std::istreambuf_iterator<char>(in), {});
}

}  // namespace

TEST_CASE("default config matches the reference setup and validates") {
    const ExperimentConfig config = default_config();
    CHECK(config.n == 4);
    CHECK(config.initial_bitstring == "0011");
    CHECK(config.ordering == std::vector<int>{1, 3, 2, 4});
    CHECK(config.time_grid.size() == 17);
    CHECK(config.time_grid.front() == 0.0);
    CHECK(config.time_grid.back() == 8.0);
    CHECK(config.noise_levels == std::vector<int>{1, 3, 5, 7});
    CHECK(config.shots == 8192);
    CHECK(config.recipes.count("single_spin_entropy") == 1);
    CHECK(config.recipes.at("single_spin_entropy").asymptote == doctest::Approx(1.0));
    CHECK(config.recipes.at("pair_entropy").asymptote == doctest::Approx(2.0));
    CHECK(config.recipes.at("extended_concurrence").asymptote == doctest::Approx(-0.5));
    CHECK(config.recipes.at("p_inv").asymptote == doctest::Approx(0.5));
    CHECK_NOTHROW(config.validate());
}

TEST_CASE("config validation rejects bad fields") {
    ExperimentConfig config = default_config();
    config.noise_levels = {1, 2};  // folding requires odd levels
    CHECK_THROWS_AS(config.validate(), std::invalid_argument);
    config = default_config();
    config.propagator = "u3";
    CHECK_THROWS_AS(config.validate(), std::invalid_argument);
    config = default_config();
    config.ordering = {1, 2, 3};  // wrong length
    CHECK_THROWS_AS(config.validate(), std::invalid_argument);
    config = default_config();
    config.initial_bitstring = "0012";
    CHECK_THROWS_AS(config.validate(), std::invalid_argument);
    config = default_config();
    config.extrapolation_levels = {1, 9};  // must be chosen from noise_levels
    CHECK_THROWS_AS(config.validate(), std::invalid_argument);
    config = default_config();
    config.replicas = 1;
    CHECK_THROWS_AS(config.validate(), std::invalid_argument);
}

TEST_CASE("config json round trip and stable hash") {
    const ExperimentConfig config = default_config();
    const ExperimentConfig back = config_from_json(config_to_json(config));
    CHECK(config_to_json(back) == config_to_json(config));
    CHECK(config_hash(back) == config_hash(config));
    ExperimentConfig other = config;
    other.master_seed += 1;
    CHECK(config_hash(other) != config_hash(config));
}

TEST_CASE("format_significant emits 12 significant digits") {
    CHECK(format_significant(1.0) == "1");
    CHECK(format_significant(0.5406432748576) == "0.540643274858");
    CHECK(format_significant(-1.23456789012345e-7) == "-1.23456789012e-07");
}

TEST_CASE("initial wire state respects the ordering") {
    ExperimentConfig config = default_config();
    // ordering (1,3,2,4) places flavors e,x,e,x on the wires
    const Statevector wires = initial_wire_state(config, true);
    CHECK(std::abs(wires.amplitudes(0b0101)) == doctest::Approx(1.0));
    const Statevector logical = initial_wire_state(config, false);
    CHECK(std::abs(logical.amplitudes(0b0011)) == doctest::Approx(1.0));
}

TEST_CASE("placement unitary permutes basis states") {
    // logical qubit k on wire place[k]
    const MatX p = placement_unitary({1, 0});
    VecX logical = VecX::Zero(4);
    logical(0b01) = 1.0;  // logical qubit 1 set
    const VecX wirev = p * logical;
    CHECK(std::abs(wirev(0b10)) == doctest::Approx(1.0));
}

TEST_CASE("compare_propagators frozen values") {
    ExperimentConfig config = default_config();
    config.time_grid = {0.0, 4.0};
    const auto report = compare_propagators(config);
    REQUIRE(report.size() == 4);  // two orderings x two times
    // t = 0: everything exact
    CHECK(report[0].norm_u1 == doctest::Approx(0.0).epsilon(1e-10));
    CHECK(report[0].fidelity_u2 == doctest::Approx(1.0).epsilon(1e-10));
    // t = 4, ordering (1,3,2,4): frozen dense-oracle values
    CHECK(report[0].ordering == "1-3-2-4");
    CHECK(report[1].ordering == "1-2-3-4");
    const PropagatorPoint& at4 = report[2];
    CHECK(at4.t == 4.0);
    CHECK(at4.norm_u1 == doctest::Approx(0.426201327092).epsilon(1e-6));
    CHECK(at4.norm_u2 == doctest::Approx(0.581377617093).epsilon(1e-6));
    CHECK(at4.fidelity_u1 == doctest::Approx(0.942121668093).epsilon(1e-6));
    CHECK(at4.fidelity_u2 == doctest::Approx(0.888445235120).epsilon(1e-6));
    CHECK(at4.p_inv_exact_n1 == doctest::Approx(0.540643274857628).epsilon(1e-9));
    CHECK(at4.p_inv_exact_n2 == doctest::Approx(0.171429251698458).epsilon(1e-9));
    // U2 symmetry deviation stays below 10% at t = 4
    CHECK(std::abs(at4.p_inv_u2_n1 - at4.p_inv_exact_n1) < 0.1);
}

TEST_CASE("run_experiment produces the advertised series") {
    ExperimentConfig config = tiny_config("/tmp/nuosc_test_run");
    const ResultsBundle bundle = run_experiment(config);
    CHECK(bundle.hash == config_hash(config));
    CHECK(bundle.gates.entanglers <= 18);
    // 4 p_inv + 4 single-spin + 6 pairs x 3 pair observables = 26 series
    CHECK(bundle.series.size() == 26);
    for (const auto& series : bundle.series) {
        // per time point: one row per noise level plus the extrapolated row
        CHECK(series.points.size() ==
              config.time_grid.size() * (config.noise_levels.size() + 1));
        for (const auto& pt : series.points) {
            CHECK(std::isfinite(pt.mean));
            CHECK(pt.ci_low <= pt.ci_high + 1e-12);
        }
    }
    // bundle json round trip
    const ResultsBundle back = bundle_from_json(bundle_to_json(bundle));
    CHECK(back.series.size() == bundle.series.size());
    CHECK(back.series[0].points[0].mean ==
          doctest::Approx(bundle.series[0].points[0].mean).epsilon(1e-12));
}

TEST_CASE("emit_series writes deterministic csv") {
    ExperimentConfig config = tiny_config("/tmp/nuosc_csv_a");
    const ResultsBundle a = run_experiment(config);
    emit_series(a);
    config.out_dir = "/tmp/nuosc_csv_b";
    const ResultsBundle b = run_experiment(config);
    emit_series(b);
    int compared = 0;
    for (const auto& entry : std::filesystem::directory_iterator("/tmp/nuosc_csv_a")) {
        if (entry.path().extension() != ".csv") continue;
        const auto other = std::filesystem::path("/tmp/nuosc_csv_b") / entry.path().filename();
        REQUIRE(std::filesystem::exists(other));
        CHECK(slurp(entry.path()) == slurp(other));
        ++compared;
    }
    CHECK(compared == 26);
    // header row and utf-8 comma format
    const std::string csv = slurp("/tmp/nuosc_csv_a/p_inv_n1.csv");
    CHECK(csv.rfind("t,", 0) == 0);
    CHECK(csv.find(',') != std::string::npos);
}
