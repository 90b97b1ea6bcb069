#include <benchmark/benchmark.h>

#include <numeric>
#include <string>
#include <vector>

#include <nuosc/circuit.hpp>
#include <nuosc/experiment.hpp>
#include <nuosc/kak.hpp>
#include <nuosc/model.hpp>
#include <nuosc/noise.hpp>
#include <nuosc/rng.hpp>
#include <nuosc/tomography.hpp>

using namespace nuosc;

namespace {

void bm_apply_2q(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    Statevector psi = new_basis_state(n, std::string(static_cast<size_t>(n), '0'));
    const Mat4 gate = pair_unitary(build_model(4, 0.195, 0.9, 0.0), 0, 1, 1.0);
    for (auto _ : state) {
        apply_2q(psi, gate, 0, n - 1);
        benchmark::DoNotOptimize(psi.amplitudes.data());
    }
}
BENCHMARK(bm_apply_2q)->Arg(4)->Arg(8)->Arg(12);

void bm_swap_network(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    const NeutrinoModel model = build_model(n, 0.195, 0.9, 0.0);
    for (auto _ : state) {
        const Circuit c = swap_network_circuit(model, 4.0);
        benchmark::DoNotOptimize(c.gates.size());
    }
}
BENCHMARK(bm_swap_network)->Arg(4)->Arg(6)->Arg(8);

void bm_compile_circuit(benchmark::State& state) {
    const NeutrinoModel model = build_model(4, 0.195, 0.9, 0.0);
    const Circuit c = swap_network_circuit(model, 4.0, {1, 3, 2, 4});
    for (auto _ : state) {
        const Circuit compiled = compile_circuit(c);
        benchmark::DoNotOptimize(compiled.gates.size());
    }
}
BENCHMARK(bm_compile_circuit);

void bm_noisy_density(benchmark::State& state) {
    const NeutrinoModel model = build_model(4, 0.195, 0.9, 0.0);
    const Circuit compiled = compile_circuit(swap_network_circuit(model, 4.0, {1, 3, 2, 4}));
    const Statevector psi0 = new_basis_state(4, "0101");
    const NoiseModel noise = NoiseModel::uniform(4, 0.01, 0.0, 0.0);
    for (auto _ : state) {
        const DensityMatrix rho = run_noisy_density(compiled, psi0, noise);
        benchmark::DoNotOptimize(rho.matrix.data());
    }
}
BENCHMARK(bm_noisy_density);

void bm_ml_reconstruct(benchmark::State& state) {
    const NeutrinoModel model = build_model(4, 0.195, 0.9, 0.0);
    const Statevector psi = exact_evolve(new_basis_state(4, "0011"), model, 4.0);
    const Mat4 truth = Mat4(reduced_density(psi, {0, 3}).matrix);
    SettingCounts counts;
    for (const auto& setting : measurement_settings()) {
        const Eigen::Vector4d probs = setting_probabilities(truth, setting);
        const CountsRecord rec = sample_counts(probs, 8192, 99, 2, setting);
        SettingData data;
        for (const auto& [bits, c] : rec.counts)
            data.weights[std::stoul(bits, nullptr, 2)] = static_cast<double>(c);
        data.total = static_cast<double>(rec.shots);
        counts[setting] = data;
    }
    for (auto _ : state) {
        const MlResult r = ml_reconstruct(counts);
        benchmark::DoNotOptimize(r.log_likelihood);
    }
}
BENCHMARK(bm_ml_reconstruct);

void bm_kak(benchmark::State& state) {
    const NeutrinoModel model = build_model(4, 0.195, 0.9, 0.0);
    const Mat4 u = Mat4(swap_gate() * pair_unitary(model, 0, 3, 4.0));
    for (auto _ : state) {
        const CompiledGate kak = kak_decompose(u);
        benchmark::DoNotOptimize(kak.entangler_count);
    }
}
BENCHMARK(bm_kak);

}  // namespace

BENCHMARK_MAIN();
