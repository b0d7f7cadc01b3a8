#include <benchmark/benchmark.h>

#include <vector>

#include "wavkan/diffengine.hpp"
#include "wavkan/experiments.hpp"
#include "wavkan/network.hpp"
#include "wavkan/ntk.hpp"
#include "wavkan/pinn.hpp"
#include "wavkan/training.hpp"

using namespace wavkan;

namespace {

void BM_Forward(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    const auto net = init({1, n, 1}, MotherWavelet::morlet(1.0, 5.0), 0);
    const std::vector<double> x{0.37};
    for (auto _ : state) benchmark::DoNotOptimize(forward(net, x));
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(2 * n));
}
BENCHMARK(BM_Forward)->Arg(35)->Arg(200);

void BM_ParamGradient(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    const auto net = init({1, n, 1}, MotherWavelet::morlet(1.0, 5.0), 0);
    const std::vector<double> x{0.37};
    for (auto _ : state) benchmark::DoNotOptimize(grad_params(net, x));
}
BENCHMARK(BM_ParamGradient)->Arg(35)->Arg(200);

void BM_OperatorGradient(benchmark::State& state) {
    const auto net = init({2, 20, 20, 20, 1}, MotherWavelet::morlet(1.0, 5.0), 0);
    const LinearOperator op{0.0, {{1, 0.0, 1.0}, {0, 0.0, -4.0}}};
    const std::vector<double> x{0.3, 0.6};
    std::vector<double> grad(net.num_total());
    JetEvaluator jets;
    for (auto _ : state) benchmark::DoNotOptimize(jets.apply_with_grad(net, x, op, 1.0, grad));
}
BENCHMARK(BM_OperatorGradient);

void BM_NtkSpectrum(benchmark::State& state) {
    const auto net = init({1, 35, 1}, MotherWavelet::morlet(1.0, 15.0), 0);
    const FitData data = make_fit_data(FitTarget::TwoTone, static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(eigendecompose(ntk_matrix(net, data.X)));
}
BENCHMARK(BM_NtkSpectrum)->Arg(100)->Unit(benchmark::kMillisecond);

void BM_PinnLossAndGradient(benchmark::State& state) {
    const auto kind = static_cast<PdeKind>(state.range(0));
    const auto problem = PdeProblem::preset(kind);
    const NetSpec spec = preset_net(kind);
    const auto net = init(spec.shape, spec.wavelet, 0, spec.policy, problem.domain[0]);
    PinnObjective objective(problem, sample_collocation(problem));
    std::vector<double> grad(net.num_trainable());
    for (auto _ : state) benchmark::DoNotOptimize(objective.evaluate(net, grad));
    state.SetLabel(std::string(to_string(kind)));
}
BENCHMARK(BM_PinnLossAndGradient)
    ->Arg(static_cast<int>(PdeKind::Poisson1D))
    ->Arg(static_cast<int>(PdeKind::Heat1D))
    ->Arg(static_cast<int>(PdeKind::Wave1D))
    ->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
