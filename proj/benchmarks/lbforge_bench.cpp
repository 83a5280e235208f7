// lbforge_bench.cpp — microbenchmarks for the solver hot paths.
//
// Sizes are labelled by chain length n (Hilbert dimension 2^n, Liouvillian
// dimension 4^n).  The steady-state solves dominate every experiment, so the
// pieces they are made of — superoperator assembly, matrix-free RHS
// application, the PSD/trace projection, and the two solvers themselves —
// are measured separately.

#include <benchmark/benchmark.h>

#include "lbforge/liouvillian.hpp"
#include "lbforge/models.hpp"
#include "lbforge/observables.hpp"
#include "lbforge/steady_state.hpp"

namespace {

using namespace lbforge;

LindbladSystem tfim_chain(std::size_t n_sites) {
    TfimParams p;
    p.n_sites = n_sites;
    p.j_coupling = 1.0;
    p.g = 0.5;
    p.gamma = 1.0;
    return build_tfim(p);
}

ComplexMatrix thermal_like_state(const LindbladSystem& system) {
    const Eigen::Index d = system.dim();
    ComplexMatrix rho = ComplexMatrix::Zero(d, d);
    for (Eigen::Index i = 0; i < d; ++i) rho(i, i) = Complex(2.0 * double(d - i), 0.0);
    rho /= rho.trace();
    return rho;
}

void BuildDenseLiouvillian(benchmark::State& state) {
    const LindbladSystem system = tfim_chain(std::size_t(state.range(0)));
    for (auto _ : state) {
        SuperOperator sop = build_liouvillian(system);
        benchmark::DoNotOptimize(sop.matrix.data());
    }
}
BENCHMARK(BuildDenseLiouvillian)->DenseRange(2, 4)->Unit(benchmark::kMillisecond);

void BuildSparseLiouvillian(benchmark::State& state) {
    const LindbladSystem system = tfim_chain(std::size_t(state.range(0)));
    for (auto _ : state) {
        auto sparse = build_sparse_liouvillian(system);
        benchmark::DoNotOptimize(sparse.nonZeros());
    }
}
BENCHMARK(BuildSparseLiouvillian)->DenseRange(2, 5)->Unit(benchmark::kMillisecond);

void ApplyRhsMatrixFree(benchmark::State& state) {
    const LindbladSystem system = tfim_chain(std::size_t(state.range(0)));
    const LiouvillianAction action(system);
    const ComplexMatrix rho = thermal_like_state(system);
    for (auto _ : state) {
        ComplexMatrix out = action.rhs(rho);
        benchmark::DoNotOptimize(out.data());
    }
}
BENCHMARK(ApplyRhsMatrixFree)->DenseRange(2, 6)->Unit(benchmark::kMicrosecond);

void ProjectToDensityMatrixBench(benchmark::State& state) {
    const Eigen::Index d = state.range(0);
    ComplexMatrix a = ComplexMatrix::Random(d, d);
    a = ((a + a.adjoint()) / 2.0).eval();  // Hermitian but indefinite, trace != 1
    for (auto _ : state) {
        ComplexMatrix rho = project_to_density_matrix(a);
        benchmark::DoNotOptimize(rho.data());
    }
}
BENCHMARK(ProjectToDensityMatrixBench)->RangeMultiplier(2)->Range(8, 64)
    ->Unit(benchmark::kMicrosecond);

void SolveNullspace(benchmark::State& state) {
    const LindbladSystem system = tfim_chain(std::size_t(state.range(0)));
    const SuperOperator sop = build_liouvillian(system);
    for (auto _ : state) {
        SteadyStateResult r = solve_nullspace(sop);
        benchmark::DoNotOptimize(r.rho.data());
    }
}
BENCHMARK(SolveNullspace)->DenseRange(2, 4)->Unit(benchmark::kMillisecond);

void SolveConstrained(benchmark::State& state) {
    const LindbladSystem system = tfim_chain(std::size_t(state.range(0)));
    for (auto _ : state) {
        SteadyStateResult r = solve_constrained(system);
        benchmark::DoNotOptimize(r.rho.data());
    }
}
BENCHMARK(SolveConstrained)->DenseRange(2, 5)->Unit(benchmark::kMillisecond);

void NegativityHalfChain(benchmark::State& state) {
    const std::size_t n = std::size_t(state.range(0));
    const LindbladSystem system = tfim_chain(n);
    const ComplexMatrix rho = thermal_like_state(system);
    const Bipartition split = chain_half_bipartition(n);
    for (auto _ : state) {
        double neg = negativity(rho, split);
        benchmark::DoNotOptimize(neg);
    }
}
BENCHMARK(NegativityHalfChain)->DenseRange(2, 6)->Unit(benchmark::kMicrosecond);

}  // namespace

BENCHMARK_MAIN();
