#include "toricdef/solver.hpp"

#include <benchmark/benchmark.h>

using namespace toricdef;

namespace {

const Fan& bundle()
{
	static const Fan f = fixture_p1bundle_hirzebruch(1, -2, 5);
	return f;
}

LieElement spread(std::size_t nvars, int ray, int seed)
{
	LieElement x;
	for (std::size_t i = 0; i < nvars; ++i) {
		Exponent w(nvars, 0);
		w[i] = 1;
		x.add_term((ray + static_cast<int>(i)) % 6, w, Rational(seed + static_cast<int>(i), 3));
	}
	return x;
}

void BM_Bch(benchmark::State& state)
{
	const int trunc = static_cast<int>(state.range(0));
	LieContext ctx(bundle(), {{0, -1, -1}, {1, -1, -1}, {-1, 0, 1}}, trunc);
	LieElement x = spread(3, 0, 1), y = spread(3, 3, 2);
	for (auto _ : state)
		benchmark::DoNotOptimize(ctx.bch(x, y));
}
BENCHMARK(BM_Bch)->DenseRange(2, 6);

void BM_O0(benchmark::State& state)
{
	LieContext ctx(bundle(), {{0, -1, -1}, {1, -1, -1}, {-1, 0, 1}}, static_cast<int>(state.range(0)));
	LieCochain a{0, {}};
	for (int c = 0; c < static_cast<int>(bundle().num_cones()); ++c)
		a.set({c}, spread(3, c, c + 1));
	for (auto _ : state)
		benchmark::DoNotOptimize(o0(ctx, a));
}
BENCHMARK(BM_O0)->DenseRange(2, 4);

void BM_Support(benchmark::State& state)
{
	const int k = static_cast<int>(state.range(0));
	Fan fan = fixture_p1bundle_hirzebruch(2, -3, 4);
	for (auto _ : state)
		benchmark::DoNotOptimize(enumerate_support(fan, k, 20));
}
BENCHMARK(BM_Support)->Arg(1)->Arg(2)->Unit(benchmark::kMillisecond);

void BM_Hull125(benchmark::State& state)
{
	SolverOptions o;
	o.jobs = static_cast<int>(state.range(0));
	for (auto _ : state)
		benchmark::DoNotOptimize(solve(bundle(), o));
}
BENCHMARK(BM_Hull125)->Arg(1)->Arg(4)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
