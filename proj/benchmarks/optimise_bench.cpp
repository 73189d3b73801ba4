// SPDX-License-Identifier: Apache-2.0
// Copyright Contributors to the chromafit Project.

#include <chromafit/data_io.hpp>
#include <chromafit/data_opt.hpp>
#include <chromafit/luther.hpp>
#include <chromafit/seeding.hpp>
#include <chromafit/synthetic.hpp>

#include <benchmark/benchmark.h>

using namespace chromafit;

namespace
{

Scenario scenario( std::size_t surfaces )
{
    const SpectralGrid grid;
    synthetic::Random  rng( 4 );
    const auto         refl =
        std::make_shared<const ReflectanceSet>( synthetic::smooth_reflectances( grid, surfaces, rng ) );
    return Scenario::per_light( { color_signal( reference_illuminant( "D65", grid ), refl ),
                                  color_signal( reference_illuminant( "A", grid ), refl ) },
                                reference_cmfs( grid ) );
}

} // namespace

static void BM_OptimizeLuther( benchmark::State &state )
{
    const SpectralGrid grid;
    const auto         cam = synthetic::gaussian_camera( grid );
    const auto         x   = reference_cmfs( grid );
    for ( auto _ : state )
        benchmark::DoNotOptimize( optimize_luther( cam, x ) );
}
BENCHMARK( BM_OptimizeLuther )->Unit( benchmark::kMillisecond );

static void BM_OptimizeData( benchmark::State &state )
{
    const SpectralGrid grid;
    const auto         cam = synthetic::gaussian_camera( grid );
    const auto         s   = scenario( 300 );
    const auto         cons =
        state.range( 0 ) == 0 ? ConstraintSpec::unconstrained()
                              : ConstraintSpec::basis_bounded( cosine_basis( grid, 6 ), 0.2, 1.0 );
    AlsOptions opts;
    opts.max_iterations = 100;
    for ( auto _ : state )
        benchmark::DoNotOptimize( optimize_data( cam, s, FilterCurve::ones( grid ), cons, opts ) );
}
BENCHMARK( BM_OptimizeData )->Arg( 0 )->Arg( 1 )->Unit( benchmark::kMillisecond );

static void BM_GenerateSeeds( benchmark::State &state )
{
    const auto basis = cosine_basis( SpectralGrid(), 6 );
    for ( auto _ : state )
        benchmark::DoNotOptimize(
            generate_seed_set( basis, 0.2, 1.0, static_cast<std::size_t>( state.range( 0 ) ), 1.0, 42 ) );
}
BENCHMARK( BM_GenerateSeeds )->Arg( 100 )->Arg( 500 )->Unit( benchmark::kMillisecond );
