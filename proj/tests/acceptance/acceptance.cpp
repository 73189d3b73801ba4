// SPDX-License-Identifier: Apache-2.0
// Copyright Contributors to the chromafit Project.

// One line per acceptance criterion: PASS, FAIL or SKIPPED. Exit status is
// nonzero when any criterion fails.
//
// Dataset-backed criteria read CHROMAFIT_DATASETS, a directory holding
//   canon5dmkii.csv    camera sensitivities (wavelength_nm, r, g, b)
//   reflectances.csv   the 1995-surface reflectance set
//   cameras/*.csv      the 28-camera sensitivity collection

#include "common/properties.hpp"

#include <chromafit/data_io.hpp>
#include <chromafit/data_opt.hpp>
#include <chromafit/luther.hpp>
#include <chromafit/metrics.hpp>
#include <chromafit/seeding.hpp>
#include <chromafit/synthetic.hpp>

#include <algorithm>
#include <chrono>
#include <cstdarg>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <sstream>
#include <string>
#include <thread>

using namespace chromafit;
namespace fs = std::filesystem;

namespace
{

enum class Status
{
    Pass,
    Fail,
    Skipped
};

struct Outcome
{
    Status      status = Status::Fail;
    std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since( Clock::time_point t0 )
{
    return std::chrono::duration<double>( Clock::now() - t0 ).count();
}

std::string fmt( const char *format, ... ) __attribute__( ( format( printf, 1, 2 ) ) );
std::string fmt( const char *format, ... )
{
    char    buf[512];
    va_list args;
    va_start( args, format );
    std::vsnprintf( buf, sizeof buf, format, args );
    va_end( args );
    return buf;
}

std::optional<fs::path> dataset_dir()
{
    const char *env = std::getenv( "CHROMAFIT_DATASETS" );
    if ( !env || !*env || !fs::is_directory( env ) )
        return std::nullopt;
    return fs::path( env );
}

//	---------------------------------------------------------------------

Outcome property_suite()
{
    const auto t0   = Clock::now();
    const auto mono = property::als_monotonicity( 50, 1 );
    const auto sc   = property::scale_ambiguity_error( 20, 2 );
    const auto vec  = property::vectorization_error( 100, 3 );
    const auto qp   = property::qp_box_oracle( 5, 4 );
    const auto vora = property::vora_invariance_error( 500, 5 );
    const double t  = seconds_since( t0 );

    const bool ok = mono.violations == 0 && sc < 1e-12 && vec < 1e-10 && qp.kkt < 1e-7 &&
                    qp.grid < 1e-4 && vora < 1e-10 && t < 60.0;
    return { ok ? Status::Pass : Status::Fail,
             fmt( "ALS %d/%d monotone (worst rise %.1e); scale %.1e; vectorization %.1e; "
                  "QP KKT %.1e, grid gap %.1e; Vora %.1e; %.1f s (limit 60 s)",
                  mono.problems - mono.violations, mono.problems, mono.worst, sc, vec, qp.kkt,
                  qp.grid, vora, t ) };
}

// X = diag(f*) Q M with f* > 0 and M entries drawn from U(0, 1), so X > 0.
Outcome planted_recovery()
{
    const auto         t0 = Clock::now();
    const SpectralGrid grid;
    synthetic::Random  rng( 11 );
    AlsOptions         opts;
    opts.epsilon        = 1e-26;
    opts.max_iterations = 200000;
    int    passed       = 0;
    double worst        = 0.0;
    for ( int t = 0; t < 20; ++t )
    {
        const auto   q     = synthetic::random_camera( grid, rng );
        const Vector fstar = synthetic::smooth_filter( grid, rng, 0.2, 1.0 ).values();
        Matrix3      m;
        for ( int i = 0; i < 3; ++i )
            for ( int j = 0; j < 3; ++j )
                m( i, j ) = rng.uniform();
        const MatrixX3 x   = fstar.asDiagonal() * q.values() * m;
        const auto     r   = optimize_luther( q, SensorSet( grid, x ), opts );
        const double   rel = r.trace.objective.back() / x.squaredNorm();
        worst              = std::max( worst, rel );
        passed += ( rel < 1e-8 && check_positivity( r ).all_positive ) ? 1 : 0;
    }
    const double t  = seconds_since( t0 );
    const bool   ok = passed == 20 && t < 10.0;
    return { ok ? Status::Pass : Status::Fail,
             fmt( "%d/20 below 1e-8 |X|^2 with positive filter (worst %.1e); eps %.0e, cap %d; "
                  "%.1f s (limit 10 s)",
                  passed, worst, opts.epsilon, opts.max_iterations, t ) };
}

// Same recovery with a sign-indefinite Gaussian M; reported, not graded.
std::string planted_recovery_gaussian()
{
    const SpectralGrid grid;
    synthetic::Random  rng( 12 );
    AlsOptions         opts;
    opts.epsilon        = 1e-26;
    opts.max_iterations = 200000;
    int passed          = 0;
    for ( int t = 0; t < 20; ++t )
    {
        const auto     q     = synthetic::random_camera( grid, rng );
        const Vector   fstar = synthetic::smooth_filter( grid, rng, 0.2, 1.0 ).values();
        const Matrix3  m     = rng.normal_matrix( 3, 3 );
        const MatrixX3 x     = fstar.asDiagonal() * q.values() * m;
        const auto     r     = optimize_luther( q, SensorSet( grid, x ), opts );
        passed += ( r.trace.objective.back() / x.squaredNorm() < 1e-8 &&
                    check_positivity( r ).all_positive )
                      ? 1
                      : 0;
    }
    return fmt( "Gaussian mixing matrix: %d/20 recovered", passed );
}

Outcome identity_signal_equivalence()
{
    const SpectralGrid   grid;
    const auto           x = reference_cmfs( grid );
    synthetic::Random    rng( 13 );
    const ColorSignalSet eye( grid, Matrix::Identity( 31, 31 ) );
    const auto           s = Scenario::single_light( eye, x );
    AlsOptions           opts;
    opts.epsilon        = 1e-20;
    opts.max_iterations = 50000;
    int    passed       = 0;
    double worst        = 0.0;
    for ( int t = 0; t < 10; ++t )
    {
        const auto   q   = synthetic::random_camera( grid, rng );
        const double l   = optimize_luther( q, x, opts ).trace.objective.back();
        const double d   = optimize_data( q, s, FilterCurve::ones( grid ),
                                          ConstraintSpec::unconstrained(), opts )
                             .trace.objective.back();
        const double rel = std::abs( l - d ) / std::max( l, 1e-300 );
        worst            = std::max( worst, rel );
        passed += rel < 1e-8 ? 1 : 0;
    }
    return { passed == 10 ? Status::Pass : Status::Fail,
             fmt( "%d/10 cameras within 1e-8 relative (worst %.1e); eps %.0e, cap %d", passed, worst,
                  opts.epsilon, opts.max_iterations ) };
}

Outcome reference_camera_table( const std::optional<fs::path> &dir )
{
    if ( !dir || !fs::exists( *dir / "canon5dmkii.csv" ) || !fs::exists( *dir / "reflectances.csv" ) )
        return { Status::Skipped, "needs canon5dmkii.csv and reflectances.csv in CHROMAFIT_DATASETS" };
    const auto         t0 = Clock::now();
    const SpectralGrid grid;
    const auto         cam  = load_sensor_set( *dir / "canon5dmkii.csv", grid );
    const auto         refl = std::make_shared<const ReflectanceSet>(
        load_reflectances( *dir / "reflectances.csv", grid ) );
    const auto x   = reference_cmfs( grid );
    const auto d65 = reference_illuminant( "D65", grid );
    const auto a   = reference_illuminant( "A", grid );

    auto mean_de = [&]( const std::optional<FilterCurve> &f, const Spectrum &light ) {
        const std::vector<Spectrum> one{ light };
        return evaluate( cam, f, one, *refl, x ).aggregate.mean;
    };
    const auto luther = optimize_luther( cam, x ).filter;
    const auto data   = optimize_data( cam, Scenario::single_light( color_signal( d65, refl ), x ),
                                       luther, ConstraintSpec::unconstrained() )
                          .filter;

    struct Row
    {
        const char *name;
        double      got;
        double      expect;
    };
    const Row rows[] = { { "NAT D65", mean_de( std::nullopt, d65 ), 1.65 },
                         { "LUTH D65", mean_de( luther, d65 ), 0.46 },
                         { "DATA D65", mean_de( data, d65 ), 0.38 },
                         { "NAT A", mean_de( std::nullopt, a ), 2.30 },
                         { "LUTH A", mean_de( luther, a ), 0.64 } };
    bool               ok = true;
    std::ostringstream detail;
    for ( const auto &r : rows )
    {
        ok = ok && std::abs( r.got - r.expect ) <= 0.15;
        detail << r.name << ' ' << fmt( "%.3f", r.got ) << " (" << r.expect << "); ";
    }
    const double t = seconds_since( t0 );
    ok             = ok && t < 120.0;
    detail << fmt( "tolerance 0.15; %.1f s (limit 120 s)", t );
    return { ok ? Status::Pass : Status::Fail, detail.str() };
}

Outcome camera_sweep( const std::optional<fs::path> &dir )
{
    if ( !dir || !fs::is_directory( *dir / "cameras" ) )
        return { Status::Skipped, "needs a cameras/ directory in CHROMAFIT_DATASETS" };
    const SpectralGrid    grid;
    const auto            x = reference_cmfs( grid );
    std::vector<fs::path> files;
    for ( const auto &e : fs::directory_iterator( *dir / "cameras" ) )
        if ( e.path().extension() == ".csv" )
            files.push_back( e.path() );
    std::sort( files.begin(), files.end() );
    if ( files.empty() )
        return { Status::Skipped, "cameras/ holds no CSV files" };

    double native = 0.0, filtered = 0.0;
    int    improved = 0;
    for ( const auto &f : files )
    {
        const auto r = optimize_luther( load_sensor_set( f, grid ), x );
        native += r.vora_before;
        filtered += r.vora_after;
        improved += r.vora_after > r.vora_before ? 1 : 0;
    }
    const auto n = static_cast<double>( files.size() );
    native /= n;
    filtered /= n;
    const bool ok = improved == static_cast<int>( files.size() ) && std::abs( native - 0.918 ) <= 0.01 &&
                    std::abs( filtered - 0.961 ) <= 0.01;
    return { ok ? Status::Pass : Status::Fail,
             fmt( "%d/%zu cameras improved; mean native %.4f (0.918), filtered %.4f (0.961), "
                  "tolerance 0.01",
                  improved, files.size(), native, filtered ) };
}

// Synthetic stand-in for the reference camera and surface set: a Gaussian
// camera, 300 smooth reflectances, D65, A and Planckian 4000 K / 10000 K.
Outcome multistart_ordering()
{
    const SpectralGrid grid;
    const auto         x   = reference_cmfs( grid );
    const auto         cam = synthetic::gaussian_camera( grid );
    synthetic::Random  rng( 2024 );
    const auto         refl =
        std::make_shared<const ReflectanceSet>( synthetic::smooth_reflectances( grid, 300, rng ) );
    std::vector<ColorSignalSet> signals;
    for ( const auto &light :
          { reference_illuminant( "D65", grid ), reference_illuminant( "A", grid ),
            synthetic::planckian( grid, 4000.0 ), synthetic::planckian( grid, 10000.0 ) } )
        signals.push_back( color_signal( light, refl ) );
    const auto scenario = Scenario::per_light( signals, x );
    const auto cons     = ConstraintSpec::basis_bounded( cosine_basis( grid, 6 ), 0.2, 1.0 );
    const auto eval     = evaluation_data( scenario );

    const auto ones = optimize_data( cam, scenario, FilterCurve::ones( grid ), cons );
    const auto luth =
        optimize_data( cam, scenario, optimize_luther( cam, x ).filter, cons, {}, "luther" );
    const double de_ones   = mean_delta_e( cam, ones.filter, eval, x );
    const double de_luther = mean_delta_e( cam, luth.filter, eval, x );

    MultiStartOptions opts;
    opts.jobs = std::max( 1u, std::thread::hardware_concurrency() );

    const auto t0    = Clock::now();
    const auto seeds = generate_seed_set( *cons.basis, 0.2, 1.0, 500, 1.0, 42 );
    const auto first = multi_start( cam, scenario, cons, seeds, SelectionMetric::MeanDeltaE, opts );
    const double t   = seconds_since( t0 );
    const auto again = multi_start( cam, scenario, cons,
                                    generate_seed_set( *cons.basis, 0.2, 1.0, 500, 1.0, 42 ),
                                    SelectionMetric::MeanDeltaE, opts );

    bool same = first.ranking == again.ranking;
    for ( std::size_t i = 0; same && i < first.outcomes.size(); ++i )
        same = first.outcomes[i].metric == again.outcomes[i].metric &&
               first.outcomes[i].objective == again.outcomes[i].objective;

    const double best = first.best().metric;
    const bool   ok   = best < de_ones && best < de_luther && same && t < 600.0;
    return { ok ? Status::Pass : Status::Fail,
             fmt( "best mean dE %.4f (%s) vs ones %.4f, luther %.4f; %zu/500 seeds ok; "
                  "rerun %s; %.1f s (limit 600 s)",
                  best, first.best().seed_id.c_str(), de_ones, de_luther, first.ranking.size(),
                  same ? "identical" : "DIFFERS", t ) };
}

Outcome guarded( const std::function<Outcome()> &f )
{
    try
    {
        return f();
    }
    catch ( const std::exception &e )
    {
        return { Status::Fail, std::string( "exception: " ) + e.what() };
    }
}

} // namespace

int main()
{
    const auto dir = dataset_dir();

    struct Criterion
    {
        const char             *name;
        std::function<Outcome()> run;
    };
    const Criterion criteria[] = {
        { "property-suite", property_suite },
        { "planted-recovery", planted_recovery },
        { "identity-signal-equivalence", identity_signal_equivalence },
        { "reference-camera-table", [&] { return reference_camera_table( dir ); } },
        { "camera-sweep-vora", [&] { return camera_sweep( dir ); } },
        { "multistart-ordering", multistart_ordering },
    };

    int failures = 0;
    for ( const auto &c : criteria )
    {
        const auto  o   = guarded( c.run );
        const char *tag = o.status == Status::Pass ? "PASS" : o.status == Status::Fail ? "FAIL" : "SKIPPED";
        failures += o.status == Status::Fail ? 1 : 0;
        std::printf( "%-8s %-28s %s\n", tag, c.name, o.detail.c_str() );
        std::fflush( stdout );
        if ( std::string( c.name ) == "planted-recovery" )
        {
            std::printf( "%-8s %-28s %s\n", "INFO", "planted-recovery-gaussian",
                         guarded( [] { return Outcome{ Status::Pass, planted_recovery_gaussian() }; } )
                             .detail.c_str() );
            std::fflush( stdout );
        }
    }
    return failures == 0 ? 0 : 1;
}
