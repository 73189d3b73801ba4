// SPDX-License-Identifier: Apache-2.0
// Copyright Contributors to the chromafit Project.

#include <chromafit/seeding.hpp>
#include <chromafit/constrained.hpp>
#include <chromafit/error.hpp>
#include <chromafit/metrics.hpp>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>
#include <thread>

namespace chromafit
{

namespace
{

// Uniform on [0, 1) from the top 53 bits; the same on every platform,
// unlike std::uniform_real_distribution.
double unit_uniform( std::mt19937_64 &rng )
{
    return static_cast<double>( rng() >> 11 ) * 0x1.0p-53;
}

std::string seed_label( std::size_t index )
{
    std::ostringstream s;
    s << "sample-" << index;
    return s.str();
}

} // namespace

double angle_degrees( const Vector &f, const Vector &q )
{
    if ( f.size() != q.size() )
        throw InputError( "angle: vectors differ in length" );
    const double nf = f.norm();
    const double nq = q.norm();
    if ( !( nf > 0.0 ) || !( nq > 0.0 ) )
        throw InputError( "angle: zero vector" );
    // 2 atan2(|u - v|, |u + v|) stays accurate near 0 and 180 degrees.
    const Vector u = f / nf;
    const Vector v = q / nq;
    const double rad = 2.0 * std::atan2( ( u - v ).norm(), ( u + v ).norm() );
    return rad * 180.0 / std::numbers::pi;
}

double angle_degrees( const FilterCurve &f, const FilterCurve &q )
{
    return angle_degrees( f.values(), q.values() );
}

SeedSet generate_seed_set(
    const BasisMatrix &basis,
    double             f_min,
    double             f_max,
    std::size_t        count,
    double             theta_deg,
    std::uint64_t      rng_seed,
    const SeedOptions &options )
{
    if ( count < 1 )
        throw InputError( "generate_seed_set: count must be at least 1" );
    if ( std::isnan( theta_deg ) )
        throw InputError( "generate_seed_set: theta is NaN" );

    const auto m = basis.terms();
    SeedSet    set{ {}, basis, f_min, f_max, theta_deg, rng_seed,
                 Vector( m ), Vector( m ), 0 };
    for ( Eigen::Index k = 0; k < m; ++k )
    {
        const auto idx = static_cast<std::size_t>( k );
        set.c_min( k ) = coefficient_extreme( basis.columns, f_min, f_max, idx, Sense::Minimize );
        set.c_max( k ) = coefficient_extreme( basis.columns, f_min, f_max, idx, Sense::Maximize );
    }

    std::mt19937_64     rng( rng_seed );
    std::vector<Vector> kept;  // unit vectors of accepted filters
    const double        cos_theta =
        theta_deg > 0.0 ? std::cos( theta_deg * std::numbers::pi / 180.0 ) : -2.0;
    std::size_t rejected = 0;
    Vector      c( m );

    while ( set.filters.size() < count )
    {
        for ( Eigen::Index k = 0; k < m; ++k )
            c( k ) = set.c_min( k ) + ( set.c_max( k ) - set.c_min( k ) ) * unit_uniform( rng );
        ++set.samples_drawn;
        const Vector f = basis.columns * c;

        bool accept = f.minCoeff() >= f_min && f.maxCoeff() <= f_max && f.norm() > 0.0;
        if ( accept && theta_deg > 0.0 )
        {
            const Vector u = f.normalized();
            for ( const auto &v : kept )
            {
                // Cheap cosine screen, exact angle near the threshold.
                const double cs = u.dot( v );
                if ( cs < cos_theta - 1e-9 )
                    continue;
                if ( cs > cos_theta + 1e-9 || !( angle_degrees( u, v ) > theta_deg ) )
                {
                    accept = false;
                    break;
                }
            }
        }

        if ( !accept )
        {
            if ( ++rejected >= options.stall_limit )
            {
                std::ostringstream msg;
                msg << "seed generation stalled: " << rejected
                    << " consecutive samples rejected with " << set.filters.size() << " of "
                    << count << " filters accepted; lower theta (" << theta_deg
                    << " deg) or the count, or widen [f_min, f_max]";
                throw NumericalError( msg.str() );
            }
            continue;
        }
        rejected = 0;
        kept.push_back( f.normalized() );
        set.filters.emplace_back( basis.grid, f );
    }
    return set;
}

std::vector<double> nearest_neighbour_angles( const std::vector<FilterCurve> &filters )
{
    const auto          n = filters.size();
    std::vector<double> nearest( n, std::numeric_limits<double>::infinity() );
    for ( std::size_t i = 0; i < n; ++i )
        for ( std::size_t j = i + 1; j < n; ++j )
        {
            const double a = angle_degrees( filters[i], filters[j] );
            nearest[i]     = std::min( nearest[i], a );
            nearest[j]     = std::min( nearest[j], a );
        }
    return nearest;
}

SeedDiagnostics diagnose( const SeedSet &seeds )
{
    SeedDiagnostics d;
    if ( seeds.size() < 2 )
        return d;
    const auto nn = nearest_neighbour_angles( seeds.filters );
    double     sum = 0.0;
    d.min_nearest  = nn.front();
    for ( double a : nn )
    {
        sum += a;
        d.max_nearest = std::max( d.max_nearest, a );
        d.min_nearest = std::min( d.min_nearest, a );
    }
    d.mean_nearest = sum / static_cast<double>( nn.size() );
    return d;
}

double mean_delta_e(
    const SensorSet      &camera,
    const FilterCurve    &filter,
    const EvaluationData &data,
    const SensorSet      &cmfs )
{
    if ( !data.reflectances )
        throw InputError( "mean_delta_e: evaluation data has no reflectances" );
    return evaluate( camera, filter, data.illuminants, *data.reflectances, cmfs ).aggregate.mean;
}

EvaluationData evaluation_data( const Scenario &scenario )
{
    EvaluationData data;
    for ( const auto &c : scenario.signals() )
    {
        if ( !c.illuminant() || !c.reflectances() )
            throw InputError(
                "mean-ΔE selection needs colour signals built from an illuminant and "
                "reflectances, or explicit evaluation data" );
        if ( !data.reflectances )
            data.reflectances = c.reflectances();
        else if ( data.reflectances != c.reflectances() &&
                  data.reflectances->values() != c.reflectances()->values() )
            throw InputError( "mean-ΔE selection: signal sets use different reflectances" );
        data.illuminants.push_back( *c.illuminant() );
    }
    return data;
}

const SeedOutcome &MultiStartResult::best() const
{
    if ( ranking.empty() )
        throw NumericalError( "multi-start: every seed failed" );
    return outcomes[ranking.front()];
}

MultiStartResult multi_start(
    const SensorSet                &camera,
    const Scenario                 &scenario,
    const ConstraintSpec           &constraints,
    const std::vector<FilterCurve> &seeds,
    SelectionMetric                 metric,
    const MultiStartOptions        &options,
    std::vector<std::string>        seed_ids )
{
    if ( seeds.empty() )
        throw InputError( "multi_start: no seeds" );
    if ( !seed_ids.empty() && seed_ids.size() != seeds.size() )
        throw InputError( "multi_start: one id per seed is required" );
    if ( seed_ids.empty() )
        for ( std::size_t i = 0; i < seeds.size(); ++i )
            seed_ids.push_back( seed_label( i ) );

    std::optional<EvaluationData> eval;
    if ( metric == SelectionMetric::MeanDeltaE )
        eval = options.evaluation ? *options.evaluation : evaluation_data( scenario );

    MultiStartResult out;
    out.metric = metric;
    out.outcomes.resize( seeds.size() );

    std::atomic<std::size_t> next{ 0 };
    auto                     worker = [&]() {
        for ( std::size_t i = next++; i < seeds.size(); i = next++ )
        {
            auto &o   = out.outcomes[i];
            o.index   = i;
            o.seed_id = seed_ids[i];
            try
            {
                o.result = optimize_data(
                    camera, scenario, seeds[i], constraints, options.als, seed_ids[i] );
                o.objective = o.result->trace.objective.empty()
                                  ? objective( camera, scenario, o.result->filter,
                                               o.result->maps )
                                  : o.result->trace.objective.back();
                o.metric = metric == SelectionMetric::Objective
                               ? o.objective
                               : mean_delta_e( camera, o.result->filter, *eval,
                                               scenario.cmfs() );
            }
            catch ( const std::exception &e )
            {
                o.result.reset();
                o.error = e.what();
            }
        }
    };

    const unsigned jobs = std::max(
        1u, std::min<unsigned>( options.jobs, static_cast<unsigned>( seeds.size() ) ) );
    if ( jobs == 1 )
        worker();
    else
    {
        std::vector<std::thread> pool;
        for ( unsigned t = 0; t < jobs; ++t )
            pool.emplace_back( worker );
        for ( auto &t : pool )
            t.join();
    }

    for ( const auto &o : out.outcomes )
        if ( o.result && std::isfinite( o.metric ) )
            out.ranking.push_back( o.index );
    std::stable_sort( out.ranking.begin(), out.ranking.end(), [&]( auto a, auto b ) {
        return out.outcomes[a].metric < out.outcomes[b].metric;
    } );
    return out;
}

MultiStartResult multi_start(
    const SensorSet         &camera,
    const Scenario          &scenario,
    const ConstraintSpec    &constraints,
    const SeedSet           &seeds,
    SelectionMetric          metric,
    const MultiStartOptions &options )
{
    return multi_start( camera, scenario, constraints, seeds.filters, metric, options );
}

} // namespace chromafit
