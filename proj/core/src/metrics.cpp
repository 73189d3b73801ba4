// SPDX-License-Identifier: Apache-2.0
// Copyright Contributors to the chromafit Project.

#include <chromafit/metrics.hpp>
#include <chromafit/error.hpp>
#include <chromafit/lls.hpp>

#include <algorithm>
#include <cmath>
#include <numeric>

namespace chromafit
{

double vora_value( const MatrixX3 &q, const MatrixX3 &x )
{
    if ( q.rows() != x.rows() )
        throw InputError( "vora_value: sensor sets have different lengths" );
    SolveOptions strict;
    strict.allow_regularization = false;
    const Matrix qp = pseudoinverse( q, strict ).value;
    const Matrix xp = pseudoinverse( x, strict ).value;
    // Trace(Q Q⁺ X X⁺) = Trace((Q⁺ X)(X⁺ Q)) keeps everything 3x3.
    return ( ( qp * x ) * ( xp * q ) ).trace() / 3.0;
}

double vora_value( const SensorSet &q, const SensorSet &x )
{
    require_same_grid( q.grid(), x.grid(), "vora_value" );
    return vora_value( q.values(), x.values() );
}

namespace
{

double lab_f( double t )
{
    constexpr double delta = 6.0 / 29.0;
    if ( t > delta * delta * delta )
        return std::cbrt( t );
    return t / ( 3.0 * delta * delta ) + 4.0 / 29.0;
}

} // namespace

LabColor xyz_to_lab( const Vector3 &xyz, const Vector3 &white )
{
    if ( !( white.array() > 0.0 ).all() )
        throw InputError( "xyz_to_lab: white point must be positive" );
    const double fx = lab_f( xyz( 0 ) / white( 0 ) );
    const double fy = lab_f( xyz( 1 ) / white( 1 ) );
    const double fz = lab_f( xyz( 2 ) / white( 2 ) );
    return { 116.0 * fy - 16.0, 500.0 * ( fx - fy ), 200.0 * ( fy - fz ), white };
}

double delta_e( const LabColor &a, const LabColor &b )
{
    const double scale = std::max( a.white.cwiseAbs().maxCoeff(), 1.0 );
    if ( ( a.white - b.white ).cwiseAbs().maxCoeff() > 1e-12 * scale )
        throw InputError( "delta_e: colours have different white points" );
    return std::sqrt(
        ( a.l - b.l ) * ( a.l - b.l ) + ( a.a - b.a ) * ( a.a - b.a ) +
        ( a.b - b.b ) * ( a.b - b.b ) );
}

double percentile( std::span<const double> sorted, double q )
{
    if ( sorted.empty() )
        throw InputError( "percentile of an empty sample" );
    const double pos = q * static_cast<double>( sorted.size() - 1 );
    const auto   lo  = static_cast<std::size_t>( std::floor( pos ) );
    const auto   hi  = std::min( lo + 1, sorted.size() - 1 );
    const double t   = pos - static_cast<double>( lo );
    return sorted[lo] + t * ( sorted[hi] - sorted[lo] );
}

ErrorStats summarize( std::vector<double> errors )
{
    if ( errors.empty() )
        throw InputError( "summarize: no samples" );
    std::sort( errors.begin(), errors.end() );
    ErrorStats s;
    s.mean = std::accumulate( errors.begin(), errors.end(), 0.0 ) /
             static_cast<double>( errors.size() );
    s.median = percentile( errors, 0.50 );
    s.p90    = percentile( errors, 0.90 );
    s.p95    = percentile( errors, 0.95 );
    s.p99    = percentile( errors, 0.99 );
    s.max    = errors.back();
    return s;
}

IlluminantEvaluation evaluate_correction(
    const MatrixX3 &rgb, const MatrixX3 &xyz, const Vector3 &white, std::string name )
{
    if ( rgb.rows() != xyz.rows() )
        throw InputError( "evaluate: response and ground-truth counts differ" );
    SolveOptions strict;
    strict.allow_regularization = false;
    const auto     fit  = fit_linear_map( rgb, xyz, strict );
    const MatrixX3 pred = rgb * fit.map.matrix();

    IlluminantEvaluation out;
    out.illuminant = std::move( name );
    out.map        = fit.map;
    out.delta_e.resize( static_cast<std::size_t>( rgb.rows() ) );
    for ( Eigen::Index i = 0; i < rgb.rows(); ++i )
    {
        const auto truth = xyz_to_lab( xyz.row( i ).transpose(), white );
        const auto guess = xyz_to_lab( pred.row( i ).transpose(), white );
        out.delta_e[static_cast<std::size_t>( i )] = delta_e( truth, guess );
    }
    out.stats = summarize( out.delta_e );
    return out;
}

Evaluation evaluate(
    const SensorSet                  &camera,
    const std::optional<FilterCurve> &filter,
    std::span<const Spectrum>         illuminants,
    const ReflectanceSet             &reflectances,
    const SensorSet                  &cmfs )
{
    if ( illuminants.empty() )
        throw InputError( "evaluate: no illuminants" );
    require_same_grid( camera.grid(), cmfs.grid(), "evaluate" );
    require_same_grid( camera.grid(), reflectances.grid(), "evaluate" );
    const SensorSet effective = filter ? apply_filter( camera, *filter ) : camera;

    Evaluation out;
    for ( const auto &illuminant : illuminants )
    {
        require_same_grid( camera.grid(), illuminant.grid(), "evaluate" );
        const Matrix   c     = illuminant.values().asDiagonal() * reflectances.values();
        const MatrixX3 xyz   = c.transpose() * cmfs.values();
        const MatrixX3 rgb   = c.transpose() * effective.values();
        const Vector3  white = cmfs.values().transpose() * illuminant.values();
        out.per_illuminant.push_back(
            evaluate_correction( rgb, xyz, white, illuminant.name() ) );
    }

    const double k = static_cast<double>( out.per_illuminant.size() );
    for ( const auto &e : out.per_illuminant )
    {
        out.aggregate.mean += e.stats.mean / k;
        out.aggregate.median += e.stats.median / k;
        out.aggregate.p90 += e.stats.p90 / k;
        out.aggregate.p95 += e.stats.p95 / k;
        out.aggregate.p99 += e.stats.p99 / k;
        out.aggregate.max += e.stats.max / k;
    }
    return out;
}

} // namespace chromafit
