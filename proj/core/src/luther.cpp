// SPDX-License-Identifier: Apache-2.0
// Copyright Contributors to the chromafit Project.

#include <chromafit/luther.hpp>
#include <chromafit/error.hpp>
#include <chromafit/lls.hpp>
#include <chromafit/metrics.hpp>

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

namespace chromafit
{

LutherResult
optimize_luther( const SensorSet &camera, const SensorSet &cmfs, const AlsOptions &options )
{
    require_same_grid( camera.grid(), cmfs.grid(), "optimize_luther" );
    if ( !( options.epsilon > 0.0 ) )
        throw InputError( "optimize_luther: epsilon must be positive" );
    if ( options.max_iterations < 1 )
        throw InputError( "optimize_luther: max_iterations must be >= 1" );

    const MatrixX3 &x = cmfs.values();
    MatrixX3        current = camera.values();
    Vector          filter  = Vector::Ones( current.rows() );
    Matrix3         map     = Matrix3::Identity();
    std::set<std::size_t> zero_rows;

    LutherResult result{
        FilterCurve::ones( camera.grid() ), CorrectionMatrix(), {}, 0.0, 0.0, {} };
    result.trace.epsilon = options.epsilon;

    for ( int i = 1; i <= options.max_iterations; ++i )
    {
        const auto rows = fit_row_scalars( current, x );
        zero_rows.insert( rows.zero_rows.begin(), rows.zero_rows.end() );
        const MatrixX3 filtered = rows.scalars.asDiagonal() * current;
        const auto     fit      = fit_linear_map( filtered, x );
        const MatrixX3 next     = filtered * fit.map.matrix();

        if ( !next.allFinite() )
        {
            std::ostringstream msg;
            msg << "optimize_luther: non-finite iterate at iteration " << i;
            throw NumericalError( msg.str() );
        }

        filter = filter.cwiseProduct( rows.scalars );
        map    = map * fit.map.matrix();

        const double change = ( next - current ).squaredNorm();
        current             = next;
        result.trace.objective.push_back( ( current - x ).squaredNorm() );
        result.trace.step_change.push_back( change );
        result.trace.iterations = i;
        if ( change < options.epsilon )
        {
            result.trace.converged = true;
            break;
        }
    }

    // Canonical scale: the filter entry of largest magnitude becomes 1.
    Eigen::Index peak = 0;
    filter.cwiseAbs().maxCoeff( &peak );
    const double scale = filter( peak );
    if ( scale == 0.0 )
        throw NumericalError( "optimize_luther: the filter collapsed to zero" );
    filter /= scale;
    map *= scale;

    result.filter      = FilterCurve( camera.grid(), filter );
    result.map         = CorrectionMatrix( map );
    result.vora_before = vora_value( camera, cmfs );
    result.vora_after  = vora_value( apply_filter( camera, result.filter ), cmfs );
    result.zero_rows.assign( zero_rows.begin(), zero_rows.end() );
    return result;
}

double luther_objective(
    const SensorSet &camera, const SensorSet &cmfs, const FilterCurve &filter,
    const CorrectionMatrix &map )
{
    require_same_grid( camera.grid(), cmfs.grid(), "luther_objective" );
    require_same_grid( camera.grid(), filter.grid(), "luther_objective" );
    return ( filter.values().asDiagonal() * camera.values() * map.matrix() -
             cmfs.values() )
        .squaredNorm();
}

PositivityReport check_positivity( const FilterCurve &filter )
{
    PositivityReport report;
    const Vector    &f = filter.values();
    Eigen::Index     at = 0;
    report.min_value      = f.minCoeff( &at );
    report.min_wavelength = filter.grid()[static_cast<std::size_t>( at )];
    for ( Eigen::Index i = 0; i < f.size(); ++i )
        if ( !( f( i ) > 0.0 ) )
            report.nonpositive.push_back( static_cast<std::size_t>( i ) );
    report.all_positive = report.nonpositive.empty();
    return report;
}

PositivityReport check_positivity( const LutherResult &result )
{
    return check_positivity( result.filter );
}

} // namespace chromafit
