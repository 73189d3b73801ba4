// SPDX-License-Identifier: Apache-2.0
// Copyright Contributors to the chromafit Project.

#include <chromafit/data_opt.hpp>
#include <chromafit/constrained.hpp>
#include <chromafit/error.hpp>
#include <chromafit/lls.hpp>

#include <cmath>
#include <limits>
#include <sstream>

namespace chromafit
{

namespace
{

constexpr double kAccumulatedFloor = 1e-12;

void check_signals(
    const std::vector<ColorSignalSet> &signals, const SensorSet &cmfs )
{
    if ( signals.empty() )
        throw InputError( "scenario: at least one colour signal set is required" );
    for ( const auto &c : signals )
        require_same_grid( c.grid(), cmfs.grid(), "scenario" );
}

} // namespace

Scenario::Scenario(
    TargetMode mode, std::vector<ColorSignalSet> signals,
    std::optional<ColorSignalSet> target, SensorSet cmfs )
    : _mode( mode )
    , _signals( std::move( signals ) )
    , _target( std::move( target ) )
    , _cmfs( std::move( cmfs ) )
{}

Scenario Scenario::per_light( std::vector<ColorSignalSet> signals, SensorSet cmfs )
{
    check_signals( signals, cmfs );
    return Scenario( TargetMode::PerLight, std::move( signals ), std::nullopt, std::move( cmfs ) );
}

Scenario Scenario::fixed_target(
    std::vector<ColorSignalSet> signals, ColorSignalSet target, SensorSet cmfs )
{
    check_signals( signals, cmfs );
    require_same_grid( target.grid(), cmfs.grid(), "scenario target" );
    for ( std::size_t j = 0; j < signals.size(); ++j )
    {
        if ( signals[j].count() != target.count() )
        {
            std::ostringstream msg;
            msg << "scenario: signal set " << j << " has " << signals[j].count()
                << " surfaces but the target set has " << target.count()
                << "; a fixed target needs the same surfaces under every light";
            throw InputError( msg.str() );
        }
    }
    return Scenario(
        TargetMode::FixedTarget, std::move( signals ), std::move( target ), std::move( cmfs ) );
}

Scenario Scenario::single_light( ColorSignalSet signal, SensorSet cmfs )
{
    std::vector<ColorSignalSet> signals;
    signals.push_back( std::move( signal ) );
    check_signals( signals, cmfs );
    return Scenario( TargetMode::SingleLight, std::move( signals ), std::nullopt, std::move( cmfs ) );
}

const ColorSignalSet &Scenario::target_for( std::size_t j ) const
{
    if ( j >= _signals.size() )
        throw InputError( "scenario: signal set index out of range" );
    return _mode == TargetMode::FixedTarget ? *_target : _signals[j];
}

MatrixX3 Scenario::target_tristimuli( std::size_t j ) const
{
    return target_for( j ).values().transpose() * _cmfs.values();
}

ConstraintSpec ConstraintSpec::unconstrained()
{
    return {};
}

ConstraintSpec ConstraintSpec::positive_only( double f_min )
{
    ConstraintSpec s;
    s.mode  = ConstraintMode::PositiveOnly;
    s.f_min = f_min;
    s.f_max = std::numeric_limits<double>::infinity();
    return s;
}

ConstraintSpec
ConstraintSpec::basis_bounded( BasisMatrix basis, double f_min, double f_max )
{
    ConstraintSpec s;
    s.mode  = ConstraintMode::BasisBounded;
    s.basis = std::move( basis );
    s.f_min = f_min;
    s.f_max = f_max;
    return s;
}

void ConstraintSpec::validate( const SpectralGrid &grid ) const
{
    if ( mode == ConstraintMode::Unconstrained )
        return;
    if ( std::isnan( f_min ) || std::isnan( f_max ) )
        throw InputError( "constraints: NaN transmittance bound" );
    if ( f_min > f_max )
    {
        std::ostringstream msg;
        msg << "infeasible transmittance bounds: f_min " << f_min << " > f_max " << f_max;
        throw InfeasibleError( msg.str() );
    }
    if ( mode == ConstraintMode::PositiveOnly )
        return;
    if ( !( f_min < f_max ) )
        throw InputError( "constraints: basis-bounded mode needs f_min < f_max" );
    if ( !basis )
        throw InputError( "constraints: basis-bounded mode needs a basis" );
    if ( !( basis->grid == grid ) ||
         basis->columns.rows() != static_cast<Eigen::Index>( grid.size() ) )
        throw InputError( "constraints: basis grid does not match the camera grid" );
    if ( f_min < 0.0 )
        throw InputError( "constraints: f_min must be non-negative for a transmittance" );
}

FilterCurve feasible_seed(
    const FilterCurve &seed, const ConstraintSpec &constraints, bool *projected )
{
    constraints.validate( seed.grid() );
    const Vector &s     = seed.values();
    Vector        out   = s;
    switch ( constraints.mode )
    {
        case ConstraintMode::Unconstrained:
            break;
        case ConstraintMode::PositiveOnly:
            out = s.cwiseMax( constraints.positive_lower_bound() );
            break;
        case ConstraintMode::BasisBounded:
        {
            const Matrix &b    = constraints.basis->columns;
            const auto    cons = BoxLinearConstraints::uniform(
                b, constraints.f_min, constraints.f_max );
            QpOptions opts;
            opts.start = constraints.basis->coefficients( s );
            out        = b * solve_qp( b, s, cons, opts ).x;
            break;
        }
    }
    const double moved = ( out - s ).lpNorm<Eigen::Infinity>();
    if ( projected )
        *projected = moved > 1e-9 * std::max( 1.0, s.lpNorm<Eigen::Infinity>() );
    return FilterCurve( seed.grid(), out );
}

double objective(
    const SensorSet                     &camera,
    const Scenario                      &scenario,
    const FilterCurve                   &filter,
    const std::vector<CorrectionMatrix> &maps )
{
    require_same_grid( camera.grid(), scenario.grid(), "objective" );
    require_same_grid( filter.grid(), scenario.grid(), "objective" );
    if ( maps.size() != scenario.count() )
        throw InputError( "objective: one correction matrix per signal set is required" );
    const MatrixX3 q = filter.values().asDiagonal() * camera.values();
    double         total = 0.0;
    for ( std::size_t j = 0; j < scenario.count(); ++j )
    {
        const MatrixX3 fitted =
            scenario.signals()[j].values().transpose() * ( q * maps[j].matrix() );
        total += ( fitted - scenario.target_tristimuli( j ) ).squaredNorm();
    }
    return total;
}

DataResult optimize_data(
    const SensorSet      &camera,
    const Scenario       &scenario,
    const FilterCurve    &seed,
    const ConstraintSpec &constraints,
    const AlsOptions     &options,
    std::string           seed_id )
{
    require_same_grid( camera.grid(), scenario.grid(), "optimize_data" );
    require_same_grid( seed.grid(), scenario.grid(), "optimize_data seed" );
    if ( !( options.epsilon > 0.0 ) )
        throw InputError( "optimize_data: epsilon must be positive" );
    if ( options.max_iterations < 1 )
        throw InputError( "optimize_data: max_iterations must be >= 1" );
    constraints.validate( scenario.grid() );
    if ( !seed.values().allFinite() )
        throw InputError( "optimize_data: seed '" + seed_id + "' has non-finite entries" );

    const auto   cnt  = scenario.count();
    const auto   grid = scenario.grid();
    const auto   wl   = static_cast<Eigen::Index>( grid.size() );
    const bool   basis_mode = constraints.mode == ConstraintMode::BasisBounded;

    std::vector<Matrix>       signals( cnt );
    std::vector<MatrixX3>     targets( cnt );
    std::vector<SignalFactor> factors( cnt );
    for ( std::size_t j = 0; j < cnt; ++j )
    {
        signals[j] = scenario.signals()[j].values();
        targets[j] = scenario.target_tristimuli( j );
        factors[j] = factor_signals( signals[j], targets[j] );
    }

    DataResult result{ seed, {}, {}, std::move( seed_id ), false, false };
    result.trace.epsilon = options.epsilon;

    Vector acc = feasible_seed( seed, constraints, &result.seed_projected ).values();
    Vector coef;
    BoxLinearConstraints basis_cons;
    if ( basis_mode )
    {
        const Matrix &b = constraints.basis->columns;
        basis_cons =
            BoxLinearConstraints::uniform( b, constraints.f_min, constraints.f_max );
        coef = constraints.basis->coefficients( acc );
        acc  = b * coef;
    }

    std::vector<MatrixX3> current( cnt, MatrixX3( acc.asDiagonal() * camera.values() ) );
    std::vector<Matrix3>  step_maps( cnt, Matrix3::Identity() );
    std::vector<Matrix3>  total_maps( cnt, Matrix3::Identity() );

    auto guard = [&]( int iteration ) {
        Eigen::Index at = 0;
        if ( acc.cwiseAbs().minCoeff( &at ) < kAccumulatedFloor )
        {
            std::ostringstream msg;
            msg << "optimize_data: accumulated filter reached " << acc( at ) << " at "
                << grid[static_cast<std::size_t>( at )] << " nm (iteration " << iteration
                << ", seed '" << result.seed_id
                << "'); the evolving basis needs a strictly positive filter, "
                   "raise f_min above zero";
            throw NumericalError( msg.str() );
        }
    };
    if ( basis_mode )
        guard( 0 );

    for ( int i = 1; i <= options.max_iterations; ++i )
    {
        // Maps first, against the previous iterate.
        for ( std::size_t j = 0; j < cnt; ++j )
        {
            const MatrixX3 rgb = signals[j].transpose() * current[j];
            const auto     fit = fit_linear_map( rgb, targets[j] );
            step_maps[j]       = fit.map.matrix();
            result.regularized = result.regularized || fit.regularized;
        }

        // The filter step works on the square-root system, which keeps the
        // conditioning of V instead of squaring it.
        const auto system = compressed_filter_system( factors, current, step_maps );
        Vector     step;
        switch ( constraints.mode )
        {
            case ConstraintMode::Unconstrained:
            {
                const auto solve   = solve_filter_unconstrained( system );
                step               = solve.filter;
                result.regularized = result.regularized || solve.regularized;
                break;
            }
            case ConstraintMode::PositiveOnly:
            {
                // acc ⊙ f^i >= floor, written on f^i.
                BoxLinearConstraints cons{
                    Matrix::Identity( wl, wl ),
                    Vector::Constant( wl, constraints.positive_lower_bound() )
                        .cwiseQuotient( acc ),
                    Vector::Constant( wl, std::numeric_limits<double>::infinity() ) };
                QpOptions opts;
                opts.start = Vector::Ones( wl );
                step       = solve_qp( system.design, system.target, cons, opts ).x;
                break;
            }
            case ConstraintMode::BasisBounded:
            {
                // f^i = diag(acc)⁻¹ B c, so the bounds act on the product B c.
                const Matrix t = acc.cwiseInverse().asDiagonal() * constraints.basis->columns;
                QpOptions    opts;
                opts.start = coef;
                coef       = solve_qp( Matrix( system.design * t ), system.target, basis_cons, opts ).x;
                step       = t * coef;
                break;
            }
        }

        double change = 0.0;
        for ( std::size_t j = 0; j < cnt; ++j )
        {
            const MatrixX3 next = step.asDiagonal() * current[j] * step_maps[j];
            change              = std::max( change, ( next - current[j] ).squaredNorm() );
            current[j]          = next;
            total_maps[j]       = total_maps[j] * step_maps[j];
        }
        acc = basis_mode ? Vector( constraints.basis->columns * coef )
                         : Vector( acc.cwiseProduct( step ) );

        double obj    = 0.0;
        bool   finite = acc.allFinite();
        for ( std::size_t j = 0; j < cnt && finite; ++j )
        {
            finite = current[j].allFinite();
            obj += ( signals[j].transpose() * current[j] - targets[j] ).squaredNorm();
        }
        if ( !finite || !std::isfinite( obj ) )
        {
            std::ostringstream msg;
            msg << "optimize_data: non-finite iterate at iteration " << i << " (seed '"
                << result.seed_id << "')";
            throw NumericalError( msg.str() );
        }

        result.trace.objective.push_back( obj );
        result.trace.step_change.push_back( change );
        result.trace.iterations = i;
        if ( basis_mode )
            guard( i );
        if ( change < options.epsilon )
        {
            result.trace.converged = true;
            break;
        }
    }

    result.filter = FilterCurve( grid, acc );
    result.maps.reserve( cnt );
    for ( const auto &m : total_maps )
        result.maps.emplace_back( m );
    return result;
}

} // namespace chromafit
