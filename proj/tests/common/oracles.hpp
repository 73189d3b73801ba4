// SPDX-License-Identifier: Apache-2.0
// Copyright Contributors to the chromafit Project.

#pragma once

// Independent checks shared by the unit and acceptance suites.

#include <chromafit/constrained.hpp>

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>

namespace chromafit::oracle
{

struct KktResiduals
{
    double stationarity    = 0.0; ///< ‖∇f − Gᵀ(λL − λU)‖∞ / scale
    double primal          = 0.0; ///< largest bound violation
    double dual            = 0.0; ///< most negative multiplier
    double complementarity = 0.0; ///< max |λ · slack| / scale
};

/// KKT residuals of a QP solution under  ∇f = Gᵀ(λL − λU).
inline KktResiduals kkt(
    const LeastSquaresObjective &obj, const BoxLinearConstraints &cons, const QpSolution &s )
{
    KktResiduals r;
    const Vector grad  = obj.gradient( s.x );
    const double scale = std::max( 1.0, grad.cwiseAbs().maxCoeff() );
    const Vector resid = grad - cons.rows.transpose() * ( s.lower_multipliers - s.upper_multipliers );
    r.stationarity     = resid.cwiseAbs().maxCoeff() / scale;
    r.primal           = cons.violation( s.x );
    r.dual = std::max( 0.0, -std::min( s.lower_multipliers.minCoeff(), s.upper_multipliers.minCoeff() ) );
    const Vector gx = cons.rows * s.x;
    for ( Eigen::Index i = 0; i < gx.size(); ++i )
    {
        if ( std::isfinite( cons.lower( i ) ) )
            r.complementarity = std::max(
                r.complementarity, std::abs( s.lower_multipliers( i ) * ( gx( i ) - cons.lower( i ) ) ) / scale );
        if ( std::isfinite( cons.upper( i ) ) )
            r.complementarity = std::max(
                r.complementarity, std::abs( s.upper_multipliers( i ) * ( cons.upper( i ) - gx( i ) ) ) / scale );
    }
    return r;
}

/// Minimum of f over the lattice lo + k * step inside [lo, hi] (all
/// dimensions), visited exhaustively.
inline double grid_minimum(
    const Vector &lo, const Vector &hi, double step, const std::function<double( const Vector & )> &f )
{
    const auto       n = lo.size();
    std::vector<int> count( static_cast<std::size_t>( n ) ), idx( static_cast<std::size_t>( n ), 0 );
    for ( Eigen::Index d = 0; d < n; ++d )
        count[static_cast<std::size_t>( d )] =
            static_cast<int>( std::floor( ( hi( d ) - lo( d ) ) / step + 1e-9 ) ) + 1;
    double best = std::numeric_limits<double>::infinity();
    Vector x    = lo;
    while ( true )
    {
        best = std::min( best, f( x ) );
        Eigen::Index d = 0;
        for ( ; d < n; ++d )
        {
            auto &i = idx[static_cast<std::size_t>( d )];
            if ( ++i < count[static_cast<std::size_t>( d )] )
            {
                x( d ) = lo( d ) + i * step;
                break;
            }
            i      = 0;
            x( d ) = lo( d );
        }
        if ( d == n )
            break;
    }
    return best;
}

} // namespace chromafit::oracle
