// SPDX-License-Identifier: Apache-2.0
// Copyright Contributors to the chromafit Project.

#include <chromafit/basis.hpp>
#include <chromafit/error.hpp>

#include <cmath>
#include <numbers>
#include <string>

namespace chromafit
{

BasisMatrix cosine_basis( const SpectralGrid &grid, int terms )
{
    const auto n = static_cast<Eigen::Index>( grid.size() );
    if ( terms < 1 || terms > n )
        throw InputError(
            "cosine basis needs 1 <= m <= " + std::to_string( n ) + ", got " +
            std::to_string( terms ) );

    Matrix b( n, terms );
    for ( Eigen::Index k = 0; k < terms; ++k )
        for ( Eigen::Index i = 0; i < n; ++i )
            b( i, k ) = std::cos(
                std::numbers::pi * static_cast<double>( k ) *
                ( static_cast<double>( i ) + 0.5 ) / static_cast<double>( n ) );
    return { grid, std::move( b ) };
}

Vector BasisMatrix::coefficients( const Vector &f ) const
{
    if ( f.size() != columns.rows() )
        throw InputError( "basis coefficients: vector length does not match the grid" );
    return columns.householderQr().solve( f );
}

Vector BasisMatrix::project( const Vector &f ) const
{
    return columns * coefficients( f );
}

} // namespace chromafit
