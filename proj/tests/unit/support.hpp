// SPDX-License-Identifier: Apache-2.0
// Copyright Contributors to the chromafit Project.

#pragma once

#include <chromafit/spectral.hpp>
#include <chromafit/synthetic.hpp>

#include <gtest/gtest.h>

namespace chromafit::testing
{

inline SpectralGrid small_grid( std::size_t n )
{
    return SpectralGrid::uniform( 400.0, 400.0 + 10.0 * static_cast<double>( n - 1 ), 10.0 );
}

/// Largest absolute entry of a - b.
template <typename A, typename B> double max_abs_diff( const A &a, const B &b )
{
    return ( a - b ).cwiseAbs().maxCoeff();
}

inline MatrixX3 random_positive( Eigen::Index rows, synthetic::Random &rng )
{
    MatrixX3 m( rows, 3 );
    for ( Eigen::Index i = 0; i < rows; ++i )
        for ( int k = 0; k < 3; ++k )
            m( i, k ) = rng.uniform( 0.05, 1.0 );
    return m;
}

} // namespace chromafit::testing
