// SPDX-License-Identifier: Apache-2.0
// Copyright Contributors to the chromafit Project.

#pragma once

#include <chromafit/spectral.hpp>

namespace chromafit
{

/// N x m smoothness basis; column k is the k-th basis function on the grid.
struct BasisMatrix
{
    SpectralGrid grid;
    Matrix       columns;

    Eigen::Index terms() const noexcept { return columns.cols(); }

    /// Coefficients c minimizing ‖B c − f‖².
    Vector coefficients( const Vector &f ) const;
    /// Orthogonal projection of f onto span(B).
    Vector project( const Vector &f ) const;
};

/// First m terms of the DCT-II family, unnormalized:
///   B(i, k) = cos(pi k (i + 1/2) / N),  i = 0..N-1, k = 0..m-1.
/// Column 0 is all ones.
BasisMatrix cosine_basis( const SpectralGrid &grid, int terms );

} // namespace chromafit
