// SPDX-License-Identifier: Apache-2.0
// Copyright Contributors to the chromafit Project.

#pragma once

#include <chromafit/spectral.hpp>

#include <cstdint>
#include <random>

namespace chromafit::synthetic
{

//	Reproducible synthetic spectral data for tests, benchmarks and demos.
//	All draws go through `Random`, whose output depends only on the seed.

class Random
{
public:
    explicit Random( std::uint64_t seed ) : _engine( seed ) {}

    /// Uniform on [0, 1).
    double uniform();
    double uniform( double lo, double hi ) { return lo + ( hi - lo ) * uniform(); }
    /// Standard normal (Box-Muller).
    double normal();
    Matrix normal_matrix( Eigen::Index rows, Eigen::Index cols );

private:
    std::mt19937_64 _engine;
};

/// RGB camera with Gaussian channels, peaks and widths in nm (R, G, B).
SensorSet gaussian_camera(
    const SpectralGrid &grid,
    const Vector3      &peaks  = Vector3( 600.0, 540.0, 460.0 ),
    const Vector3      &widths = Vector3( 40.0, 40.0, 30.0 ) );

/// Camera with randomly placed Gaussian channels plus a little crosstalk;
/// full column rank by construction.
SensorSet random_camera( const SpectralGrid &grid, Random &rng );

/// Smooth reflectances in (0, 1): logistic of a random sum of Gaussians.
ReflectanceSet smooth_reflectances( const SpectralGrid &grid, std::size_t count, Random &rng );

/// Blackbody radiator normalized to 100 at 560 nm.
Spectrum planckian( const SpectralGrid &grid, double kelvin, std::string name = {} );

/// Smooth strictly positive filter with values in [lo, hi].
FilterCurve smooth_filter( const SpectralGrid &grid, Random &rng, double lo = 0.2, double hi = 1.0 );

} // namespace chromafit::synthetic
