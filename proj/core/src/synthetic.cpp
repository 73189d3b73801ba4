// SPDX-License-Identifier: Apache-2.0
// Copyright Contributors to the chromafit Project.

#include <chromafit/synthetic.hpp>
#include <chromafit/error.hpp>

#include <cmath>
#include <numbers>
#include <sstream>

namespace chromafit::synthetic
{

double Random::uniform()
{
    return static_cast<double>( _engine() >> 11 ) * 0x1.0p-53;
}

double Random::normal()
{
    double u = uniform();
    while ( u <= 0.0 )
        u = uniform();
    const double v = uniform();
    return std::sqrt( -2.0 * std::log( u ) ) * std::cos( 2.0 * std::numbers::pi * v );
}

Matrix Random::normal_matrix( Eigen::Index rows, Eigen::Index cols )
{
    Matrix m( rows, cols );
    for ( Eigen::Index j = 0; j < cols; ++j )
        for ( Eigen::Index i = 0; i < rows; ++i )
            m( i, j ) = normal();
    return m;
}

namespace
{

double gaussian( double x, double mu, double sigma )
{
    const double t = ( x - mu ) / sigma;
    return std::exp( -0.5 * t * t );
}

} // namespace

SensorSet
gaussian_camera( const SpectralGrid &grid, const Vector3 &peaks, const Vector3 &widths )
{
    MatrixX3 q( grid.size(), 3 );
    for ( std::size_t i = 0; i < grid.size(); ++i )
        for ( int k = 0; k < 3; ++k )
            q( static_cast<Eigen::Index>( i ), k ) = gaussian( grid[i], peaks( k ), widths( k ) );
    return SensorSet( grid, q, "gaussian" );
}

SensorSet random_camera( const SpectralGrid &grid, Random &rng )
{
    const Vector3 peaks( rng.uniform( 580.0, 630.0 ), rng.uniform( 510.0, 560.0 ),
                         rng.uniform( 440.0, 480.0 ) );
    const Vector3 widths( rng.uniform( 25.0, 50.0 ), rng.uniform( 25.0, 50.0 ),
                          rng.uniform( 20.0, 40.0 ) );
    MatrixX3 q = gaussian_camera( grid, peaks, widths ).values();
    Matrix3  mix = Matrix3::Identity();
    for ( int r = 0; r < 3; ++r )
        for ( int c = 0; c < 3; ++c )
            if ( r != c )
                mix( r, c ) = rng.uniform( 0.0, 0.15 );
    q = q * mix;
    return SensorSet( grid, q, "random" );
}

ReflectanceSet smooth_reflectances( const SpectralGrid &grid, std::size_t count, Random &rng )
{
    const auto   n    = static_cast<Eigen::Index>( grid.size() );
    const double lo   = grid.front();
    const double hi   = grid.back();
    Matrix       vals( n, static_cast<Eigen::Index>( count ) );
    for ( std::size_t s = 0; s < count; ++s )
    {
        const int    bumps  = 1 + static_cast<int>( rng.uniform() * 3.0 );
        const double offset = rng.uniform( -2.0, 1.0 );
        Vector       logit  = Vector::Constant( n, offset );
        for ( int b = 0; b < bumps; ++b )
        {
            const double mu    = rng.uniform( lo - 30.0, hi + 30.0 );
            const double sigma = rng.uniform( 20.0, 90.0 );
            const double amp   = rng.uniform( -3.0, 3.0 );
            for ( Eigen::Index i = 0; i < n; ++i )
                logit( i ) += amp * gaussian( grid[static_cast<std::size_t>( i )], mu, sigma );
        }
        vals.col( static_cast<Eigen::Index>( s ) ) =
            ( 1.0 / ( 1.0 + ( -logit.array() ).exp() ) ).matrix();
    }
    return ReflectanceSet( grid, vals );
}

Spectrum planckian( const SpectralGrid &grid, double kelvin, std::string name )
{
    if ( !( kelvin > 0.0 ) )
        throw InputError( "planckian: temperature must be positive" );
    constexpr double c2 = 1.4388e7;  // nm K
    auto radiance = [&]( double nm ) {
        return std::pow( nm, -5.0 ) / std::expm1( c2 / ( nm * kelvin ) );
    };
    const double ref = radiance( 560.0 );
    Vector       v( grid.size() );
    for ( std::size_t i = 0; i < grid.size(); ++i )
        v( static_cast<Eigen::Index>( i ) ) = 100.0 * radiance( grid[i] ) / ref;
    if ( name.empty() )
    {
        std::ostringstream s;
        s << "P" << kelvin;
        name = s.str();
    }
    return Spectrum( grid, v, SpectrumKind::Illuminant, std::move( name ) );
}

FilterCurve smooth_filter( const SpectralGrid &grid, Random &rng, double lo, double hi )
{
    if ( !( lo > 0.0 ) || !( hi >= lo ) )
        throw InputError( "smooth_filter: need 0 < lo <= hi" );
    const auto n = static_cast<Eigen::Index>( grid.size() );
    Vector     v = Vector::Zero( n );
    for ( int b = 0; b < 3; ++b )
    {
        const double mu    = rng.uniform( grid.front(), grid.back() );
        const double sigma = rng.uniform( 30.0, 80.0 );
        const double amp   = rng.uniform( -1.0, 1.0 );
        for ( Eigen::Index i = 0; i < n; ++i )
            v( i ) += amp * gaussian( grid[static_cast<std::size_t>( i )], mu, sigma );
    }
    const double vmin = v.minCoeff();
    const double vmax = v.maxCoeff();
    if ( vmax - vmin < 1e-12 )
        return FilterCurve::constant( grid, hi );
    v = ( ( v.array() - vmin ) / ( vmax - vmin ) * ( hi - lo ) + lo ).matrix();
    return FilterCurve( grid, v );
}

} // namespace chromafit::synthetic
