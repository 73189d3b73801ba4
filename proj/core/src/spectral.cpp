// SPDX-License-Identifier: Apache-2.0
// Copyright Contributors to the chromafit Project.

#include <chromafit/spectral.hpp>
#include <chromafit/error.hpp>

#include <cmath>
#include <sstream>

namespace chromafit
{

namespace
{

std::string kind_name( SpectrumKind kind )
{
    switch ( kind )
    {
        case SpectrumKind::Illuminant: return "illuminant";
        case SpectrumKind::Reflectance: return "reflectance";
        case SpectrumKind::ColorSignal: return "color signal";
        case SpectrumKind::Sensitivity: return "sensitivity";
        case SpectrumKind::MatchingFunction: return "matching function";
    }
    return "spectrum";
}

template <typename Derived>
void require_finite( const Eigen::MatrixBase<Derived> &m, std::string_view what )
{
    if ( !m.allFinite() )
        throw InputError( std::string( what ) + " contains non-finite values" );
}

void require_rows(
    const SpectralGrid &grid, Eigen::Index rows, std::string_view what )
{
    if ( static_cast<std::size_t>( rows ) != grid.size() )
    {
        std::ostringstream msg;
        msg << what << " has " << rows << " samples but the grid has "
            << grid.size();
        throw InputError( msg.str() );
    }
}

} // namespace

SpectralGrid::SpectralGrid() : SpectralGrid( uniform( 400.0, 700.0, 10.0 ) )
{}

SpectralGrid::SpectralGrid( std::vector<double> wavelengths )
    : _wavelengths( std::move( wavelengths ) )
{
    if ( _wavelengths.empty() )
        throw InputError( "spectral grid must contain at least one sample" );
    for ( std::size_t i = 0; i < _wavelengths.size(); ++i )
    {
        if ( !std::isfinite( _wavelengths[i] ) )
            throw InputError( "spectral grid contains a non-finite wavelength" );
        if ( i > 0 && !( _wavelengths[i] > _wavelengths[i - 1] ) )
        {
            std::ostringstream msg;
            msg << "spectral grid is not strictly increasing at index " << i
                << " (" << _wavelengths[i - 1] << " -> " << _wavelengths[i]
                << ")";
            throw InputError( msg.str() );
        }
    }
}

SpectralGrid SpectralGrid::uniform( double start, double end, double step )
{
    if ( !( step > 0.0 ) || !( end >= start ) )
        throw InputError( "uniform grid needs step > 0 and end >= start" );
    const auto count =
        static_cast<std::size_t>( std::floor( ( end - start ) / step + 0.5 ) ) +
        1;
    std::vector<double> wl( count );
    for ( std::size_t i = 0; i < count; ++i )
        wl[i] = start + step * static_cast<double>( i );
    return SpectralGrid( std::move( wl ) );
}

void require_same_grid(
    const SpectralGrid &a, const SpectralGrid &b, std::string_view what )
{
    if ( a == b )
        return;
    std::ostringstream msg;
    msg << "spectral grid mismatch in " << what << ": " << a.size()
        << " samples [" << a.front() << ", " << a.back() << "] vs " << b.size()
        << " samples [" << b.front() << ", " << b.back() << "]";
    throw InputError( msg.str() );
}

Spectrum::Spectrum(
    SpectralGrid grid, Vector values, SpectrumKind kind, std::string name )
    : _grid( std::move( grid ) )
    , _values( std::move( values ) )
    , _kind( kind )
    , _name( std::move( name ) )
{
    require_rows( _grid, _values.size(), kind_name( _kind ) );
    require_finite( _values, kind_name( _kind ) );
    const bool nonnegative_kind = _kind == SpectrumKind::Illuminant ||
                                  _kind == SpectrumKind::Reflectance ||
                                  _kind == SpectrumKind::ColorSignal;
    if ( nonnegative_kind && ( _values.array() < 0.0 ).any() )
        throw InputError(
            kind_name( _kind ) + " '" + _name + "' has negative values" );
}

SensorSet::SensorSet( SpectralGrid grid, MatrixX3 values, std::string name )
    : _grid( std::move( grid ) ), _values( std::move( values ) ), _name( name )
{
    require_rows( _grid, _values.rows(), "sensor set" );
    require_finite( _values, "sensor set" );
}

std::vector<std::size_t> SensorSet::negative_rows() const
{
    std::vector<std::size_t> rows;
    for ( Eigen::Index i = 0; i < _values.rows(); ++i )
        if ( ( _values.row( i ).array() < 0.0 ).any() )
            rows.push_back( static_cast<std::size_t>( i ) );
    return rows;
}

FilterCurve::FilterCurve( SpectralGrid grid, Vector values )
    : _grid( std::move( grid ) ), _values( std::move( values ) )
{
    require_rows( _grid, _values.size(), "filter" );
    require_finite( _values, "filter" );
}

FilterCurve FilterCurve::ones( const SpectralGrid &grid )
{
    return constant( grid, 1.0 );
}

FilterCurve FilterCurve::constant( const SpectralGrid &grid, double value )
{
    return FilterCurve(
        grid, Vector::Constant( static_cast<Eigen::Index>( grid.size() ), value ) );
}

ReflectanceSet::ReflectanceSet(
    SpectralGrid grid, Matrix values, std::vector<std::string> names )
    : _grid( std::move( grid ) )
    , _values( std::move( values ) )
    , _names( std::move( names ) )
{
    require_rows( _grid, _values.rows(), "reflectance set" );
    require_finite( _values, "reflectance set" );
    if ( _values.cols() < 1 )
        throw InputError( "reflectance set is empty" );
    for ( Eigen::Index c = 0; c < _values.cols(); ++c )
    {
        for ( Eigen::Index r = 0; r < _values.rows(); ++r )
        {
            if ( _values( r, c ) < 0.0 )
            {
                std::ostringstream msg;
                msg << "negative reflectance " << _values( r, c )
                    << " in column " << c << " at " << _grid[r] << " nm";
                throw InputError( msg.str() );
            }
        }
    }
    if ( _names.empty() )
    {
        _names.reserve( _values.cols() );
        for ( Eigen::Index c = 0; c < _values.cols(); ++c )
            _names.push_back( "r" + std::to_string( c ) );
    }
    else if ( _names.size() != static_cast<std::size_t>( _values.cols() ) )
        throw InputError( "reflectance names do not match the column count" );
}

ColorSignalSet::ColorSignalSet(
    SpectralGrid grid, Matrix values, std::string label )
    : _grid( std::move( grid ) )
    , _values( std::move( values ) )
    , _label( std::move( label ) )
{
    require_rows( _grid, _values.rows(), "color signal set" );
    require_finite( _values, "color signal set" );
    if ( _values.cols() < 1 )
        throw InputError( "color signal set is empty" );
    if ( ( _values.array() < 0.0 ).any() )
        throw InputError( "color signal set '" + _label + "' has negative values" );
}

CorrectionMatrix::CorrectionMatrix() : _m( Matrix3::Identity() ) {}

CorrectionMatrix::CorrectionMatrix( const Matrix3 &m ) : _m( m )
{
    require_finite( _m, "correction matrix" );
}

bool CorrectionMatrix::full_rank( double tolerance ) const
{
    Eigen::JacobiSVD<Matrix3> svd( _m );
    const auto &s = svd.singularValues();
    return s( 0 ) > 0.0 && s( 2 ) > tolerance * s( 0 );
}

MatrixX3 responses( const ColorSignalSet &signals, const SensorSet &sensors )
{
    require_same_grid( signals.grid(), sensors.grid(), "responses" );
    return signals.values().transpose() * sensors.values();
}

SensorSet apply_filter( const SensorSet &sensors, const FilterCurve &filter )
{
    require_same_grid( sensors.grid(), filter.grid(), "apply_filter" );
    return SensorSet(
        sensors.grid(),
        filter.values().asDiagonal() * sensors.values(),
        sensors.name() );
}

ColorSignalSet color_signal(
    const Spectrum                              &illuminant,
    const std::shared_ptr<const ReflectanceSet> &reflectances )
{
    if ( !reflectances )
        throw InputError( "color_signal: reflectance set is null" );
    require_same_grid(
        illuminant.grid(), reflectances->grid(), "color_signal" );
    Matrix values = illuminant.values().asDiagonal() * reflectances->values();
    ColorSignalSet set( illuminant.grid(), std::move( values ), illuminant.name() );
    set._illuminant   = illuminant;
    set._reflectances = reflectances;
    return set;
}

ColorSignalSet
color_signal( const Spectrum &illuminant, const ReflectanceSet &reflectances )
{
    return color_signal(
        illuminant, std::make_shared<const ReflectanceSet>( reflectances ) );
}

} // namespace chromafit
