// SPDX-License-Identifier: Apache-2.0
// Copyright Contributors to the chromafit Project.

#include <chromafit/data_io.hpp>
#include <chromafit/error.hpp>

#include "reference_tables.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <sstream>

namespace chromafit
{

namespace
{

std::string_view trim( std::string_view s )
{
    while ( !s.empty() && std::isspace( static_cast<unsigned char>( s.front() ) ) )
        s.remove_prefix( 1 );
    while ( !s.empty() && std::isspace( static_cast<unsigned char>( s.back() ) ) )
        s.remove_suffix( 1 );
    return s;
}

std::vector<std::string_view> split_csv( std::string_view line )
{
    std::vector<std::string_view> fields;
    std::size_t                   start = 0;
    while ( true )
    {
        const auto comma = line.find( ',', start );
        fields.push_back( trim( line.substr( start, comma - start ) ) );
        if ( comma == std::string_view::npos )
            break;
        start = comma + 1;
    }
    return fields;
}

std::string lower( std::string_view s )
{
    std::string out( s );
    std::transform( out.begin(), out.end(), out.begin(), []( unsigned char c ) {
        return static_cast<char>( std::tolower( c ) );
    } );
    return out;
}

bool parse_double( std::string_view text, double &value )
{
    if ( !text.empty() && text.front() == '+' )
        text.remove_prefix( 1 );
    const auto *end = text.data() + text.size();
    auto [ptr, ec]  = std::from_chars( text.data(), end, value );
    return ec == std::errc() && ptr == end && std::isfinite( value );
}

[[noreturn]] void parse_error(
    const std::string &source, std::size_t line, std::string_view detail )
{
    std::ostringstream msg;
    msg << source << ":" << line << ": " << detail;
    throw InputError( msg.str() );
}

std::filesystem::path data_dir_override()
{
    const char *dir = std::getenv( "CHROMAFIT_DATA_DIR" );
    if ( dir == nullptr || *dir == '\0' )
        return {};
    return std::filesystem::path( dir );
}

} // namespace

std::size_t SpectralTable::column( std::string_view name ) const
{
    for ( std::size_t i = 0; i < names.size(); ++i )
        if ( names[i] == name )
            return i;
    throw InputError(
        "column '" + std::string( name ) + "' not found in " + source );
}

SpectralTable parse_table( std::istream &in, std::string source )
{
    SpectralTable table;
    table.source = std::move( source );

    std::vector<std::vector<double>> rows;
    std::string                      raw;
    std::size_t                      line_no    = 0;
    bool                             have_header = false;

    while ( std::getline( in, raw ) )
    {
        ++line_no;
        std::string_view line = raw;
        if ( line_no == 1 && line.starts_with( "\xEF\xBB\xBF" ) )
            line.remove_prefix( 3 );
        line = trim( line );
        if ( line.empty() || line.front() == '#' )
            continue;

        const auto fields = split_csv( line );
        if ( !have_header )
        {
            if ( lower( fields.front() ) != "wavelength_nm" )
                parse_error(
                    table.source, line_no,
                    "header must start with 'wavelength_nm', found '" +
                        std::string( fields.front() ) + "'" );
            if ( fields.size() < 2 )
                parse_error( table.source, line_no, "header has no value columns" );
            for ( std::size_t c = 1; c < fields.size(); ++c )
            {
                if ( fields[c].empty() )
                    parse_error(
                        table.source, line_no,
                        "empty column name at column " + std::to_string( c + 1 ) );
                table.names.emplace_back( fields[c] );
            }
            have_header = true;
            continue;
        }

        if ( fields.size() != table.names.size() + 1 )
        {
            std::ostringstream msg;
            msg << "expected " << table.names.size() + 1 << " fields, found "
                << fields.size();
            parse_error( table.source, line_no, msg.str() );
        }

        std::vector<double> row( fields.size() );
        for ( std::size_t c = 0; c < fields.size(); ++c )
        {
            if ( !parse_double( fields[c], row[c] ) )
            {
                const std::string column =
                    c == 0 ? std::string( "wavelength_nm" ) : table.names[c - 1];
                parse_error(
                    table.source, line_no,
                    "column '" + column + "' (column " + std::to_string( c + 1 ) +
                        "): cannot parse '" + std::string( fields[c] ) +
                        "' as a finite number" );
            }
        }
        if ( !rows.empty() && !( row[0] > rows.back()[0] ) )
            parse_error(
                table.source, line_no, "wavelengths are not strictly increasing" );
        rows.push_back( std::move( row ) );
    }

    if ( !have_header )
        throw InputError( table.source + ": missing header row" );
    if ( rows.size() < 2 )
        throw InputError( table.source + ": need at least 2 data rows" );

    table.wavelengths.resize( rows.size() );
    table.values.resize(
        static_cast<Eigen::Index>( rows.size() ),
        static_cast<Eigen::Index>( table.names.size() ) );
    for ( std::size_t r = 0; r < rows.size(); ++r )
    {
        table.wavelengths[r] = rows[r][0];
        for ( std::size_t c = 0; c < table.names.size(); ++c )
            table.values( r, c ) = rows[r][c + 1];
    }
    return table;
}

SpectralTable load_table( const std::filesystem::path &path )
{
    std::ifstream in( path );
    if ( !in )
        throw InputError( "cannot open '" + path.string() + "'" );
    return parse_table( in, path.string() );
}

void write_table( std::ostream &out, const SpectralTable &table )
{
    out << "wavelength_nm";
    for ( const auto &name : table.names )
        out << ',' << name;
    out << '\n' << std::setprecision( 9 );
    for ( std::size_t r = 0; r < table.rows(); ++r )
    {
        out << table.wavelengths[r];
        for ( std::size_t c = 0; c < table.columns(); ++c )
            out << ',' << table.values( r, c );
        out << '\n';
    }
}

void save_table( const std::filesystem::path &path, const SpectralTable &table )
{
    std::ofstream out( path );
    if ( !out )
        throw InputError( "cannot write '" + path.string() + "'" );
    write_table( out, table );
}

SpectralTable make_table(
    const SpectralGrid      &grid,
    const Matrix            &values,
    std::vector<std::string> names,
    std::string              source )
{
    if ( static_cast<std::size_t>( values.rows() ) != grid.size() ||
         static_cast<std::size_t>( values.cols() ) != names.size() )
        throw InputError( "make_table: shape does not match grid/names" );
    SpectralTable table;
    table.source = std::move( source );
    table.wavelengths.assign( grid.wavelengths().begin(), grid.wavelengths().end() );
    table.names  = std::move( names );
    table.values = values;
    return table;
}

Matrix resample( const SpectralTable &table, const SpectralGrid &grid )
{
    const auto &wl = table.wavelengths;
    if ( wl.size() < 2 )
        throw InputError( table.source + ": need at least 2 rows to resample" );
    if ( grid.front() < wl.front() || grid.back() > wl.back() )
    {
        std::ostringstream msg;
        msg << table.source << ": covers [" << wl.front() << ", " << wl.back()
            << "] nm but the grid needs [" << grid.front() << ", "
            << grid.back() << "] nm (no extrapolation)";
        throw InputError( msg.str() );
    }

    Matrix out( static_cast<Eigen::Index>( grid.size() ), table.values.cols() );
    for ( std::size_t g = 0; g < grid.size(); ++g )
    {
        const double lambda = grid[g];
        const auto   it     = std::lower_bound( wl.begin(), wl.end(), lambda );
        const auto   hi     = static_cast<Eigen::Index>( it - wl.begin() );
        if ( *it == lambda )
        {
            out.row( g ) = table.values.row( hi );
            continue;
        }
        const auto   lo = hi - 1;
        const double t  = ( lambda - wl[lo] ) / ( wl[hi] - wl[lo] );
        out.row( g )    = ( 1.0 - t ) * table.values.row( lo ) +
                       t * table.values.row( hi );
    }
    return out;
}

SensorSet sensor_set_from_table( const SpectralTable &table, const SpectralGrid &grid )
{
    if ( table.columns() != 3 )
        throw InputError(
            table.source + ": a sensor set needs exactly 3 value columns, found " +
            std::to_string( table.columns() ) );
    std::filesystem::path p( table.source );
    return SensorSet( grid, resample( table, grid ), p.stem().string() );
}

SensorSet load_sensor_set( const std::filesystem::path &path, const SpectralGrid &grid )
{
    return sensor_set_from_table( load_table( path ), grid );
}

ReflectanceSet load_reflectances( const std::filesystem::path &path, const SpectralGrid &grid )
{
    const auto table = load_table( path );
    return ReflectanceSet( grid, resample( table, grid ), table.names );
}

std::vector<Spectrum>
load_illuminants( const std::filesystem::path &path, const SpectralGrid &grid )
{
    const auto            table  = load_table( path );
    const Matrix          values = resample( table, grid );
    std::vector<Spectrum> out;
    out.reserve( table.columns() );
    for ( std::size_t c = 0; c < table.columns(); ++c )
        out.emplace_back(
            grid, values.col( c ), SpectrumKind::Illuminant, table.names[c] );
    return out;
}

SpectralTable builtin_cmf_table()
{
    const auto    rows = detail::cie1931_2deg();
    SpectralTable table;
    table.source = "builtin:cie1931_2deg";
    table.names  = { "x_bar", "y_bar", "z_bar" };
    table.values.resize( static_cast<Eigen::Index>( rows.size() ), 3 );
    for ( std::size_t r = 0; r < rows.size(); ++r )
    {
        table.wavelengths.push_back( rows[r].wavelength );
        table.values( r, 0 ) = rows[r].x;
        table.values( r, 1 ) = rows[r].y;
        table.values( r, 2 ) = rows[r].z;
    }
    return table;
}

std::vector<std::string> reference_illuminant_names()
{
    return { "D65", "A" };
}

SpectralTable builtin_illuminant_table( std::string_view name )
{
    const std::string key = lower( name );
    SpectralTable     table;
    table.names = { std::string( name ) };
    std::vector<std::pair<double, double>> rows;
    if ( key == "d65" )
    {
        rows         = detail::cie_d65();
        table.names  = { "D65" };
        table.source = "builtin:illuminant_d65";
    }
    else if ( key == "a" )
    {
        rows         = detail::cie_a();
        table.names  = { "A" };
        table.source = "builtin:illuminant_a";
    }
    else
        throw InputError(
            "unknown reference illuminant '" + std::string( name ) +
            "' (known: D65, A)" );

    table.values.resize( static_cast<Eigen::Index>( rows.size() ), 1 );
    for ( std::size_t r = 0; r < rows.size(); ++r )
    {
        table.wavelengths.push_back( rows[r].first );
        table.values( r, 0 ) = rows[r].second;
    }
    return table;
}

SensorSet reference_cmfs( const SpectralGrid &grid )
{
    const auto dir = data_dir_override();
    const auto table =
        dir.empty() ? builtin_cmf_table() : load_table( dir / "cie1931_2deg.csv" );
    auto cmfs = sensor_set_from_table( table, grid );
    return SensorSet( grid, cmfs.values(), "cie1931_2deg" );
}

Spectrum reference_illuminant( std::string_view name, const SpectralGrid &grid )
{
    // Validates the name even when the table comes from disk.
    auto       table = builtin_illuminant_table( name );
    const auto dir   = data_dir_override();
    if ( !dir.empty() )
    {
        table = load_table( dir / ( "illuminant_" + lower( name ) + ".csv" ) );
        if ( table.columns() != 1 )
            throw InputError( table.source + ": expected a single value column" );
        table.names = builtin_illuminant_table( name ).names;
    }
    return Spectrum(
        grid, resample( table, grid ).col( 0 ), SpectrumKind::Illuminant,
        table.names.front() );
}

} // namespace chromafit
