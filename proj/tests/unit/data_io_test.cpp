// SPDX-License-Identifier: Apache-2.0
// Copyright Contributors to the chromafit Project.

#include "unit/support.hpp"

#include <chromafit/data_io.hpp>
#include <chromafit/error.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

using namespace chromafit;
using namespace chromafit::testing;

namespace
{

SpectralTable parse( const std::string &text )
{
    std::istringstream in( text );
    return parse_table( in, "mem.csv" );
}

std::string message_of( const std::string &text )
{
    try
    {
        parse( text );
    }
    catch ( const InputError &e )
    {
        return e.what();
    }
    return {};
}

std::filesystem::path scratch( const std::string &name )
{
    auto dir = std::filesystem::temp_directory_path() / "chromafit_data_io_test";
    std::filesystem::create_directories( dir );
    return dir / name;
}

} // namespace

TEST( ParseTable, ReadsHeaderCommentsAndColumns )
{
    const auto t = parse( "\xEF\xBB\xBF# camera\nwavelength_nm,r,g,b\n\n400,1,2,3\n410,4,5,6\n" );
    ASSERT_EQ( t.rows(), 2u );
    ASSERT_EQ( t.columns(), 3u );
    EXPECT_EQ( t.names[1], "g" );
    EXPECT_EQ( t.column( "b" ), 2u );
    EXPECT_DOUBLE_EQ( t.values( 1, 2 ), 6.0 );
    EXPECT_THROW( t.column( "x" ), InputError );
}

TEST( ParseTable, NamesTheBadCell )
{
    const auto msg = message_of( "wavelength_nm,r,g\n400,1,2\n410,1,oops\n" );
    EXPECT_NE( msg.find( "mem.csv:3" ), std::string::npos ) << msg;
    EXPECT_NE( msg.find( "'g'" ), std::string::npos ) << msg;
    EXPECT_NE( msg.find( "oops" ), std::string::npos ) << msg;
}

TEST( ParseTable, RejectsMalformedTables )
{
    EXPECT_FALSE( message_of( "nm,r\n400,1\n410,2\n" ).empty() );
    EXPECT_FALSE( message_of( "wavelength_nm,r\n410,1\n400,2\n" ).empty() );
    EXPECT_FALSE( message_of( "wavelength_nm,r\n400,1\n" ).empty() );
    EXPECT_FALSE( message_of( "wavelength_nm,r\n400,1\n410\n" ).empty() );
    EXPECT_FALSE( message_of( "wavelength_nm,r\n400,1\n410,inf\n" ).empty() );
}

TEST( Resample, IdentityIsBitExact )
{
    synthetic::Random rng( 1 );
    const SpectralGrid g;
    const Matrix       v = rng.normal_matrix( 31, 3 );
    const auto         t = make_table( g, v, { "a", "b", "c" } );
    EXPECT_EQ( resample( t, g ), v );
}

TEST( Resample, LinearRampIsExact )
{
    const auto t   = make_table( SpectralGrid::uniform( 380, 780, 20 ),
                                 Matrix( Eigen::VectorXd::LinSpaced( 21, 380, 780 ) ), { "ramp" } );
    const auto g   = SpectralGrid( std::vector<double>{ 401.5, 455.25, 699.0, 780.0 } );
    const auto out = resample( t, g );
    for ( std::size_t i = 0; i < g.size(); ++i )
        EXPECT_NEAR( out( static_cast<Eigen::Index>( i ), 0 ), g[i], 1e-12 );
}

TEST( Resample, FiveNanometreTableSubsamplesToTen )
{
    synthetic::Random rng( 2 );
    const auto        fine = SpectralGrid::uniform( 400, 700, 5 );
    const Matrix      v    = rng.normal_matrix( 61, 2 );
    const auto        out  = resample( make_table( fine, v, { "a", "b" } ), SpectralGrid() );
    for ( Eigen::Index i = 0; i < 31; ++i )
        EXPECT_EQ( out.row( i ), v.row( 2 * i ) );
}

TEST( Resample, RefusesToExtrapolate )
{
    const auto t = make_table( SpectralGrid::uniform( 410, 700, 10 ), Matrix::Ones( 30, 1 ), { "a" } );
    EXPECT_THROW( resample( t, SpectralGrid() ), InputError );
}

TEST( Resample, IsIdempotent )
{
    synthetic::Random rng( 3 );
    const auto        fine = SpectralGrid::uniform( 380, 780, 5 );
    const auto        once = resample( make_table( fine, rng.normal_matrix( 81, 1 ), { "a" } ), SpectralGrid() );
    const auto twice = resample( make_table( SpectralGrid(), once, { "a" } ), SpectralGrid() );
    EXPECT_EQ( once, twice );
}

TEST( Tables, SaveLoadRoundTrip )
{
    synthetic::Random rng( 4 );
    const SpectralGrid g;
    const auto         t    = make_table( g, rng.normal_matrix( 31, 2 ), { "a", "b" } );
    const auto         path = scratch( "roundtrip.csv" );
    save_table( path, t );
    const auto once = load_table( path );
    save_table( path, once );
    const auto again = load_table( path );
    EXPECT_EQ( once.values, again.values );
    EXPECT_EQ( once.names, t.names );
    // 9 significant digits.
    EXPECT_LT( ( once.values - t.values ).cwiseAbs().maxCoeff(),
               1e-8 * t.values.cwiseAbs().maxCoeff() );
}

TEST( Tables, MissingFileNamesThePath )
{
    try
    {
        load_table( "/nonexistent/dir/camera.csv" );
        FAIL();
    }
    catch ( const InputError &e )
    {
        EXPECT_NE( std::string( e.what() ).find( "/nonexistent/dir/camera.csv" ), std::string::npos );
    }
}

TEST( Loaders, SensorSetNeedsThreeColumns )
{
    const auto path = scratch( "two.csv" );
    std::ofstream( path ) << "wavelength_nm,a,b\n400,1,1\n700,1,1\n";
    EXPECT_THROW( load_sensor_set( path, SpectralGrid() ), InputError );
}

TEST( Reference, CmfsAreNonnegativeWithLuminancePeakNear555 )
{
    const auto x = reference_cmfs();
    ASSERT_EQ( x.values().rows(), 31 );
    EXPECT_GE( x.values().minCoeff(), 0.0 );
    Eigen::Index peak = 0;
    x.values().col( 1 ).maxCoeff( &peak );
    EXPECT_NEAR( SpectralGrid()[static_cast<std::size_t>( peak )], 555.0, 5.0 );
}

TEST( Reference, PublishedCmfSamples )
{
    // Values of the CIE 1931 2 degree observer at 10 nm.
    const auto t = builtin_cmf_table();
    auto at = [&]( double nm ) {
        for ( std::size_t i = 0; i < t.rows(); ++i )
            if ( t.wavelengths[i] == nm )
                return Eigen::RowVector3d( t.values.row( static_cast<Eigen::Index>( i ) ) );
        return Eigen::RowVector3d( -1, -1, -1 );
    };
    EXPECT_NEAR( at( 550 )( 1 ), 0.994950, 1e-6 );
    EXPECT_NEAR( at( 450 )( 2 ), 1.772110, 1e-6 );
    EXPECT_NEAR( at( 600 )( 0 ), 1.062200, 1e-6 );
}

TEST( Reference, IlluminantsArePositiveAndNormalized )
{
    const auto d65 = reference_illuminant( "D65" );
    const auto a   = reference_illuminant( "a" );
    EXPECT_GT( d65.values().minCoeff(), 0.0 );
    EXPECT_GT( a.values().minCoeff(), 0.0 );
    EXPECT_EQ( a.name(), "A" );
    // Both tables are normalized to 100 at 560 nm.
    EXPECT_NEAR( d65.values()( 16 ), 100.0, 1e-9 );
    EXPECT_NEAR( a.values()( 16 ), 100.0, 1e-9 );
    // Illuminant A is rising across the visible range.
    EXPECT_GT( a.values()( 30 ), a.values()( 0 ) * 5.0 );
    EXPECT_THROW( reference_illuminant( "F2" ), InputError );
}

TEST( Reference, DataDirectoryOverride )
{
    const auto dir = scratch( "" ).parent_path() / "override";
    std::filesystem::create_directories( dir );
    std::ofstream( dir / "illuminant_d65.csv" ) << "wavelength_nm,D65\n400,2\n700,2\n";
    ::setenv( "CHROMAFIT_DATA_DIR", dir.c_str(), 1 );
    const auto e = reference_illuminant( "D65" );
    ::unsetenv( "CHROMAFIT_DATA_DIR" );
    EXPECT_EQ( e.values(), Vector::Constant( 31, 2.0 ) );
}
