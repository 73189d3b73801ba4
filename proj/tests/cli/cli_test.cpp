// SPDX-License-Identifier: Apache-2.0
// Copyright Contributors to the chromafit Project.

#include "chromafit/app.hpp"

#include <chromafit/data_io.hpp>
#include <chromafit/synthetic.hpp>

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include <filesystem>
#include <fstream>
#include <sstream>

using namespace chromafit;
namespace fs = std::filesystem;

namespace
{

class Cli : public ::testing::Test
{
protected:
    void SetUp() override
    {
        const auto *info = ::testing::UnitTest::GetInstance()->current_test_info();
        dir = fs::temp_directory_path() / ( std::string( "chromafit-cli-" ) + info->name() );
        fs::remove_all( dir );
        fs::create_directories( dir );

        const SpectralGrid grid;
        synthetic::Random  rng( 71 );
        const auto         cam  = synthetic::gaussian_camera( grid );
        const auto         refl = synthetic::smooth_reflectances( grid, 40, rng );
        save_table( path( "camera.csv" ), make_table( grid, cam.values(), { "r", "g", "b" } ) );
        save_table( path( "refl.csv" ), make_table( grid, refl.values(), names( refl.count() ) ) );
        save_table( path( "cmf.csv" ),
                    make_table( grid, reference_cmfs( grid ).values(), { "x", "y", "z" } ) );
        save_table( path( "ones.csv" ), make_table( grid, Matrix::Ones( 31, 1 ), { "t" } ) );
    }

    void TearDown() override { fs::remove_all( dir ); }

    static std::vector<std::string> names( std::size_t n )
    {
        std::vector<std::string> out;
        for ( std::size_t i = 0; i < n; ++i )
            out.push_back( "s" + std::to_string( i ) );
        return out;
    }

    std::string path( const std::string &name ) const { return ( dir / name ).string(); }

    int run( std::vector<std::string> args )
    {
        std::ostringstream o, e;
        const int          rc = app::run( args, o, e );
        out                   = o.str();
        err                   = e.str();
        return rc;
    }

    std::vector<std::string> data_args( const std::string &out_dir ) const
    {
        return { "data",          "--camera", path( "camera.csv" ), "--illuminants", "D65,A",
                 "--reflectances", path( "refl.csv" ), "--out", path( out_dir ) };
    }

    static std::string slurp( const std::string &p )
    {
        std::ifstream      in( p );
        std::ostringstream s;
        s << in.rdbuf();
        return s.str();
    }

    Vector filter_of( const std::string &out_dir ) const
    {
        return load_table( path( out_dir ) + "/filter.csv" ).values.col( 0 );
    }

    fs::path    dir;
    std::string out, err;
};

} // namespace

TEST_F( Cli, LutherOnColorimetricCameraIsAllOnes )
{
    ASSERT_EQ( run( { "luther", "--camera", path( "cmf.csv" ), "--out", path( "l" ) } ), app::Success )
        << err;
    EXPECT_LT( ( filter_of( "l" ) - Vector::Ones( 31 ) ).cwiseAbs().maxCoeff(), 1e-8 );
    const auto report = nlohmann::json::parse( slurp( path( "l" ) + "/report.json" ) );
    EXPECT_TRUE( report.contains( "vora_after" ) );
    EXPECT_TRUE( fs::exists( path( "l" ) + "/manifest.json" ) );
}

TEST_F( Cli, MissingFileIsInputError )
{
    auto args  = data_args( "m" );
    args[2]    = path( "nope.csv" );
    EXPECT_EQ( run( args ), app::InputFault );
    EXPECT_NE( err.find( "nope.csv" ), std::string::npos ) << err;
}

TEST_F( Cli, InfeasibleBoundsAreInputError )
{
    auto args = data_args( "b" );
    args.insert( args.end(), { "--basis", "6", "--fmin", "0.9", "--fmax", "0.2" } );
    EXPECT_EQ( run( args ), app::InputFault );
    EXPECT_NE( err.find( "f_min" ), std::string::npos ) << err;
}

TEST_F( Cli, FixedTargetNeedsTarget )
{
    auto args = data_args( "f" );
    args.insert( args.end(), { "--mode", "fixed-target" } );
    EXPECT_EQ( run( args ), app::InputFault );
}

TEST_F( Cli, BoundedDataFitRespectsFloor )
{
    auto args = data_args( "d" );
    args.insert( args.end(), { "--basis", "6", "--fmin", "0.2", "--seed", "luther" } );
    ASSERT_EQ( run( args ), app::Success ) << err;
    EXPECT_GE( filter_of( "d" ).minCoeff(), 0.2 - 1e-9 );

    const auto header = slurp( path( "d" ) + "/stats.csv" ).substr( 0, 37 );
    EXPECT_EQ( header, "illuminant,mean,median,p90,p95,p99,ma" );
    const auto stats = slurp( path( "d" ) + "/stats.csv" );
    EXPECT_NE( stats.find( "\nD65," ), std::string::npos );
    EXPECT_NE( stats.find( "\naggregate," ), std::string::npos );

    const auto manifest = nlohmann::json::parse( slurp( path( "d" ) + "/manifest.json" ) );
    EXPECT_EQ( manifest["command"], "data" );
    EXPECT_FALSE( manifest["inputs"].empty() );
    EXPECT_FALSE( manifest["outputs"].empty() );
}

TEST_F( Cli, SingleSeedMultistartMatchesData )
{
    ASSERT_EQ( run( { "seeds", "--basis", "6", "--fmin", "0.2", "--count", "1", "--rng-seed", "9",
                      "--out", path( "s" ) } ),
               app::Success )
        << err;
    const std::string seeds = path( "s" ) + "/seeds.csv";

    auto data = data_args( "d" );
    data.insert( data.end(), { "--basis", "6", "--fmin", "0.2", "--seed", seeds } );
    ASSERT_EQ( run( data ), app::Success ) << err;

    auto from_file = data_args( "mf" );
    from_file[0]   = "multistart";
    from_file.insert( from_file.end(), { "--basis", "6", "--fmin", "0.2", "--seeds", seeds,
                                         "--metric", "objective" } );
    ASSERT_EQ( run( from_file ), app::Success ) << err;
    EXPECT_EQ( slurp( path( "d" ) + "/filter.csv" ), slurp( path( "mf" ) + "/filter.csv" ) );

    // Sampling in memory skips the 9-digit file round trip.
    auto sampled = data_args( "ms" );
    sampled[0]   = "multistart";
    sampled.insert( sampled.end(), { "--basis", "6", "--fmin", "0.2", "--count", "1", "--rng-seed",
                                     "9", "--metric", "objective" } );
    ASSERT_EQ( run( sampled ), app::Success ) << err;
    EXPECT_LT( ( filter_of( "ms" ) - filter_of( "d" ) ).cwiseAbs().maxCoeff(), 1e-6 );
}

TEST_F( Cli, MultistartIsReproducible )
{
    std::vector<std::string> ranking;
    for ( const std::string name : { "a", "b" } )
    {
        auto args = data_args( name );
        args[0]   = "multistart";
        args.insert( args.end(), { "--basis", "6", "--fmin", "0.2", "--count", "4", "--rng-seed",
                                   "3", "--max-iter", "50", "--jobs", name == "a" ? "1" : "2" } );
        ASSERT_EQ( run( args ), app::Success ) << err;
        ranking.push_back( slurp( path( name ) + "/ranking.csv" ) );
    }
    EXPECT_EQ( ranking[0], ranking[1] );
    EXPECT_EQ( ranking[0].rfind( "rank,seed_id,objective,metric,iterations,converged\n", 0 ), 0u );
}

TEST_F( Cli, OnesFilterEqualsNoFilter )
{
    const std::vector<std::string> base{ "eval", "--camera", path( "camera.csv" ), "--illuminants",
                                         "D65,A", "--reflectances", path( "refl.csv" ) };
    auto none = base;
    none.insert( none.end(), { "--out", path( "n" ) } );
    auto ones = base;
    ones.insert( ones.end(), { "--filter", path( "ones.csv" ), "--out", path( "o" ) } );
    ASSERT_EQ( run( none ), app::Success ) << err;
    ASSERT_EQ( run( ones ), app::Success ) << err;
    EXPECT_EQ( slurp( path( "n" ) + "/stats.csv" ), slurp( path( "o" ) + "/stats.csv" ) );
}

TEST_F( Cli, UsageErrors )
{
    EXPECT_EQ( run( {} ), app::InputFault );
    EXPECT_EQ( run( { "bogus" } ), app::InputFault );
    EXPECT_EQ( run( { "luther" } ), app::InputFault );
    EXPECT_EQ( run( { "--help" } ), app::Success );
    EXPECT_EQ( run( { "seeds", "--basis", "1", "--count", "3", "--out", path( "x" ) } ),
               app::NumericalFault );
}
