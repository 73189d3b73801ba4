// SPDX-License-Identifier: Apache-2.0
// Copyright Contributors to the chromafit Project.

#include "chromafit/artifacts.hpp"

#include <chromafit/data_io.hpp>
#include <chromafit/error.hpp>

#include <openssl/evp.h>

#include <array>
#include <chrono>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <sstream>

#ifndef CHROMAFIT_VERSION
#    define CHROMAFIT_VERSION "unknown"
#endif

namespace chromafit::app
{

namespace fs = std::filesystem;

double sig9( double x )
{
    if ( !std::isfinite( x ) )
        return x;
    std::array<char, 32> buf{};
    std::snprintf( buf.data(), buf.size(), "%.9g", x );
    return std::strtod( buf.data(), nullptr );
}

json to_json( const Matrix3 &m )
{
    json rows = json::array();
    for ( int r = 0; r < 3; ++r )
        rows.push_back( { sig9( m( r, 0 ) ), sig9( m( r, 1 ) ), sig9( m( r, 2 ) ) } );
    return rows;
}

json to_json( const ErrorStats &s )
{
    return { { "mean", sig9( s.mean ) }, { "median", sig9( s.median ) },
             { "p90", sig9( s.p90 ) },   { "p95", sig9( s.p95 ) },
             { "p99", sig9( s.p99 ) },   { "max", sig9( s.max ) } };
}

namespace
{

std::ofstream open_output( const fs::path &path )
{
    std::ofstream out( path );
    if ( !out )
        throw InputError( "cannot write '" + path.string() + "'" );
    out << std::setprecision( 9 );
    return out;
}

std::string utc_timestamp()
{
    const auto   now = std::chrono::system_clock::to_time_t( std::chrono::system_clock::now() );
    std::tm      tm{};
    gmtime_r( &now, &tm );
    std::ostringstream s;
    s << std::put_time( &tm, "%Y-%m-%dT%H:%M:%SZ" );
    return s.str();
}

} // namespace

std::string sha256_file( const fs::path &path )
{
    std::ifstream in( path, std::ios::binary );
    if ( !in )
        throw InputError( "cannot read '" + path.string() + "' for hashing" );
    std::unique_ptr<EVP_MD_CTX, decltype( &EVP_MD_CTX_free )> ctx(
        EVP_MD_CTX_new(), &EVP_MD_CTX_free );
    if ( !ctx || EVP_DigestInit_ex( ctx.get(), EVP_sha256(), nullptr ) != 1 )
        throw NumericalError( "sha256: digest initialisation failed" );
    std::array<char, 65536> buf;
    while ( in )
    {
        in.read( buf.data(), buf.size() );
        if ( in.gcount() > 0 )
            EVP_DigestUpdate( ctx.get(), buf.data(), static_cast<std::size_t>( in.gcount() ) );
    }
    std::array<unsigned char, EVP_MAX_MD_SIZE> md{};
    unsigned int                               len = 0;
    EVP_DigestFinal_ex( ctx.get(), md.data(), &len );
    std::ostringstream hex;
    for ( unsigned int i = 0; i < len; ++i )
        hex << std::hex << std::setw( 2 ) << std::setfill( '0' ) << static_cast<int>( md[i] );
    return hex.str();
}

void write_json( const fs::path &path, const json &doc )
{
    auto out = open_output( path );
    out << doc.dump( 2 ) << '\n';
}

void write_filter_csv( const fs::path &path, const FilterCurve &filter )
{
    save_table(
        path, make_table( filter.grid(), Matrix( filter.values() ), { "transmittance" } ) );
}

void write_sensitivities_csv(
    const fs::path &path, const SensorSet &camera, const std::optional<FilterCurve> &filter )
{
    const auto n = static_cast<Eigen::Index>( camera.grid().size() );
    Matrix     values( n, filter ? 6 : 3 );
    values.leftCols( 3 ) = camera.values();
    std::vector<std::string> names{ "r", "g", "b" };
    if ( filter )
    {
        values.rightCols( 3 ) = filter->values().asDiagonal() * camera.values();
        names.insert( names.end(), { "r_filtered", "g_filtered", "b_filtered" } );
    }
    save_table( path, make_table( camera.grid(), values, names ) );
}

void write_trace_csv( const fs::path &path, const AlsTrace &trace )
{
    auto out = open_output( path );
    out << "iteration,objective,step_change\n";
    for ( std::size_t i = 0; i < trace.objective.size(); ++i )
        out << i + 1 << ',' << trace.objective[i] << ',' << trace.step_change[i] << '\n';
}

void write_stats_csv( const fs::path &path, const Evaluation &evaluation )
{
    auto out = open_output( path );
    out << "illuminant,mean,median,p90,p95,p99,max\n";
    auto row = [&]( const std::string &name, const ErrorStats &s ) {
        out << name << ',' << s.mean << ',' << s.median << ',' << s.p90 << ',' << s.p95 << ','
            << s.p99 << ',' << s.max << '\n';
    };
    for ( const auto &e : evaluation.per_illuminant )
        row( e.illuminant, e.stats );
    row( "aggregate", evaluation.aggregate );
}

void write_seeds_csv( const fs::path &path, const std::vector<FilterCurve> &seeds )
{
    if ( seeds.empty() )
        throw InputError( "no seeds to write" );
    const auto &grid = seeds.front().grid();
    Matrix      values( static_cast<Eigen::Index>( grid.size() ),
                        static_cast<Eigen::Index>( seeds.size() ) );
    std::vector<std::string> names;
    for ( std::size_t i = 0; i < seeds.size(); ++i )
    {
        values.col( static_cast<Eigen::Index>( i ) ) = seeds[i].values();
        names.push_back( "sample-" + std::to_string( i ) );
    }
    save_table( path, make_table( grid, values, names ) );
}

void write_ranking_csv( const fs::path &path, const MultiStartResult &result )
{
    auto out = open_output( path );
    out << "rank,seed_id,objective,metric,iterations,converged\n";
    std::size_t rank = 1;
    for ( auto i : result.ranking )
    {
        const auto &o = result.outcomes[i];
        out << rank++ << ',' << o.seed_id << ',' << o.objective << ',' << o.metric << ','
            << o.result->trace.iterations << ',' << ( o.result->trace.converged ? 1 : 0 )
            << '\n';
    }
    for ( const auto &o : result.outcomes )
        if ( !o.result )
            out << "failed," << o.seed_id << ",nan,nan,0,0\n";
}

RunManifest::RunManifest( std::string command, std::vector<std::string> arguments )
    : _command( std::move( command ) ), _arguments( std::move( arguments ) )
{}

void RunManifest::add_input( const fs::path &path )
{
    _inputs.push_back( path );
}

void RunManifest::add_output( const fs::path &path )
{
    _outputs.push_back( path );
}

void RunManifest::write( const fs::path &dir ) const
{
    json doc;
    doc["tool"]      = "chromafit";
    doc["version"]   = CHROMAFIT_VERSION;
    doc["command"]   = _command;
    doc["arguments"] = _arguments;
    doc["timestamp"] = utc_timestamp();
    json inputs      = json::array();
    for ( const auto &p : _inputs )
        inputs.push_back( { { "path", p.string() }, { "sha256", sha256_file( p ) } } );
    doc["inputs"]     = inputs;
    doc["parameters"] = _parameters;
    json outputs      = json::array();
    for ( const auto &p : _outputs )
        outputs.push_back(
            { { "file", p.filename().string() }, { "sha256", sha256_file( p ) } } );
    doc["outputs"] = outputs;
    write_json( dir / "manifest.json", doc );
}

} // namespace chromafit::app
