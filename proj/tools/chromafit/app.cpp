// SPDX-License-Identifier: Apache-2.0
// Copyright Contributors to the chromafit Project.

#include "chromafit/app.hpp"
#include "chromafit/artifacts.hpp"

#include <chromafit/basis.hpp>
#include <chromafit/data_io.hpp>
#include <chromafit/data_opt.hpp>
#include <chromafit/error.hpp>
#include <chromafit/luther.hpp>
#include <chromafit/metrics.hpp>
#include <chromafit/seeding.hpp>

#include <CLI11.hpp>

#include <algorithm>
#include <cctype>
#include <cmath>
#include <filesystem>
#include <functional>
#include <iostream>
#include <limits>
#include <memory>
#include <sstream>

namespace chromafit::app
{

namespace fs = std::filesystem;

namespace
{

//	=====================================================================
//	Flags
//

struct CommonFlags
{
    std::string camera;
    std::string cmf  = "builtin";
    std::string grid = "400:700:10";
    std::string out;
    double      eps      = 1e-8;
    int         max_iter = 500;
    unsigned    jobs     = 1;
};

struct DataFlags
{
    std::vector<std::string> illuminants;
    std::string              reflectances;
    std::string              mode = "per-light";
    std::string              target;
    std::string              seed = "ones";
    int                      basis    = 0;
    double                   fmin     = 0.0;
    double                   fmax     = 1.0;
    bool                     positive = false;
    bool                     fmin_set = false;
    bool                     fmax_set = false;
};

struct SeedFlags
{
    int           count    = 500;
    double        theta    = 1.0;
    std::uint64_t rng_seed = 0;
    std::string   seeds_file;
    std::string   metric = "mean-de";
};

struct EvalFlags
{
    std::vector<std::string> illuminants;
    std::string              reflectances;
    std::string              filter = "none";
};

std::string lower( std::string s )
{
    std::transform( s.begin(), s.end(), s.begin(), []( unsigned char c ) {
        return static_cast<char>( std::tolower( c ) );
    } );
    return s;
}

SpectralGrid parse_grid( const std::string &text )
{
    std::istringstream in( text );
    double             start = 0, end = 0, step = 0;
    char               c1 = 0, c2 = 0;
    if ( !( in >> start >> c1 >> end >> c2 >> step ) || c1 != ':' || c2 != ':' )
        throw InputError( "--grid: expected START:END:STEP in nm, got '" + text + "'" );
    return SpectralGrid::uniform( start, end, step );
}

//	=====================================================================
//	Session: shared loading and output bookkeeping for one command
//

class Session
{
public:
    Session( std::string command, const CommonFlags &common, std::vector<std::string> args )
        : _common( common )
        , _grid( parse_grid( common.grid ) )
        , _manifest( std::move( command ), std::move( args ) )
    {
        if ( _common.out.empty() )
            throw InputError( "--out is required" );
        _manifest.parameters()["grid"] = {
            { "start", _grid.front() }, { "end", _grid.back() }, { "samples", _grid.size() } };
    }

    const SpectralGrid &grid() const noexcept { return _grid; }
    RunManifest        &manifest() noexcept { return _manifest; }
    std::string        &stage() noexcept { return _stage; }

    SensorSet camera()
    {
        _stage = "loading camera";
        if ( _common.camera.empty() )
            throw InputError( "--camera is required" );
        _manifest.add_input( _common.camera );
        return load_sensor_set( _common.camera, _grid );
    }

    SensorSet cmfs()
    {
        _stage = "loading colour matching functions";
        if ( lower( _common.cmf ) == "builtin" )
            return reference_cmfs( _grid );
        _manifest.add_input( _common.cmf );
        return load_sensor_set( _common.cmf, _grid );
    }

    std::vector<Spectrum> illuminants( const std::vector<std::string> &tokens )
    {
        _stage = "loading illuminants";
        if ( tokens.empty() )
            throw InputError( "--illuminants is required" );
        std::vector<Spectrum> out;
        for ( const auto &t : tokens )
        {
            auto more = resolve_illuminant( t );
            out.insert( out.end(), more.begin(), more.end() );
        }
        return out;
    }

    std::vector<Spectrum> resolve_illuminant( const std::string &token )
    {
        for ( const auto &name : reference_illuminant_names() )
            if ( lower( name ) == lower( token ) )
                return { reference_illuminant( name, _grid ) };
        if ( !fs::exists( token ) )
            throw InputError(
                "unknown illuminant '" + token +
                "': not a builtin name (D65, A) and no such file" );
        _manifest.add_input( token );
        return load_illuminants( token, _grid );
    }

    std::shared_ptr<const ReflectanceSet> reflectances( const std::string &path )
    {
        _stage = "loading reflectances";
        if ( path.empty() )
            throw InputError( "--reflectances is required" );
        _manifest.add_input( path );
        return std::make_shared<const ReflectanceSet>( load_reflectances( path, _grid ) );
    }

    FilterCurve filter_file( const std::string &path )
    {
        _manifest.add_input( path );
        const auto table = load_table( path );
        if ( table.columns() != 1 )
        {
            std::ostringstream msg;
            msg << path << ": a filter file needs exactly one value column, found "
                << table.columns();
            throw InputError( msg.str() );
        }
        return FilterCurve( _grid, resample( table, _grid ).col( 0 ) );
    }

    fs::path output( const std::string &name )
    {
        const fs::path dir( _common.out );
        std::error_code ec;
        fs::create_directories( dir, ec );
        if ( ec )
            throw InputError( "cannot create output directory '" + dir.string() + "'" );
        const auto path = dir / name;
        _manifest.add_output( path );
        return path;
    }

    void finish()
    {
        _stage = "writing manifest";
        _manifest.write( _common.out );
    }

private:
    CommonFlags  _common;
    SpectralGrid _grid;
    RunManifest  _manifest;
    std::string  _stage = "starting";
};

AlsOptions als_options( const CommonFlags &c )
{
    AlsOptions o;
    o.epsilon        = c.eps;
    o.max_iterations = c.max_iter;
    return o;
}

ConstraintSpec constraint_spec( const DataFlags &d, const SpectralGrid &grid )
{
    if ( d.positive )
    {
        if ( d.basis > 0 )
            throw InputError( "--positive and --basis are mutually exclusive" );
        return ConstraintSpec::positive_only( d.fmin_set ? d.fmin : 0.0 );
    }
    if ( d.basis > 0 )
        return ConstraintSpec::basis_bounded( cosine_basis( grid, d.basis ), d.fmin, d.fmax );
    // Bounds alone: the complete cosine basis spans every filter, so only
    // the box remains.
    if ( d.fmin_set || d.fmax_set )
        return ConstraintSpec::basis_bounded(
            cosine_basis( grid, static_cast<int>( grid.size() ) ), d.fmin, d.fmax );
    return ConstraintSpec::unconstrained();
}

json constraint_json( const ConstraintSpec &c )
{
    json j;
    switch ( c.mode )
    {
        case ConstraintMode::Unconstrained: j["mode"] = "unconstrained"; break;
        case ConstraintMode::PositiveOnly:
            j["mode"]  = "positive-only";
            j["f_min"] = c.positive_lower_bound();
            break;
        case ConstraintMode::BasisBounded:
            j["mode"]        = "basis-bounded";
            j["basis_terms"] = c.basis->terms();
            j["f_min"]       = c.f_min;
            j["f_max"]       = c.f_max;
            break;
    }
    return j;
}

json trace_json( const AlsTrace &t )
{
    return { { "iterations", t.iterations },
             { "converged", t.converged },
             { "epsilon", t.epsilon },
             { "final_objective", t.objective.empty() ? 0.0 : sig9( t.objective.back() ) },
             { "final_step_change",
               t.step_change.empty() ? 0.0 : sig9( t.step_change.back() ) } };
}

json evaluation_json( const Evaluation &e )
{
    json per = json::array();
    for ( const auto &i : e.per_illuminant )
        per.push_back( { { "illuminant", i.illuminant }, { "stats", to_json( i.stats ) } } );
    return { { "per_illuminant", per }, { "aggregate", to_json( e.aggregate ) } };
}

struct Training
{
    SensorSet                             camera;
    SensorSet                             cmfs;
    std::vector<Spectrum>                 illuminants;
    std::shared_ptr<const ReflectanceSet> reflectances;
    Scenario                              scenario;
};

Training load_training( Session &s, const DataFlags &d )
{
    auto camera = s.camera();
    auto cmfs   = s.cmfs();
    auto ills   = s.illuminants( d.illuminants );
    auto refl   = s.reflectances( d.reflectances );

    s.stage() = "building colour signals";
    std::vector<ColorSignalSet> signals;
    for ( const auto &e : ills )
        signals.push_back( color_signal( e, refl ) );

    const std::string mode = lower( d.mode );
    if ( mode != "fixed-target" && !d.target.empty() )
        throw InputError( "--target only applies to --mode fixed-target" );
    if ( mode == "per-light" )
        return { camera, cmfs, ills, refl, Scenario::per_light( signals, cmfs ) };
    if ( mode == "single" )
    {
        if ( signals.size() != 1 )
            throw InputError( "--mode single needs exactly one illuminant" );
        return { camera, cmfs, ills, refl, Scenario::single_light( signals.front(), cmfs ) };
    }
    if ( mode == "fixed-target" )
    {
        if ( d.target.empty() )
            throw InputError( "--mode fixed-target requires --target NAME" );
        std::optional<Spectrum> target;
        for ( const auto &e : ills )
            if ( lower( e.name() ) == lower( d.target ) )
                target = e;
        if ( !target )
            target = s.resolve_illuminant( d.target ).front();
        auto ts = color_signal( *target, refl );
        return { camera, cmfs, ills, refl, Scenario::fixed_target( signals, ts, cmfs ) };
    }
    throw InputError( "--mode must be per-light, fixed-target or single, got '" + d.mode + "'" );
}

void write_result(
    Session &s, const Training &t, const DataResult &r, const ConstraintSpec &cons,
    json report )
{
    s.stage() = "evaluating";
    const auto eval = evaluate( t.camera, r.filter, t.illuminants, *t.reflectances, t.cmfs );

    s.stage() = "writing outputs";
    write_filter_csv( s.output( "filter.csv" ), r.filter );
    json maps = json::array();
    for ( std::size_t j = 0; j < r.maps.size(); ++j )
        maps.push_back( { { "signal_set", t.scenario.signals()[j].label() },
                          { "matrix", to_json( r.maps[j].matrix() ) } } );
    write_json( s.output( "matrix.json" ), { { "maps", maps } } );
    write_trace_csv( s.output( "trace.csv" ), r.trace );
    write_sensitivities_csv( s.output( "sensitivities.csv" ), t.camera, r.filter );
    write_stats_csv( s.output( "stats.csv" ), eval );

    const auto pos         = check_positivity( r.filter );
    report["seed"]         = r.seed_id;
    report["seed_projected"] = r.seed_projected;
    report["regularized"]  = r.regularized;
    report["constraints"]  = constraint_json( cons );
    report["objective"]    = sig9( objective( t.camera, t.scenario, r.filter, r.maps ) );
    report["trace"]        = trace_json( r.trace );
    report["min_transmittance"]    = sig9( pos.min_value );
    report["min_transmittance_nm"] = pos.min_wavelength;
    report["max_transmittance"]    = sig9( r.filter.max() );
    report["vora_before"] = sig9( vora_value( t.camera, t.cmfs ) );
    report["vora_after"]  = sig9( vora_value( apply_filter( t.camera, r.filter ), t.cmfs ) );
    report["evaluation"]  = evaluation_json( eval );
    write_json( s.output( "report.json" ), report );
    s.finish();
}

//	=====================================================================
//	Commands
//

void cmd_luther( Session &s, const CommonFlags &c, std::ostream &out )
{
    const auto camera = s.camera();
    const auto cmfs   = s.cmfs();
    s.manifest().parameters()["eps"]      = c.eps;
    s.manifest().parameters()["max_iter"] = c.max_iter;

    s.stage()    = "optimising";
    const auto r = optimize_luther( camera, cmfs, als_options( c ) );

    s.stage() = "writing outputs";
    write_filter_csv( s.output( "filter.csv" ), r.filter );
    write_json( s.output( "matrix.json" ), { { "matrix", to_json( r.map.matrix() ) } } );
    write_trace_csv( s.output( "trace.csv" ), r.trace );
    write_sensitivities_csv( s.output( "sensitivities.csv" ), camera, r.filter );
    const auto pos = check_positivity( r );
    json       report{
        { "vora_before", sig9( r.vora_before ) },
        { "vora_after", sig9( r.vora_after ) },
        { "objective", sig9( luther_objective( camera, cmfs, r.filter, r.map ) ) },
        { "min_transmittance", sig9( pos.min_value ) },
        { "min_transmittance_nm", pos.min_wavelength },
        { "all_positive", pos.all_positive },
        { "zero_rows", r.zero_rows },
        { "trace", trace_json( r.trace ) } };
    write_json( s.output( "report.json" ), report );
    s.finish();
    out << "luther: vora " << r.vora_before << " -> " << r.vora_after << ", "
        << r.trace.iterations << " iterations"
        << ( r.trace.converged ? "" : " (not converged)" ) << '\n';
}

FilterCurve initial_filter(
    Session &s, const Training &t, const DataFlags &d, const CommonFlags &c )
{
    s.stage()            = "preparing seed";
    const std::string sd = lower( d.seed );
    if ( sd == "ones" )
        return FilterCurve::ones( s.grid() );
    if ( sd == "luther" )
        return optimize_luther( t.camera, t.cmfs, als_options( c ) ).filter;
    return s.filter_file( d.seed );
}

void cmd_data( Session &s, const CommonFlags &c, const DataFlags &d, std::ostream &out )
{
    const auto training = load_training( s, d );
    s.stage()           = "validating constraints";
    const auto cons     = constraint_spec( d, s.grid() );
    cons.validate( s.grid() );
    const auto seed = initial_filter( s, training, d, c );

    auto &p       = s.manifest().parameters();
    p["mode"]     = lower( d.mode );
    p["seed"]     = d.seed;
    p["eps"]      = c.eps;
    p["max_iter"] = c.max_iter;
    p["constraints"] = constraint_json( cons );

    s.stage()    = "optimising";
    const auto r = optimize_data(
        training.camera, training.scenario, seed, cons, als_options( c ), d.seed );
    write_result( s, training, r, cons, json::object() );
    out << "data: objective " << r.trace.objective.back() << " after " << r.trace.iterations
        << " iterations" << ( r.trace.converged ? "" : " (not converged)" ) << '\n';
}

SeedSet make_seeds( Session &s, const DataFlags &d, const SeedFlags &sf )
{
    if ( d.basis < 1 )
        throw InputError( "seed generation requires --basis M" );
    if ( sf.count < 1 )
        throw InputError( "--count must be at least 1" );
    s.stage()  = "generating seeds";
    auto &p    = s.manifest().parameters();
    p["basis_terms"] = d.basis;
    p["f_min"]       = d.fmin;
    p["f_max"]       = d.fmax;
    p["count"]       = sf.count;
    p["theta_deg"]   = sf.theta;
    p["rng_seed"]    = sf.rng_seed;
    return generate_seed_set(
        cosine_basis( s.grid(), d.basis ), d.fmin, d.fmax,
        static_cast<std::size_t>( sf.count ), sf.theta, sf.rng_seed );
}

void cmd_seeds( Session &s, const DataFlags &d, const SeedFlags &sf, std::ostream &out )
{
    const auto set  = make_seeds( s, d, sf );
    const auto diag = diagnose( set );
    s.stage()       = "writing outputs";
    write_seeds_csv( s.output( "seeds.csv" ), set.filters );
    json cmin = json::array(), cmax = json::array();
    for ( Eigen::Index k = 0; k < set.c_min.size(); ++k )
    {
        cmin.push_back( sig9( set.c_min( k ) ) );
        cmax.push_back( sig9( set.c_max( k ) ) );
    }
    write_json(
        s.output( "seeds.json" ),
        { { "count", set.size() },
          { "samples_drawn", set.samples_drawn },
          { "c_min", cmin },
          { "c_max", cmax },
          { "nearest_neighbour_deg",
            { { "mean", sig9( diag.mean_nearest ) },
              { "max", sig9( diag.max_nearest ) },
              { "min", sig9( diag.min_nearest ) } } } } );
    s.finish();
    out << "seeds: " << set.size() << " filters from " << set.samples_drawn
        << " samples, mean nearest-neighbour angle " << diag.mean_nearest << " deg\n";
}

void cmd_multistart(
    Session &s, const CommonFlags &c, const DataFlags &d, const SeedFlags &sf,
    std::ostream &out )
{
    const auto training = load_training( s, d );
    if ( d.basis < 1 )
        throw InputError( "multistart requires --basis M" );
    s.stage()       = "validating constraints";
    const auto cons = constraint_spec( d, s.grid() );
    cons.validate( s.grid() );

    SelectionMetric metric;
    const auto      m = lower( sf.metric );
    if ( m == "objective" )
        metric = SelectionMetric::Objective;
    else if ( m == "mean-de" )
        metric = SelectionMetric::MeanDeltaE;
    else
        throw InputError( "--metric must be objective or mean-de, got '" + sf.metric + "'" );

    std::vector<FilterCurve> seeds;
    if ( !sf.seeds_file.empty() )
    {
        s.stage() = "loading seeds";
        s.manifest().add_input( sf.seeds_file );
        const auto table = load_table( sf.seeds_file );
        const auto v     = resample( table, s.grid() );
        for ( Eigen::Index k = 0; k < v.cols(); ++k )
            seeds.emplace_back( s.grid(), v.col( k ) );
    }
    else
        seeds = make_seeds( s, d, sf ).filters;

    auto &p       = s.manifest().parameters();
    p["mode"]     = lower( d.mode );
    p["metric"]   = m;
    p["eps"]      = c.eps;
    p["max_iter"] = c.max_iter;
    p["constraints"] = constraint_json( cons );

    s.stage() = "optimising";
    MultiStartOptions opts;
    opts.als  = als_options( c );
    opts.jobs = c.jobs;
    const auto result =
        multi_start( training.camera, training.scenario, cons, seeds, metric, opts );

    s.stage() = "writing outputs";
    write_seeds_csv( s.output( "seeds.csv" ), seeds );
    write_ranking_csv( s.output( "ranking.csv" ), result );
    const auto &best = result.best();
    json        report;
    report["metric"]        = m;
    report["best_metric"]   = sig9( best.metric );
    report["seeds"]         = seeds.size();
    report["failed_seeds"]  = seeds.size() - result.ranking.size();
    write_result( s, training, *best.result, cons, report );
    out << "multistart: best " << best.seed_id << " with " << m << ' ' << best.metric << " ("
        << result.ranking.size() << " of " << seeds.size() << " seeds succeeded)\n";
}

void cmd_eval( Session &s, const EvalFlags &e, std::ostream &out )
{
    const auto camera = s.camera();
    const auto cmfs   = s.cmfs();
    const auto ills   = s.illuminants( e.illuminants );
    const auto refl   = s.reflectances( e.reflectances );
    std::optional<FilterCurve> filter;
    if ( lower( e.filter ) != "none" )
    {
        s.stage() = "loading filter";
        filter    = s.filter_file( e.filter );
    }
    s.manifest().parameters()["filter"] = e.filter;

    s.stage()       = "evaluating";
    const auto eval = evaluate( camera, filter, ills, *refl, cmfs );

    s.stage() = "writing outputs";
    write_stats_csv( s.output( "stats.csv" ), eval );
    const auto filtered = filter ? apply_filter( camera, *filter ) : camera;
    json       report   = evaluation_json( eval );
    report["vora"]      = sig9( vora_value( filtered, cmfs ) );
    write_json( s.output( "report.json" ), report );
    s.finish();
    out << "eval: aggregate mean dE " << eval.aggregate.mean << " over " << ills.size()
        << " illuminants\n";
}

//	=====================================================================
//	Flag registration
//

void add_common( CLI::App *cmd, CommonFlags &c, bool needs_camera )
{
    auto *cam = cmd->add_option( "--camera", c.camera, "camera sensitivities CSV (3 columns)" );
    if ( needs_camera )
        cam->required();
    cmd->add_option( "--cmf", c.cmf, "colour matching functions: builtin or CSV" )
        ->capture_default_str();
    cmd->add_option( "--grid", c.grid, "working grid START:END:STEP in nm" )
        ->capture_default_str();
    cmd->add_option( "--out", c.out, "output directory" )->required();
}

void add_als( CLI::App *cmd, CommonFlags &c )
{
    cmd->add_option( "--eps", c.eps, "stopping threshold on the squared step" )
        ->capture_default_str();
    cmd->add_option( "--max-iter", c.max_iter, "iteration cap" )->capture_default_str();
}

void add_bounds( CLI::App *cmd, DataFlags &d )
{
    cmd->add_option( "--basis", d.basis, "cosine basis terms" );
    cmd->add_option( "--fmin", d.fmin, "minimum transmittance" )
        ->each( [&d]( const std::string & ) { d.fmin_set = true; } );
    cmd->add_option( "--fmax", d.fmax, "maximum transmittance" )
        ->each( [&d]( const std::string & ) { d.fmax_set = true; } );
}

void add_data( CLI::App *cmd, DataFlags &d )
{
    cmd->add_option( "--illuminants", d.illuminants, "builtin names or CSV files" )
        ->required()
        ->delimiter( ',' );
    cmd->add_option( "--reflectances", d.reflectances, "reflectance CSV" )->required();
    cmd->add_option( "--mode", d.mode, "per-light, fixed-target or single" )
        ->capture_default_str();
    cmd->add_option( "--target", d.target, "target illuminant for fixed-target mode" );
    cmd->add_option( "--seed", d.seed, "initial filter: ones, luther or a CSV file" )
        ->capture_default_str();
    cmd->add_flag( "--positive", d.positive, "only require a positive filter" );
    add_bounds( cmd, d );
}

void add_seeding( CLI::App *cmd, SeedFlags &sf )
{
    cmd->add_option( "--count", sf.count, "number of seed filters" )->capture_default_str();
    cmd->add_option( "--theta", sf.theta, "minimum pairwise angle in degrees" )
        ->capture_default_str();
    cmd->add_option( "--rng-seed", sf.rng_seed, "random generator seed" )
        ->capture_default_str();
}

void report_error(
    std::ostream &err, const std::string &command, const std::string &stage,
    const std::string &what )
{
    err << "chromafit " << command << ": " << stage << ": " << what << '\n';
}

} // namespace

int run( int argc, const char *const *argv, std::ostream &out, std::ostream &err )
{
    CLI::App app{ "Design camera filters that approach colorimetric response.", "chromafit" };
    app.set_version_flag( "--version", CHROMAFIT_VERSION );
    app.require_subcommand( 1 );

    CommonFlags common;
    DataFlags   data;
    SeedFlags   seeding;
    EvalFlags   eval;

    auto *luther = app.add_subcommand( "luther", "fit a filter to the Luther condition" );
    add_common( luther, common, true );
    add_als( luther, common );

    auto *dat = app.add_subcommand( "data", "fit a filter to training lights and surfaces" );
    add_common( dat, common, true );
    add_als( dat, common );
    add_data( dat, data );

    auto *seeds = app.add_subcommand( "seeds", "sample a diverse set of feasible filters" );
    seeds->add_option( "--grid", common.grid, "working grid START:END:STEP in nm" )
        ->capture_default_str();
    seeds->add_option( "--out", common.out, "output directory" )->required();
    add_bounds( seeds, data );
    add_seeding( seeds, seeding );

    auto *multi = app.add_subcommand( "multistart", "run the data fit from many seeds" );
    add_common( multi, common, true );
    add_als( multi, common );
    add_data( multi, data );
    add_seeding( multi, seeding );
    multi->add_option( "--seeds", seeding.seeds_file, "seed CSV instead of sampling" );
    multi->add_option( "--metric", seeding.metric, "objective or mean-de" )
        ->capture_default_str();
    multi->add_option( "--jobs", common.jobs, "parallel optimisations" )->capture_default_str();

    auto *ev = app.add_subcommand( "eval", "report colour errors of a camera and filter" );
    add_common( ev, common, true );
    ev->add_option( "--illuminants", eval.illuminants, "builtin names or CSV files" )
        ->required()
        ->delimiter( ',' );
    ev->add_option( "--reflectances", eval.reflectances, "reflectance CSV" )->required();
    ev->add_option( "--filter", eval.filter, "filter CSV or none" )->capture_default_str();

    try
    {
        app.parse( argc, argv );
    }
    catch ( const CLI::ParseError &e )
    {
        const int code = app.exit( e, out, err );
        return code == 0 ? Success : InputFault;
    }

    std::vector<std::string> args( argv + 1, argv + argc );
    std::string              command = app.get_subcommands().front()->get_name();
    std::unique_ptr<Session> session;
    try
    {
        session = std::make_unique<Session>( command, common, args );
        if ( command == "luther" )
            cmd_luther( *session, common, out );
        else if ( command == "data" )
            cmd_data( *session, common, data, out );
        else if ( command == "seeds" )
            cmd_seeds( *session, data, seeding, out );
        else if ( command == "multistart" )
            cmd_multistart( *session, common, data, seeding, out );
        else
            cmd_eval( *session, eval, out );
        return Success;
    }
    catch ( const InfeasibleError &e )
    {
        // Contradictory bounds are a property of the request, not of the data.
        report_error( err, command, session ? session->stage() : "arguments", e.what() );
        return InputFault;
    }
    catch ( const InputError &e )
    {
        report_error( err, command, session ? session->stage() : "arguments", e.what() );
        return InputFault;
    }
    catch ( const fs::filesystem_error &e )
    {
        report_error( err, command, session ? session->stage() : "arguments", e.what() );
        return InputFault;
    }
    catch ( const std::exception &e )
    {
        report_error( err, command, session ? session->stage() : "arguments", e.what() );
        return NumericalFault;
    }
}

int run( const std::vector<std::string> &args, std::ostream &out, std::ostream &err )
{
    std::vector<const char *> argv{ "chromafit" };
    for ( const auto &a : args )
        argv.push_back( a.c_str() );
    return run( static_cast<int>( argv.size() ), argv.data(), out, err );
}

} // namespace chromafit::app
