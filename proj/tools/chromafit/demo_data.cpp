// SPDX-License-Identifier: Apache-2.0
// Copyright Contributors to the chromafit Project.

// Writes a small synthetic dataset (camera, reflectances, extra lights) for
// trying the chromafit tool without external measurements.

#include <chromafit/data_io.hpp>
#include <chromafit/error.hpp>
#include <chromafit/synthetic.hpp>

#include <CLI11.hpp>

#include <filesystem>
#include <iostream>

int main( int argc, char **argv )
{
    using namespace chromafit;
    CLI::App      app{ "Generate a synthetic chromafit dataset.", "chromafit_demo_data" };
    std::string   out;
    std::size_t   count = 300;
    std::uint64_t seed  = 1;
    app.add_option( "out", out, "output directory" )->required();
    app.add_option( "--count", count, "number of reflectances" )->capture_default_str();
    app.add_option( "--rng-seed", seed, "random generator seed" )->capture_default_str();
    CLI11_PARSE( app, argc, argv );

    try
    {
        const std::filesystem::path dir( out );
        std::filesystem::create_directories( dir );
        const SpectralGrid grid;
        synthetic::Random  rng( seed );

        const auto camera = synthetic::gaussian_camera( grid );
        save_table( dir / "camera.csv",
                    make_table( grid, Matrix( camera.values() ), { "r", "g", "b" } ) );

        const auto refl = synthetic::smooth_reflectances( grid, count, rng );
        save_table( dir / "reflectances.csv", make_table( grid, refl.values(), refl.names() ) );

        Matrix lights( static_cast<Eigen::Index>( grid.size() ), 2 );
        lights.col( 0 ) = synthetic::planckian( grid, 4000.0 ).values();
        lights.col( 1 ) = synthetic::planckian( grid, 10000.0 ).values();
        save_table( dir / "illuminants.csv", make_table( grid, lights, { "P4000", "P10000" } ) );

        std::cout << "wrote camera.csv, reflectances.csv, illuminants.csv to " << dir << '\n';
        return 0;
    }
    catch ( const std::exception &e )
    {
        std::cerr << "chromafit_demo_data: " << e.what() << '\n';
        return 2;
    }
}
