// SPDX-License-Identifier: Apache-2.0
// Copyright Contributors to the chromafit Project.

#pragma once

#include <chromafit/luther.hpp>
#include <chromafit/metrics.hpp>
#include <chromafit/seeding.hpp>
#include <chromafit/spectral.hpp>

#include <json.hpp>

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace chromafit::app
{

using json = nlohmann::ordered_json;

/// x rounded to 9 significant digits, the precision of every output file.
double sig9( double x );

json to_json( const Matrix3 &m );
json to_json( const ErrorStats &s );

std::string sha256_file( const std::filesystem::path &path );

void write_json( const std::filesystem::path &path, const json &doc );
void write_filter_csv( const std::filesystem::path &path, const FilterCurve &filter );
void write_sensitivities_csv(
    const std::filesystem::path &path, const SensorSet &camera,
    const std::optional<FilterCurve> &filter );
void write_trace_csv( const std::filesystem::path &path, const AlsTrace &trace );
void write_stats_csv( const std::filesystem::path &path, const Evaluation &evaluation );
void write_seeds_csv( const std::filesystem::path &path, const std::vector<FilterCurve> &seeds );
void write_ranking_csv( const std::filesystem::path &path, const MultiStartResult &result );

/// Inputs, parameters and output digests of one run.
class RunManifest
{
public:
    RunManifest( std::string command, std::vector<std::string> arguments );

    void add_input( const std::filesystem::path &path );
    void add_output( const std::filesystem::path &path );
    json &parameters() noexcept { return _parameters; }

    /// Writes manifest.json into `dir`.
    void write( const std::filesystem::path &dir ) const;

private:
    std::string                        _command;
    std::vector<std::string>           _arguments;
    std::vector<std::filesystem::path> _inputs;
    std::vector<std::filesystem::path> _outputs;
    json                               _parameters = json::object();
};

} // namespace chromafit::app
