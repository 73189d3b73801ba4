// SPDX-License-Identifier: Apache-2.0
// Copyright Contributors to the chromafit Project.

#pragma once

#include <chromafit/spectral.hpp>

#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace chromafit
{

/// A wavelength column plus named value columns, as read from CSV.
///
/// File layout: UTF-8, header row `wavelength_nm,<name>,<name>...`, one row
/// per wavelength, `.` as decimal point, lines starting with `#` ignored.
struct SpectralTable
{
    std::string              source;
    std::vector<double>      wavelengths;
    std::vector<std::string> names;
    Matrix                   values; ///< rows = wavelengths, cols = names

    std::size_t rows() const noexcept { return wavelengths.size(); }
    std::size_t columns() const noexcept { return names.size(); }
    /// Index of a named column; throws InputError if absent.
    std::size_t column( std::string_view name ) const;
};

SpectralTable load_table( const std::filesystem::path &path );
SpectralTable parse_table( std::istream &in, std::string source );

/// Writes with 9 significant digits.
void write_table( std::ostream &out, const SpectralTable &table );
void save_table( const std::filesystem::path &path, const SpectralTable &table );

SpectralTable make_table(
    const SpectralGrid      &grid,
    const Matrix            &values,
    std::vector<std::string> names,
    std::string              source = {} );

/// Piecewise-linear interpolation of every column at the grid wavelengths.
/// Never extrapolates: a grid outside the table range is an InputError.
Matrix resample( const SpectralTable &table, const SpectralGrid &grid );

// Convenience loaders on top of load_table + resample.
SensorSet      load_sensor_set( const std::filesystem::path &path, const SpectralGrid &grid );
ReflectanceSet load_reflectances( const std::filesystem::path &path, const SpectralGrid &grid );
std::vector<Spectrum> load_illuminants( const std::filesystem::path &path, const SpectralGrid &grid );

SensorSet      sensor_set_from_table( const SpectralTable &table, const SpectralGrid &grid );

/// CIE 1931 2-degree observer colour matching functions on `grid`.
///
/// When CHROMAFIT_DATA_DIR is set the table is read from
/// `$CHROMAFIT_DATA_DIR/cie1931_2deg.csv` instead of the built-in copy.
SensorSet reference_cmfs( const SpectralGrid &grid = SpectralGrid() );

/// CIE standard illuminant "D65" or "A" (case-insensitive), relative
/// power 100 at 560 nm. CHROMAFIT_DATA_DIR overrides with
/// `illuminant_<name>.csv` (lower-case name).
Spectrum reference_illuminant(
    std::string_view name, const SpectralGrid &grid = SpectralGrid() );

/// Names accepted by reference_illuminant.
std::vector<std::string> reference_illuminant_names();

/// The built-in tables at their native sampling (for export and tests).
SpectralTable builtin_cmf_table();
SpectralTable builtin_illuminant_table( std::string_view name );

} // namespace chromafit
