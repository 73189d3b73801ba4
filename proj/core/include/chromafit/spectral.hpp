// SPDX-License-Identifier: Apache-2.0
// Copyright Contributors to the chromafit Project.

#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace chromafit
{

using Vector    = Eigen::VectorXd;
using Matrix    = Eigen::MatrixXd;
using MatrixX3  = Eigen::Matrix<double, Eigen::Dynamic, 3>;
using Matrix3   = Eigen::Matrix3d;
using Vector3   = Eigen::Vector3d;

//	=====================================================================
//	SpectralGrid
//
//	Ordered wavelength samples (nm) shared by every spectral object taking
//	part in one computation. The sampling interval is folded into the
//	sensitivity values, so no delta-lambda factor appears anywhere.
//
class SpectralGrid
{
public:
    /// 400..700 nm inclusive at 10 nm (31 samples).
    SpectralGrid();
    explicit SpectralGrid( std::vector<double> wavelengths );

    static SpectralGrid uniform( double start, double end, double step );

    std::size_t size() const noexcept { return _wavelengths.size(); }
    double      operator[]( std::size_t i ) const { return _wavelengths[i]; }
    double      front() const { return _wavelengths.front(); }
    double      back() const { return _wavelengths.back(); }

    std::span<const double> wavelengths() const noexcept
    {
        return _wavelengths;
    }

    bool operator==( const SpectralGrid &other ) const = default;

private:
    std::vector<double> _wavelengths;
};

/// Throws InputError naming `what` when the two grids differ.
void require_same_grid(
    const SpectralGrid &a, const SpectralGrid &b, std::string_view what );

enum class SpectrumKind
{
    Illuminant,
    Reflectance,
    ColorSignal,
    Sensitivity,
    MatchingFunction
};

class Spectrum
{
public:
    Spectrum(
        SpectralGrid grid,
        Vector       values,
        SpectrumKind kind,
        std::string  name = {} );

    const SpectralGrid &grid() const noexcept { return _grid; }
    const Vector       &values() const noexcept { return _values; }
    SpectrumKind        kind() const noexcept { return _kind; }
    const std::string  &name() const noexcept { return _name; }

private:
    SpectralGrid _grid;
    Vector       _values;
    SpectrumKind _kind;
    std::string  _name;
};

/// Three sensitivity columns (camera RGB or colour matching functions)
/// sampled on a grid: an N x 3 matrix.
class SensorSet
{
public:
    SensorSet( SpectralGrid grid, MatrixX3 values, std::string name = {} );

    const SpectralGrid &grid() const noexcept { return _grid; }
    const MatrixX3     &values() const noexcept { return _values; }
    const std::string  &name() const noexcept { return _name; }

    /// Wavelength indices holding a negative entry (measurement noise).
    std::vector<std::size_t> negative_rows() const;

private:
    SpectralGrid _grid;
    MatrixX3     _values;
    std::string  _name;
};

/// Per-wavelength transmittance.
class FilterCurve
{
public:
    FilterCurve( SpectralGrid grid, Vector values );

    static FilterCurve ones( const SpectralGrid &grid );
    static FilterCurve constant( const SpectralGrid &grid, double value );

    const SpectralGrid &grid() const noexcept { return _grid; }
    const Vector       &values() const noexcept { return _values; }
    std::size_t         size() const noexcept { return _grid.size(); }

    double min() const { return _values.minCoeff(); }
    double max() const { return _values.maxCoeff(); }

private:
    SpectralGrid _grid;
    Vector       _values;
};

/// Reflectance spectra, one per column.
class ReflectanceSet
{
public:
    ReflectanceSet(
        SpectralGrid grid, Matrix values, std::vector<std::string> names = {} );

    const SpectralGrid             &grid() const noexcept { return _grid; }
    const Matrix                   &values() const noexcept { return _values; }
    const std::vector<std::string> &names() const noexcept { return _names; }
    std::size_t count() const noexcept { return _values.cols(); }

private:
    SpectralGrid             _grid;
    Matrix                   _values;
    std::vector<std::string> _names;
};

/// Colour signals (illuminant x reflectance), one spectrum per column.
/// When produced by color_signal() the set remembers its illuminant and
/// reflectances so evaluation can rebuild white points.
class ColorSignalSet
{
public:
    ColorSignalSet( SpectralGrid grid, Matrix values, std::string label = {} );

    const SpectralGrid &grid() const noexcept { return _grid; }
    const Matrix       &values() const noexcept { return _values; }
    const std::string  &label() const noexcept { return _label; }
    std::size_t count() const noexcept { return _values.cols(); }

    const std::optional<Spectrum> &illuminant() const noexcept
    {
        return _illuminant;
    }
    const std::shared_ptr<const ReflectanceSet> &reflectances() const noexcept
    {
        return _reflectances;
    }

private:
    friend ColorSignalSet color_signal(
        const Spectrum &, const std::shared_ptr<const ReflectanceSet> & );

    SpectralGrid                          _grid;
    Matrix                                _values;
    std::string                           _label;
    std::optional<Spectrum>               _illuminant;
    std::shared_ptr<const ReflectanceSet> _reflectances;
};

/// 3x3 linear map applied on the right: responses * M ~ XYZ.
class CorrectionMatrix
{
public:
    CorrectionMatrix();
    explicit CorrectionMatrix( const Matrix3 &m );

    const Matrix3 &matrix() const noexcept { return _m; }
    bool           full_rank( double tolerance = 1e-12 ) const;

private:
    Matrix3 _m;
};

/// Cᵀ · sensors: row i is the response of sensor set to signal column i.
MatrixX3 responses( const ColorSignalSet &signals, const SensorSet &sensors );

/// diag(f) · Q.
SensorSet apply_filter( const SensorSet &sensors, const FilterCurve &filter );

/// Columnwise product of an illuminant with each reflectance.
ColorSignalSet color_signal(
    const Spectrum                              &illuminant,
    const std::shared_ptr<const ReflectanceSet> &reflectances );
ColorSignalSet
color_signal( const Spectrum &illuminant, const ReflectanceSet &reflectances );

} // namespace chromafit
