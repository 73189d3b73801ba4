// SPDX-License-Identifier: Apache-2.0
// Copyright Contributors to the chromafit Project.

#pragma once

#include <chromafit/spectral.hpp>

#include <optional>
#include <span>
#include <string>
#include <vector>

namespace chromafit
{

/// Vora-Value  Trace(Q Q⁺ X X⁺) / 3, in [0, 1]; 1 iff span(Q) == span(X).
double vora_value( const MatrixX3 &q, const MatrixX3 &x );
double vora_value( const SensorSet &q, const SensorSet &x );

struct LabColor
{
    double  l = 0.0;
    double  a = 0.0;
    double  b = 0.0;
    Vector3 white = Vector3::Ones();
};

/// CIE 1976 L*a*b* relative to `white` (cube root above (6/29)³, linear
/// segment below).
LabColor xyz_to_lab( const Vector3 &xyz, const Vector3 &white );

/// Euclidean distance in L*a*b*; both colours must share a white point.
double delta_e( const LabColor &a, const LabColor &b );

struct ErrorStats
{
    double mean   = 0.0;
    double median = 0.0;
    double p90    = 0.0;
    double p95    = 0.0;
    double p99    = 0.0;
    double max    = 0.0;
};

/// Percentile with linear interpolation between order statistics:
/// position q * (n - 1) in the sorted sample.
double percentile( std::span<const double> sorted, double q );

ErrorStats summarize( std::vector<double> errors );

struct IlluminantEvaluation
{
    std::string         illuminant;
    ErrorStats          stats;
    std::vector<double> delta_e;   ///< one per reflectance
    CorrectionMatrix    map;       ///< fitted RGB -> XYZ
};

struct Evaluation
{
    std::vector<IlluminantEvaluation> per_illuminant;
    /// Mean of each statistic over illuminants.
    ErrorStats aggregate;
};

/// ΔE*ab of the least-squares colour correction of `rgb` to `xyz`, both
/// n x 3, with Lab taken relative to `white`.
IlluminantEvaluation evaluate_correction(
    const MatrixX3 &rgb, const MatrixX3 &xyz, const Vector3 &white, std::string name = {} );

/// Per illuminant: ground truth Cᵀ X, (filtered) responses Cᵀ diag(f) Q, a
/// fresh unweighted least-squares 3x3 correction, ΔE against the XYZ of
/// the perfect reflector under that illuminant.
Evaluation evaluate(
    const SensorSet               &camera,
    const std::optional<FilterCurve> &filter,
    std::span<const Spectrum>      illuminants,
    const ReflectanceSet          &reflectances,
    const SensorSet               &cmfs );

} // namespace chromafit
