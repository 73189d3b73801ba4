// SPDX-License-Identifier: Apache-2.0
// Copyright Contributors to the chromafit Project.

#pragma once

#include <chromafit/spectral.hpp>

#include <vector>

namespace chromafit
{

/// Convergence controls shared by both ALS optimisers.
struct AlsOptions
{
    /// Stop when ‖Q^i − Q^{i−1}‖_F² drops below this.
    double epsilon        = 1e-8;
    int    max_iterations = 500;
};

struct AlsTrace
{
    std::vector<double> objective;   ///< objective after each iteration
    std::vector<double> step_change; ///< ‖Q^i − Q^{i−1}‖_F² (max over j)
    int                 iterations = 0;
    bool                converged  = false;
    double              epsilon    = 0.0;
};

struct LutherResult
{
    FilterCurve              filter;   ///< normalized to max |f| = 1
    CorrectionMatrix         map;
    AlsTrace                 trace;
    double                   vora_before = 0.0;
    double                   vora_after  = 0.0;
    std::vector<std::size_t> zero_rows;  ///< rows hit by the alpha = 0 rule
};

/// Alternating least squares for  min_{f,M} ‖diag(f) Q M − X‖_F².
///
/// Each iteration fits per-row scalars (the filter step) and then the 3x3
/// map, and folds both into the running sensor set
/// Q^i = diag(f^i) Q^{i−1} M^i. The returned filter is the componentwise
/// product of the per-iteration filters and the map is the ordered product
/// M^1 M^2 ... M^i, rescaled so the filter entry of largest magnitude is 1.
LutherResult optimize_luther(
    const SensorSet &camera, const SensorSet &cmfs, const AlsOptions &options = {} );

/// ‖diag(f) Q M − X‖_F².
double luther_objective(
    const SensorSet &camera, const SensorSet &cmfs, const FilterCurve &filter,
    const CorrectionMatrix &map );

struct PositivityReport
{
    double                   min_value    = 0.0;
    double                   min_wavelength = 0.0;
    bool                     all_positive = false;
    std::vector<std::size_t> nonpositive;  ///< grid indices with f <= 0
};

PositivityReport check_positivity( const FilterCurve &filter );
PositivityReport check_positivity( const LutherResult &result );

} // namespace chromafit
