// SPDX-License-Identifier: Apache-2.0
// Copyright Contributors to the chromafit Project.

#pragma once

#include <chromafit/basis.hpp>
#include <chromafit/data_opt.hpp>
#include <chromafit/spectral.hpp>

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace chromafit
{

struct SeedSet
{
    std::vector<FilterCurve> filters;
    BasisMatrix              basis;
    double                   f_min     = 0.0;
    double                   f_max     = 1.0;
    double                   theta_deg = 1.0;
    std::uint64_t            rng_seed  = 0;
    Vector                   c_min;  ///< hypercube lower corner
    Vector                   c_max;  ///< hypercube upper corner
    std::size_t              samples_drawn = 0;

    std::size_t size() const noexcept { return filters.size(); }
};

struct SeedOptions
{
    /// Consecutive rejections after which generation gives up.
    std::size_t stall_limit = 1000000;
};

/// Draws coefficient vectors uniformly from the box spanned by the per-term
/// LP extremes of { c : f_min <= B c <= f_max } and keeps f = B c when it is
/// within the bounds and more than theta_deg away from every kept filter.
/// theta_deg <= 0 disables the angle test.
SeedSet generate_seed_set(
    const BasisMatrix &basis,
    double             f_min,
    double             f_max,
    std::size_t        count,
    double             theta_deg,
    std::uint64_t      rng_seed,
    const SeedOptions &options = {} );

/// Angle between two nonzero vectors in degrees, in [0, 180].
double angle_degrees( const Vector &f, const Vector &q );
double angle_degrees( const FilterCurve &f, const FilterCurve &q );

/// For each filter, the angle to its nearest neighbour in the set.
std::vector<double> nearest_neighbour_angles( const std::vector<FilterCurve> &filters );

struct SeedDiagnostics
{
    double mean_nearest = 0.0;
    double max_nearest  = 0.0;
    double min_nearest  = 0.0;
};

SeedDiagnostics diagnose( const SeedSet &seeds );

//	=====================================================================
//	Multi-start
//

enum class SelectionMetric
{
    Objective,   ///< converged data objective
    MeanDeltaE   ///< aggregate mean ΔE*ab of the filtered camera
};

/// Lights and surfaces used to score a filter by mean ΔE. When absent the
/// provenance of the scenario's colour signal sets is used.
struct EvaluationData
{
    std::vector<Spectrum>                 illuminants;
    std::shared_ptr<const ReflectanceSet> reflectances;
};

struct MultiStartOptions
{
    AlsOptions                    als;
    unsigned                      jobs = 1;
    std::optional<EvaluationData> evaluation;
};

struct SeedOutcome
{
    std::size_t               index = 0;
    std::string               seed_id;
    std::optional<DataResult> result;  ///< empty when the run failed
    std::string               error;
    double                    objective = 0.0;
    double                    metric    = 0.0;
};

struct MultiStartResult
{
    SelectionMetric          metric = SelectionMetric::Objective;
    std::vector<SeedOutcome> outcomes;  ///< in seed order
    std::vector<std::size_t> ranking;   ///< successful outcomes, best first

    /// Best outcome; throws NumericalError when every seed failed.
    const SeedOutcome &best() const;
};

/// Runs optimize_data from every seed, `jobs` at a time. Ranking is by the
/// metric, ties broken by seed order, so it does not depend on scheduling.
MultiStartResult multi_start(
    const SensorSet                &camera,
    const Scenario                 &scenario,
    const ConstraintSpec           &constraints,
    const std::vector<FilterCurve> &seeds,
    SelectionMetric                 metric,
    const MultiStartOptions        &options = {},
    std::vector<std::string>        seed_ids = {} );

MultiStartResult multi_start(
    const SensorSet         &camera,
    const Scenario          &scenario,
    const ConstraintSpec    &constraints,
    const SeedSet           &seeds,
    SelectionMetric          metric,
    const MultiStartOptions &options = {} );

/// Mean ΔE*ab of camera·filter averaged over the evaluation lights.
double mean_delta_e(
    const SensorSet      &camera,
    const FilterCurve    &filter,
    const EvaluationData &data,
    const SensorSet      &cmfs );

/// Evaluation data recovered from the scenario's colour signal provenance.
EvaluationData evaluation_data( const Scenario &scenario );

} // namespace chromafit
