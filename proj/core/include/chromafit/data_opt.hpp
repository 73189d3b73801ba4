// SPDX-License-Identifier: Apache-2.0
// Copyright Contributors to the chromafit Project.

#pragma once

#include <chromafit/basis.hpp>
#include <chromafit/luther.hpp>
#include <chromafit/spectral.hpp>

#include <optional>
#include <string>
#include <vector>

namespace chromafit
{

enum class TargetMode
{
    PerLight,    ///< each measurement set is its own target (k = j)
    FixedTarget, ///< every set maps to one reference set (e.g. D65)
    SingleLight  ///< exactly one measurement set, its own target
};

/// Training data for the data-driven optimiser: the measurement colour
/// signal sets C_j, how each maps to a target C_k, and the CMFs X.
class Scenario
{
public:
    static Scenario per_light( std::vector<ColorSignalSet> signals, SensorSet cmfs );
    static Scenario fixed_target(
        std::vector<ColorSignalSet> signals, ColorSignalSet target, SensorSet cmfs );
    static Scenario single_light( ColorSignalSet signal, SensorSet cmfs );

    TargetMode                         mode() const noexcept { return _mode; }
    const std::vector<ColorSignalSet> &signals() const noexcept { return _signals; }
    const SensorSet                   &cmfs() const noexcept { return _cmfs; }
    const SpectralGrid                &grid() const noexcept { return _cmfs.grid(); }
    std::size_t count() const noexcept { return _signals.size(); }

    /// C_k for measurement set j.
    const ColorSignalSet &target_for( std::size_t j ) const;
    /// C_kᵀ X for measurement set j (n x 3).
    MatrixX3 target_tristimuli( std::size_t j ) const;

private:
    Scenario(
        TargetMode mode, std::vector<ColorSignalSet> signals,
        std::optional<ColorSignalSet> target, SensorSet cmfs );

    TargetMode                    _mode;
    std::vector<ColorSignalSet>   _signals;
    std::optional<ColorSignalSet> _target;
    SensorSet                     _cmfs;
};

enum class ConstraintMode
{
    Unconstrained,
    PositiveOnly, ///< filter >= max(f_min, positive_floor), no upper bound
    BasisBounded  ///< filter = B c with f_min <= B c <= f_max
};

struct ConstraintSpec
{
    static constexpr double positive_floor = 1e-6;

    ConstraintMode             mode = ConstraintMode::Unconstrained;
    std::optional<BasisMatrix> basis;
    double                     f_min = 0.0;
    double                     f_max = 1.0;

    static ConstraintSpec unconstrained();
    static ConstraintSpec positive_only( double f_min = 0.0 );
    static ConstraintSpec basis_bounded( BasisMatrix basis, double f_min, double f_max = 1.0 );

    /// Lower bound applied in PositiveOnly mode.
    double positive_lower_bound() const { return std::max( f_min, positive_floor ); }

    void validate( const SpectralGrid &grid ) const;
};

struct DataResult
{
    FilterCurve                   filter;  ///< ∏ f^s including the seed
    std::vector<CorrectionMatrix> maps;    ///< ∏ M^s_j per measurement set
    AlsTrace                      trace;
    std::string                   seed_id;
    bool                          seed_projected = false;
    bool                          regularized    = false;
};

/// Brings a seed inside the constraint set: least-squares projection onto
/// { B c : f_min <= B c <= f_max } for BasisBounded, clamping to the floor
/// for PositiveOnly. `projected` reports whether the seed moved.
FilterCurve feasible_seed(
    const FilterCurve &seed, const ConstraintSpec &constraints, bool *projected = nullptr );

/// Alternating least squares for
///   min Σ_j ‖C_jᵀ diag(f) Q M_j − C_kᵀ X‖_F²
/// starting from Q^0 = diag(seed) Q. Each iteration fits the maps M^i_j and
/// then the per-iteration filter f^i (closed form, or a QP over the evolving
/// basis diag(∏ f^s)⁻¹ B), and stops when max_j ‖Q^i_j − Q^{i−1}_j‖_F² < eps.
DataResult optimize_data(
    const SensorSet      &camera,
    const Scenario       &scenario,
    const FilterCurve    &seed,
    const ConstraintSpec &constraints,
    const AlsOptions     &options = {},
    std::string           seed_id = "seed" );

/// Σ_j ‖C_jᵀ diag(f) Q M_j − C_kᵀ X‖_F².
double objective(
    const SensorSet                     &camera,
    const Scenario                      &scenario,
    const FilterCurve                   &filter,
    const std::vector<CorrectionMatrix> &maps );

} // namespace chromafit
