// SPDX-License-Identifier: Apache-2.0
// Copyright Contributors to the chromafit Project.

#pragma once

#include <chromafit/spectral.hpp>

#include <span>
#include <vector>

namespace chromafit
{

//	=====================================================================
//	Closed-form least-squares kernels
//
//	Everything here is grid-agnostic and works on plain Eigen matrices.
//	Rank deficiency is detected from the singular values of the triangular
//	factor. With `allow_regularization` the solve falls back to ridge
//	normal equations with weight 1e-10 * trace(AᵀA) / n and reports it;
//	without it a NumericalError naming the condition number is thrown.
//

struct SolveOptions
{
    bool   allow_regularization = true;
    double condition_limit      = 1e12;
};

struct PseudoInverse
{
    Matrix value;
    double condition   = 0.0;
    bool   regularized = false;
};

/// A⁺ = (AᵀA)⁻¹Aᵀ for a tall matrix of full column rank.
PseudoInverse pseudoinverse( const Matrix &a, const SolveOptions &options = {} );

struct LinearMapFit
{
    CorrectionMatrix map;
    double           condition   = 0.0;
    bool             regularized = false;
};

/// M = A⁺B, the 3x3 minimizer of ‖AM − B‖_F².
LinearMapFit fit_linear_map(
    const MatrixX3 &a, const MatrixX3 &b, const SolveOptions &options = {} );

struct RowScalarFit
{
    Vector                   scalars;
    std::vector<std::size_t> zero_rows; ///< rows of Q that were all zero
};

/// Per row j: alpha_j = (q_j · x_j) / (q_j · q_j). An all-zero row of Q
/// gets alpha = 0 and is reported in `zero_rows`.
RowScalarFit fit_row_scalars( const MatrixX3 &q, const MatrixX3 &x );

/// Stacked design V (rows: 3n per signal set, cols: one per wavelength)
/// and stacked target w such that
///   V f = [vec(C_jᵀ diag(f) Q_j M_j)]_j   and   w = [vec(T_j)]_j.
struct FilterSystem
{
    Matrix design;
    Vector target;
};

/// Column i of block j is vec(C_jᵀ D_i Q_j M_j) with D_i the single-entry
/// selector. `targets[j]` is the n_j x 3 target (Cᵀ_k X) for block j.
FilterSystem build_filter_system(
    std::span<const Matrix>   signals,
    std::span<const MatrixX3> sensors,
    std::span<const Matrix3>  maps,
    std::span<const MatrixX3> targets );

/// Square-root form of one signal set. With rootᵀroot = C Cᵀ and
///   ‖Cᵀ diag(f) P − T‖² = ‖root diag(f) P − target‖² + residual
/// for every f and P. When n <= N the root is Cᵀ itself; otherwise a QR
/// factorization of Cᵀ compresses it to N rows.
struct SignalFactor
{
    Matrix   root;           ///< r x N, r = min(n, N)
    MatrixX3 target;         ///< r x 3
    double   residual = 0.0; ///< part of ‖T‖² no filter can reach
};

SignalFactor factor_signals( const Matrix &signals, const MatrixX3 &target );

/// Filter system built from factored signal sets: at most 3 N rows per
/// set, same minimizer as build_filter_system, conditioning of V rather
/// than of VᵀV.
FilterSystem compressed_filter_system(
    std::span<const SignalFactor> factors,
    std::span<const MatrixX3>     sensors,
    std::span<const Matrix3>      maps );

/// Per-signal-set sufficient statistics for the filter subproblem.
struct SignalMoments
{
    Matrix   gram;                ///< C Cᵀ (N x N)
    MatrixX3 cross;               ///< C T  (N x 3)
    double   target_norm2 = 0.0;  ///< ‖T‖_F²
};

SignalMoments signal_moments( const Matrix &signals, const MatrixX3 &target );

/// VᵀV, Vᵀw and wᵀw without materializing V:
///   VᵀV = Σ_j (C_j C_jᵀ) ∘ (P_j P_jᵀ),  (Vᵀw)_a = Σ_jk P_j(a,k) (C_j T_j)(a,k)
/// with P_j = Q_j M_j and ∘ the Hadamard product.
struct NormalEquations
{
    Matrix gram;
    Vector rhs;
    double target_norm2 = 0.0;

    /// ‖Vf − w‖² evaluated from the moments.
    double objective( const Vector &f ) const;
};

NormalEquations filter_normal_equations(
    std::span<const SignalMoments> moments,
    std::span<const MatrixX3>      sensors,
    std::span<const Matrix3>       maps );

NormalEquations normal_equations( const FilterSystem &system );

struct FilterSolve
{
    Vector filter;
    double condition   = 0.0;
    bool   regularized = false;
};

/// argmin_f ‖Vf − w‖².
FilterSolve solve_filter_unconstrained(
    const FilterSystem &system, const SolveOptions &options = {} );

/// Same minimizer from the normal equations. The condition limit applies
/// to V, estimated as sqrt(cond(VᵀV)), and is capped at 1e7 because the
/// normal equations square it.
FilterSolve solve_filter_unconstrained(
    const NormalEquations &normal, const SolveOptions &options = {} );

} // namespace chromafit
