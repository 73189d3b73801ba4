// SPDX-License-Identifier: Apache-2.0
// Copyright Contributors to the chromafit Project.

#pragma once

#include <chromafit/error.hpp>
#include <chromafit/spectral.hpp>

#include <optional>

namespace chromafit
{

/// lower <= G x <= upper, row by row. An infinite bound means the side is
/// absent; lower == upper makes the row an equality.
struct BoxLinearConstraints
{
    Matrix rows;
    Vector lower;
    Vector upper;

    /// f_min <= G x <= f_max on every row.
    static BoxLinearConstraints uniform( const Matrix &g, double lower, double upper );

    Eigen::Index count() const noexcept { return rows.rows(); }
    Eigen::Index dimension() const noexcept { return rows.cols(); }

    /// Throws InputError on shape errors and InfeasibleError when a row has
    /// lower > upper.
    void validate() const;

    /// Largest bound violation of x (0 when feasible).
    double violation( const Vector &x ) const;
};

//	=====================================================================
//	Linear programming
//
//	Dense two-phase tableau simplex with Bland's rule (no cycling). The
//	problems here are tiny (at most a few dozen variables and rows).
//

struct LpSolution
{
    Vector x;
    double value = 0.0;
};

/// Minimize costᵀx subject to the constraints, x free.
/// Throws InfeasibleError or NumericalError (unbounded).
LpSolution solve_lp( const Vector &cost, const BoxLinearConstraints &constraints );

/// Any point satisfying the constraints (a vertex of phase one).
Vector find_feasible_point( const BoxLinearConstraints &constraints );

enum class Sense
{
    Minimize,
    Maximize
};

/// Extreme value of coefficient `index` over { c : f_min <= B c <= f_max }.
double coefficient_extreme(
    const Matrix &basis, double f_min, double f_max, std::size_t index, Sense sense );

//	=====================================================================
//	Quadratic programming
//
//	Convex least-squares QP  min ‖R x − z‖² + offset  s.t. box rows, solved
//	with a primal active-set method on the compressed factor R. Each
//	equality-constrained subproblem is solved as a least-squares problem in
//	the null space of the working set, so a singular Hessian is handled
//	without regularization.
//

struct LeastSquaresObjective
{
    Matrix r;
    Vector z;
    double offset = 0.0;

    /// Compress ‖A x − w‖² through a QR factorization of A.
    static LeastSquaresObjective from_design( const Matrix &a, const Vector &w );

    /// xᵀ H x − 2 gᵀx + c with H symmetric positive semidefinite.
    static LeastSquaresObjective
    from_normal( const Matrix &h, const Vector &g, double c );

    double value( const Vector &x ) const;
    Vector gradient( const Vector &x ) const;
};

struct QpOptions
{
    /// Feasible warm start; a phase-one LP runs if absent or infeasible.
    std::optional<Vector> start;
    /// 0 selects the default cap 10 * (n + p).
    int    max_iterations        = 0;
    double feasibility_tolerance = 1e-9;
};

struct QpSolution
{
    Vector x;
    /// Multipliers for the lower and upper side of each row; stationarity
    /// reads  ∇f(x) = Gᵀ(lower_multipliers − upper_multipliers).
    Vector lower_multipliers;
    Vector upper_multipliers;
    double objective  = 0.0;
    int    iterations = 0;
};

/// Raised when the active-set loop hits its iteration cap.
class QpNotConverged : public NumericalError
{
public:
    QpNotConverged( const std::string &what, Vector best )
        : NumericalError( what ), _best( std::move( best ) )
    {}
    const Vector &best_iterate() const noexcept { return _best; }

private:
    Vector _best;
};

QpSolution solve_qp(
    const LeastSquaresObjective &objective,
    const BoxLinearConstraints  &constraints,
    const QpOptions             &options = {} );

/// min ‖V x − w‖² subject to the constraints.
QpSolution solve_qp(
    const Matrix               &design,
    const Vector               &target,
    const BoxLinearConstraints &constraints,
    const QpOptions            &options = {} );

} // namespace chromafit
