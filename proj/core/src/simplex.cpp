// SPDX-License-Identifier: Apache-2.0
// Copyright Contributors to the chromafit Project.

#include <chromafit/constrained.hpp>

#include <cmath>
#include <limits>
#include <sstream>

namespace chromafit
{

BoxLinearConstraints
BoxLinearConstraints::uniform( const Matrix &g, double lower, double upper )
{
    return { g, Vector::Constant( g.rows(), lower ), Vector::Constant( g.rows(), upper ) };
}

void BoxLinearConstraints::validate() const
{
    if ( lower.size() != rows.rows() || upper.size() != rows.rows() )
        throw InputError( "constraints: bound vectors do not match the row count" );
    if ( !rows.allFinite() )
        throw InputError( "constraints: non-finite constraint matrix" );
    for ( Eigen::Index r = 0; r < rows.rows(); ++r )
    {
        if ( std::isnan( lower( r ) ) || std::isnan( upper( r ) ) )
            throw InputError( "constraints: NaN bound" );
        if ( lower( r ) > upper( r ) )
        {
            std::ostringstream msg;
            msg << "infeasible constraints: row " << r << " has lower bound "
                << lower( r ) << " above upper bound " << upper( r );
            throw InfeasibleError( msg.str() );
        }
    }
}

double BoxLinearConstraints::violation( const Vector &x ) const
{
    const Vector gx    = rows * x;
    double       worst = 0.0;
    for ( Eigen::Index r = 0; r < gx.size(); ++r )
    {
        if ( std::isfinite( lower( r ) ) )
            worst = std::max( worst, lower( r ) - gx( r ) );
        if ( std::isfinite( upper( r ) ) )
            worst = std::max( worst, gx( r ) - upper( r ) );
    }
    return worst;
}

namespace
{

constexpr double kPivotTolerance = 1e-11;
constexpr int    kMaxPivots      = 100000;

//	Standard form  A y = b, y >= 0, b >= 0  where y = [u, v, slacks] and the
//	free variable is x = u - v. The last `rows` columns are artificials.
class Tableau
{
public:
    Tableau( const BoxLinearConstraints &cons )
        : _n( cons.dimension() )
    {
        struct Row
        {
            Eigen::Index source;
            double       sign;  // +1: a x - s = l or a x = l ; -1: a x + t = u
            double       rhs;
            bool         slack;
        };
        std::vector<Row> rows;
        for ( Eigen::Index r = 0; r < cons.count(); ++r )
        {
            const double lo = cons.lower( r );
            const double hi = cons.upper( r );
            if ( lo == hi )
            {
                rows.push_back( { r, 1.0, lo, false } );
                continue;
            }
            if ( std::isfinite( lo ) )
                rows.push_back( { r, 1.0, lo, true } );
            if ( std::isfinite( hi ) )
                rows.push_back( { r, -1.0, hi, true } );
        }

        Eigen::Index slacks = 0;
        for ( const auto &row : rows )
            slacks += row.slack ? 1 : 0;

        _m          = static_cast<Eigen::Index>( rows.size() );
        _structural = 2 * _n + slacks;
        _cols       = _structural + _m;
        _t          = Matrix::Zero( _m + 1, _cols + 1 );
        _basis.resize( static_cast<std::size_t>( _m ) );

        Eigen::Index slack = 2 * _n;
        for ( Eigen::Index i = 0; i < _m; ++i )
        {
            const auto &row = rows[static_cast<std::size_t>( i )];
            const auto  a   = cons.rows.row( row.source );
            _t.block( i, 0, 1, _n )  = a;
            _t.block( i, _n, 1, _n ) = -a;
            double rhs               = row.rhs;
            if ( row.slack )
                _t( i, slack++ ) = row.sign > 0 ? -1.0 : 1.0;
            if ( rhs < 0.0 )
            {
                _t.row( i ) *= -1.0;
                rhs = -rhs;
            }
            _t( i, _cols ) = rhs;
            _t( i, _structural + i ) = 1.0;
            _basis[static_cast<std::size_t>( i )] = _structural + i;
        }
        _scale    = std::max( 1.0, _t.col( _cols ).head( _m ).lpNorm<Eigen::Infinity>() );
        _original = _t.topRows( _m );
    }

    // Phase one: minimize the sum of artificials. Returns false if the
    // constraints are infeasible.
    bool phase_one()
    {
        _t.row( _m ).setZero();
        for ( Eigen::Index i = 0; i < _m; ++i )
        {
            _t.row( _m ).head( _structural ) -= _t.row( i ).head( _structural );
            _t( _m, _cols ) -= _t( i, _cols );
        }
        run( _structural );
        if ( -_t( _m, _cols ) > 1e-9 * _scale )
            return false;

        // Drive zero-level artificials out of the basis where possible.
        for ( Eigen::Index i = 0; i < _m; ++i )
        {
            if ( _basis[static_cast<std::size_t>( i )] < _structural )
                continue;
            for ( Eigen::Index j = 0; j < _structural; ++j )
            {
                if ( std::abs( _t( i, j ) ) > 1e-9 )
                {
                    pivot( i, j );
                    break;
                }
            }
        }
        return true;
    }

    // Phase two on structural columns. `cost` is over x (length n).
    void phase_two( const Vector &cost )
    {
        Vector c = Vector::Zero( _cols );
        c.head( _n )       = cost;
        c.segment( _n, _n ) = -cost;
        _t.row( _m ).setZero();
        _t.row( _m ).head( _cols ) = c.transpose();
        for ( Eigen::Index i = 0; i < _m; ++i )
        {
            const double cb = c( _basis[static_cast<std::size_t>( i )] );
            if ( cb != 0.0 )
                _t.row( _m ) -= cb * _t.row( i );
        }
        if ( !run( _structural ) )
            throw NumericalError( "linear program is unbounded" );
    }

    // Basic values re-solved from the original rows, which removes the
    // rounding that pivoting accumulates in the tableau.
    Vector solution() const
    {
        Matrix basic( _m, _m );
        for ( Eigen::Index i = 0; i < _m; ++i )
            basic.col( i ) = _original.col( _basis[static_cast<std::size_t>( i )] );
        const Eigen::FullPivLU<Matrix> lu( basic );
        Vector                         values = _t.col( _cols ).head( _m );
        if ( lu.isInvertible() )
        {
            const Vector exact = lu.solve( _original.col( _cols ) );
            if ( exact.allFinite() && exact.minCoeff() >= -1e-9 * _scale )
                values = exact.cwiseMax( 0.0 );
        }
        Vector y = Vector::Zero( _cols );
        for ( Eigen::Index i = 0; i < _m; ++i )
            y( _basis[static_cast<std::size_t>( i )] ) = values( i );
        return y.head( _n ) - y.segment( _n, _n );
    }

private:
    // Bland's rule: lowest-index improving column, ties in the ratio test
    // broken by lowest basic variable index. Returns false when unbounded.
    bool run( Eigen::Index allowed )
    {
        for ( int iter = 0; iter < kMaxPivots; ++iter )
        {
            Eigen::Index enter = -1;
            for ( Eigen::Index j = 0; j < allowed; ++j )
            {
                if ( _t( _m, j ) < -kPivotTolerance )
                {
                    enter = j;
                    break;
                }
            }
            if ( enter < 0 )
                return true;

            Eigen::Index leave = -1;
            double       best  = std::numeric_limits<double>::infinity();
            for ( Eigen::Index i = 0; i < _m; ++i )
            {
                const double a = _t( i, enter );
                if ( a <= kPivotTolerance )
                    continue;
                const double ratio = _t( i, _cols ) / a;
                if ( ratio < best - 1e-14 ||
                     ( ratio <= best + 1e-14 && leave >= 0 &&
                       _basis[static_cast<std::size_t>( i )] <
                           _basis[static_cast<std::size_t>( leave )] ) )
                {
                    best  = std::min( best, ratio );
                    leave = i;
                }
            }
            if ( leave < 0 )
                return false;
            pivot( leave, enter );
        }
        throw NumericalError( "simplex exceeded its pivot limit" );
    }

    void pivot( Eigen::Index r, Eigen::Index c )
    {
        _t.row( r ) /= _t( r, c );
        for ( Eigen::Index i = 0; i <= _m; ++i )
        {
            if ( i == r )
                continue;
            const double f = _t( i, c );
            if ( f != 0.0 )
                _t.row( i ) -= f * _t.row( r );
        }
        _basis[static_cast<std::size_t>( r )] = c;
    }

    Eigen::Index              _n;
    Eigen::Index              _m          = 0;
    Eigen::Index              _structural = 0;
    Eigen::Index              _cols       = 0;
    double                    _scale      = 1.0;
    Matrix                    _t;
    Matrix                    _original;
    std::vector<Eigen::Index> _basis;
};

[[noreturn]] void report_infeasible( const BoxLinearConstraints &cons )
{
    // Name the first row whose bounds alone are contradictory, otherwise
    // report the system as a whole.
    cons.validate();
    std::ostringstream msg;
    msg << "infeasible constraints: no x satisfies all " << cons.count()
        << " bound rows simultaneously";
    throw InfeasibleError( msg.str() );
}

} // namespace

LpSolution solve_lp( const Vector &cost, const BoxLinearConstraints &constraints )
{
    constraints.validate();
    if ( cost.size() != constraints.dimension() )
        throw InputError( "solve_lp: cost length does not match the dimension" );
    Tableau t( constraints );
    if ( !t.phase_one() )
        report_infeasible( constraints );
    t.phase_two( cost );
    LpSolution out;
    out.x     = t.solution();
    out.value = cost.dot( out.x );
    return out;
}

Vector find_feasible_point( const BoxLinearConstraints &constraints )
{
    constraints.validate();
    Tableau t( constraints );
    if ( !t.phase_one() )
        report_infeasible( constraints );
    return t.solution();
}

double coefficient_extreme(
    const Matrix &basis, double f_min, double f_max, std::size_t index, Sense sense )
{
    if ( index >= static_cast<std::size_t>( basis.cols() ) )
        throw InputError( "coefficient_extreme: index out of range" );
    if ( f_min > f_max )
    {
        std::ostringstream msg;
        msg << "infeasible transmittance bounds: f_min " << f_min
            << " > f_max " << f_max;
        throw InfeasibleError( msg.str() );
    }
    const auto cons = BoxLinearConstraints::uniform( basis, f_min, f_max );
    Vector     cost = Vector::Zero( basis.cols() );
    cost( static_cast<Eigen::Index>( index ) ) = sense == Sense::Minimize ? 1.0 : -1.0;
    const auto lp = solve_lp( cost, cons );
    return lp.x( static_cast<Eigen::Index>( index ) );
}

} // namespace chromafit
