// SPDX-License-Identifier: Apache-2.0
// Copyright Contributors to the chromafit Project.

#include <chromafit/constrained.hpp>

#include <cmath>
#include <limits>
#include <sstream>
#include <vector>

namespace chromafit
{

LeastSquaresObjective
LeastSquaresObjective::from_design( const Matrix &a, const Vector &w )
{
    if ( a.rows() != w.size() )
        throw InputError( "least-squares objective: design and target sizes differ" );
    LeastSquaresObjective obj;
    const auto            n = a.cols();
    if ( a.rows() <= n )
    {
        obj.r = a;
        obj.z = w;
        return obj;
    }
    Eigen::HouseholderQR<Matrix> qr( a );
    const Vector                 qtw = qr.householderQ().transpose() * w;
    obj.r      = qr.matrixQR().topRows( n ).triangularView<Eigen::Upper>();
    obj.z      = qtw.head( n );
    obj.offset = qtw.tail( a.rows() - n ).squaredNorm();
    return obj;
}

LeastSquaresObjective
LeastSquaresObjective::from_normal( const Matrix &h, const Vector &g, double c )
{
    if ( h.rows() != h.cols() || h.rows() != g.size() )
        throw InputError( "least-squares objective: inconsistent normal equations" );
    Eigen::SelfAdjointEigenSolver<Matrix> eig( h );
    const Vector &lambda = eig.eigenvalues();
    const Matrix &u      = eig.eigenvectors();
    const double  cutoff = 1e-14 * std::max( 0.0, lambda.maxCoeff() );

    std::vector<Eigen::Index> keep;
    for ( Eigen::Index i = 0; i < lambda.size(); ++i )
        if ( lambda( i ) > cutoff )
            keep.push_back( i );

    LeastSquaresObjective obj;
    const auto            k = static_cast<Eigen::Index>( keep.size() );
    obj.r.resize( k, h.cols() );
    obj.z.resize( k );
    for ( Eigen::Index row = 0; row < k; ++row )
    {
        const auto   i = keep[static_cast<std::size_t>( row )];
        const double s = std::sqrt( lambda( i ) );
        obj.r.row( row ) = s * u.col( i ).transpose();
        obj.z( row )     = u.col( i ).dot( g ) / s;
    }
    obj.offset = c - obj.z.squaredNorm();
    return obj;
}

double LeastSquaresObjective::value( const Vector &x ) const
{
    return ( r * x - z ).squaredNorm() + offset;
}

Vector LeastSquaresObjective::gradient( const Vector &x ) const
{
    return 2.0 * r.transpose() * ( r * x - z );
}

namespace
{

// One side of a constraint row written as  normal · x >= bound.
struct Side
{
    Eigen::Index row;
    bool         upper;
    bool         equality;
};

class ActiveSet
{
public:
    ActiveSet(
        const LeastSquaresObjective &obj,
        const BoxLinearConstraints  &cons,
        double                       tol )
        : _obj( obj ), _cons( cons ), _tol( tol ), _n( cons.dimension() )
    {
        for ( Eigen::Index r = 0; r < cons.count(); ++r )
        {
            const double lo = cons.lower( r );
            const double hi = cons.upper( r );
            if ( lo == hi )
            {
                _sides.push_back( { r, false, true } );
                continue;
            }
            if ( std::isfinite( lo ) )
                _sides.push_back( { r, false, false } );
            if ( std::isfinite( hi ) )
                _sides.push_back( { r, true, false } );
        }
    }

    Vector normal( std::size_t s ) const
    {
        const auto &side = _sides[s];
        Vector      a    = _cons.rows.row( side.row ).transpose();
        return side.upper ? Vector( -a ) : a;
    }

    double bound( std::size_t s ) const
    {
        const auto &side = _sides[s];
        return side.upper ? -_cons.upper( side.row ) : _cons.lower( side.row );
    }

    // Adds side s to the working set if its normal is independent of the
    // current members.
    bool try_add( std::size_t s )
    {
        const Vector a = normal( s );
        if ( !_working.empty() )
        {
            const Matrix aw = working_matrix();
            const Vector coef =
                aw.transpose().colPivHouseholderQr().solve( a );
            if ( ( aw.transpose() * coef - a ).norm() <= 1e-10 * a.norm() )
                return false;
        }
        _working.push_back( s );
        return true;
    }

    Matrix working_matrix() const
    {
        Matrix aw( static_cast<Eigen::Index>( _working.size() ), _n );
        for ( std::size_t i = 0; i < _working.size(); ++i )
            aw.row( static_cast<Eigen::Index>( i ) ) = normal( _working[i] ).transpose();
        return aw;
    }

    QpSolution solve( Vector x, int max_iterations )
    {
        // Equalities first, then inequalities active at the start point.
        for ( std::size_t s = 0; s < _sides.size(); ++s )
            if ( _sides[s].equality )
                try_add( s );
        for ( std::size_t s = 0; s < _sides.size(); ++s )
            if ( !_sides[s].equality &&
                 std::abs( normal( s ).dot( x ) - bound( s ) ) <= _tol )
                try_add( s );

        std::vector<bool> in_working( _sides.size(), false );
        for ( auto s : _working )
            in_working[s] = true;

        const double hscale =
            std::max( 1.0, ( _obj.r.transpose() * _obj.r ).lpNorm<Eigen::Infinity>() );
        const double gscale =
            std::max( 1.0, ( _obj.r.transpose() * _obj.z ).lpNorm<Eigen::Infinity>() );

        for ( int iter = 0; iter < max_iterations; ++iter )
        {
            const Vector p = step( x );
            if ( p.lpNorm<Eigen::Infinity>() <=
                 1e-12 * std::max( 1.0, x.lpNorm<Eigen::Infinity>() ) )
            {
                const Vector grad   = _obj.gradient( x );
                Vector       lambda = multipliers( grad );
                const double lam_tol =
                    1e-10 * ( hscale * std::max( 1.0, x.lpNorm<Eigen::Infinity>() ) + gscale );
                Eigen::Index drop   = -1;
                double       lowest = -lam_tol;
                for ( Eigen::Index i = 0; i < lambda.size(); ++i )
                {
                    if ( _sides[_working[static_cast<std::size_t>( i )]].equality )
                        continue;
                    if ( lambda( i ) < lowest )
                    {
                        lowest = lambda( i );
                        drop   = i;
                    }
                }
                if ( drop < 0 )
                    return finish( x, lambda, iter );
                in_working[_working[static_cast<std::size_t>( drop )]] = false;
                _working.erase( _working.begin() + drop );
                continue;
            }

            double      alpha    = 1.0;
            std::size_t blocking = _sides.size();
            for ( std::size_t s = 0; s < _sides.size(); ++s )
            {
                if ( in_working[s] )
                    continue;
                const Vector a = normal( s );
                const double d = a.dot( p );
                if ( d >= -1e-14 * a.norm() * p.norm() )
                    continue;
                const double slack = bound( s ) - a.dot( x );
                const double t     = std::max( 0.0, slack / d );
                if ( t < alpha )
                {
                    alpha    = t;
                    blocking = s;
                }
            }
            x += alpha * p;
            if ( blocking < _sides.size() && try_add( blocking ) )
                in_working[blocking] = true;
        }

        std::ostringstream msg;
        msg << "quadratic program did not converge within " << max_iterations
            << " active-set iterations (best objective " << _obj.value( x ) << ")";
        throw QpNotConverged( msg.str(), x );
    }

private:
    // Minimizer of the objective over x + null(A_W), minus x.
    Vector step( const Vector &x ) const
    {
        const auto k = static_cast<Eigen::Index>( _working.size() );
        if ( k >= _n )
            return Vector::Zero( _n );
        Matrix z;
        if ( k == 0 )
            z = Matrix::Identity( _n, _n );
        else
        {
            const Matrix                 awt = working_matrix().transpose();
            Eigen::HouseholderQR<Matrix> qr( awt );
            const Matrix q = qr.householderQ() * Matrix::Identity( _n, _n );
            z              = q.rightCols( _n - k );
        }
        const Matrix rz = _obj.r * z;
        const Vector rhs = _obj.z - _obj.r * x;
        const Vector y   = rz.completeOrthogonalDecomposition().solve( rhs );
        return z * y;
    }

    Vector multipliers( const Vector &grad ) const
    {
        if ( _working.empty() )
            return Vector();
        const Matrix awt = working_matrix().transpose();
        return awt.colPivHouseholderQr().solve( grad );
    }

    QpSolution finish( const Vector &x, const Vector &lambda, int iterations ) const
    {
        QpSolution out;
        out.x                 = x;
        out.lower_multipliers = Vector::Zero( _cons.count() );
        out.upper_multipliers = Vector::Zero( _cons.count() );
        for ( std::size_t i = 0; i < _working.size(); ++i )
        {
            const auto  &side = _sides[_working[i]];
            const double l    = lambda( static_cast<Eigen::Index>( i ) );
            if ( side.equality )
            {
                if ( l >= 0.0 )
                    out.lower_multipliers( side.row ) += l;
                else
                    out.upper_multipliers( side.row ) += -l;
            }
            else if ( side.upper )
                out.upper_multipliers( side.row ) += std::max( 0.0, l );
            else
                out.lower_multipliers( side.row ) += std::max( 0.0, l );
        }
        out.objective  = _obj.value( x );
        out.iterations = iterations;
        return out;
    }

    const LeastSquaresObjective &_obj;
    const BoxLinearConstraints  &_cons;
    double                       _tol;
    Eigen::Index                 _n;
    std::vector<Side>            _sides;
    std::vector<std::size_t>     _working;
};

} // namespace

QpSolution solve_qp(
    const LeastSquaresObjective &objective,
    const BoxLinearConstraints  &constraints,
    const QpOptions             &options )
{
    constraints.validate();
    const auto n = constraints.dimension();
    if ( objective.r.cols() != n || objective.r.rows() != objective.z.size() )
        throw InputError( "solve_qp: objective and constraints disagree in dimension" );

    Vector x;
    if ( options.start && options.start->size() == n &&
         constraints.violation( *options.start ) <= options.feasibility_tolerance )
        x = *options.start;
    else
        x = find_feasible_point( constraints );

    const int cap = options.max_iterations > 0
                        ? options.max_iterations
                        : static_cast<int>( 10 * ( n + constraints.count() ) );
    ActiveSet solver( objective, constraints, options.feasibility_tolerance );
    return solver.solve( std::move( x ), cap );
}

QpSolution solve_qp(
    const Matrix               &design,
    const Vector               &target,
    const BoxLinearConstraints &constraints,
    const QpOptions            &options )
{
    return solve_qp(
        LeastSquaresObjective::from_design( design, target ), constraints, options );
}

} // namespace chromafit
