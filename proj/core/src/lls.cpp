// SPDX-License-Identifier: Apache-2.0
// Copyright Contributors to the chromafit Project.

#include <chromafit/lls.hpp>
#include <chromafit/error.hpp>

#include <cmath>
#include <limits>
#include <sstream>

namespace chromafit
{

namespace
{

constexpr double kRidgeWeight = 1e-10;

double condition_of_r( const Matrix &r )
{
    Eigen::JacobiSVD<Matrix> svd( r );
    const auto &s = svd.singularValues();
    if ( s.size() == 0 )
        return std::numeric_limits<double>::infinity();
    const double smin = s( s.size() - 1 );
    if ( !( smin > 0.0 ) )
        return std::numeric_limits<double>::infinity();
    return s( 0 ) / smin;
}

[[noreturn]] void rank_error( std::string_view what, double condition )
{
    std::ostringstream msg;
    msg << what << ": matrix is rank deficient (condition number "
        << condition << ") and regularization is disabled";
    throw NumericalError( msg.str() );
}

Matrix ridge_solve( const Matrix &a, const Matrix &rhs )
{
    Matrix     gram  = a.transpose() * a;
    const auto n     = gram.rows();
    double     ridge = kRidgeWeight * gram.trace() / static_cast<double>( n );
    if ( !( ridge > 0.0 ) )
        ridge = kRidgeWeight;
    gram.diagonal().array() += ridge;
    return gram.ldlt().solve( a.transpose() * rhs );
}

struct QrSolve
{
    Eigen::HouseholderQR<Matrix> qr;
    double                       condition;
};

QrSolve factor( const Matrix &a, std::string_view what )
{
    if ( a.rows() < a.cols() )
    {
        std::ostringstream msg;
        msg << what << ": need at least as many rows as columns (" << a.rows()
            << " x " << a.cols() << ")";
        throw InputError( msg.str() );
    }
    if ( !a.allFinite() )
        throw NumericalError( std::string( what ) + ": non-finite input" );
    QrSolve s{ Eigen::HouseholderQR<Matrix>( a ), 0.0 };
    const Matrix r = s.qr.matrixQR()
                         .topRows( a.cols() )
                         .template triangularView<Eigen::Upper>();
    s.condition = condition_of_r( r );
    return s;
}

} // namespace

PseudoInverse pseudoinverse( const Matrix &a, const SolveOptions &options )
{
    auto          qr = factor( a, "pseudoinverse" );
    PseudoInverse out;
    out.condition = qr.condition;
    if ( qr.condition > options.condition_limit )
    {
        if ( !options.allow_regularization )
            rank_error( "pseudoinverse", qr.condition );
        out.value       = ridge_solve( a, Matrix::Identity( a.rows(), a.rows() ) );
        out.regularized = true;
        return out;
    }
    const auto   n  = a.cols();
    const Matrix q1 = qr.qr.householderQ() * Matrix::Identity( a.rows(), n );
    const Matrix r  = qr.qr.matrixQR().topRows( n );
    out.value       = r.triangularView<Eigen::Upper>().solve( q1.transpose() );
    return out;
}

LinearMapFit
fit_linear_map( const MatrixX3 &a, const MatrixX3 &b, const SolveOptions &options )
{
    if ( a.rows() != b.rows() )
        throw InputError( "fit_linear_map: row counts differ" );
    const Matrix am = a;
    auto         qr = factor( am, "fit_linear_map" );
    LinearMapFit out;
    out.condition = qr.condition;
    Matrix m;
    if ( qr.condition > options.condition_limit )
    {
        if ( !options.allow_regularization )
            rank_error( "fit_linear_map", qr.condition );
        m               = ridge_solve( am, b );
        out.regularized = true;
    }
    else
        m = qr.qr.solve( Matrix( b ) );
    if ( !m.allFinite() )
        throw NumericalError( "fit_linear_map: non-finite solution" );
    out.map = CorrectionMatrix( Matrix3( m ) );
    return out;
}

RowScalarFit fit_row_scalars( const MatrixX3 &q, const MatrixX3 &x )
{
    if ( q.rows() != x.rows() )
        throw InputError( "fit_row_scalars: row counts differ" );
    RowScalarFit out;
    out.scalars.resize( q.rows() );
    for ( Eigen::Index j = 0; j < q.rows(); ++j )
    {
        const double vv = q.row( j ).squaredNorm();
        if ( vv == 0.0 )
        {
            out.scalars( j ) = 0.0;
            out.zero_rows.push_back( static_cast<std::size_t>( j ) );
            continue;
        }
        out.scalars( j ) = q.row( j ).dot( x.row( j ) ) / vv;
    }
    return out;
}

FilterSystem build_filter_system(
    std::span<const Matrix>   signals,
    std::span<const MatrixX3> sensors,
    std::span<const Matrix3>  maps,
    std::span<const MatrixX3> targets )
{
    const auto cnt = signals.size();
    if ( cnt == 0 )
        throw InputError( "build_filter_system: no signal sets" );
    if ( sensors.size() != cnt || maps.size() != cnt || targets.size() != cnt )
        throw InputError( "build_filter_system: list lengths differ" );

    const auto  wavelengths = signals[0].rows();
    Eigen::Index total      = 0;
    for ( std::size_t j = 0; j < cnt; ++j )
    {
        if ( signals[j].rows() != wavelengths ||
             sensors[j].rows() != wavelengths )
            throw InputError( "build_filter_system: wavelength counts differ" );
        if ( targets[j].rows() != signals[j].cols() )
            throw InputError(
                "build_filter_system: target rows must equal signal count" );
        total += 3 * signals[j].cols();
    }

    FilterSystem sys;
    sys.design.resize( total, wavelengths );
    sys.target.resize( total );

    Eigen::Index offset = 0;
    for ( std::size_t j = 0; j < cnt; ++j )
    {
        const Matrix  &c = signals[j];
        const MatrixX3 p = sensors[j] * maps[j];
        const auto     n = c.cols();
        for ( Eigen::Index i = 0; i < wavelengths; ++i )
            for ( Eigen::Index k = 0; k < 3; ++k )
                sys.design.block( offset + k * n, i, n, 1 ) =
                    c.row( i ).transpose() * p( i, k );
        for ( Eigen::Index k = 0; k < 3; ++k )
            sys.target.segment( offset + k * n, n ) = targets[j].col( k );
        offset += 3 * n;
    }
    return sys;
}

SignalFactor factor_signals( const Matrix &signals, const MatrixX3 &target )
{
    if ( target.rows() != signals.cols() )
        throw InputError( "factor_signals: target rows must equal signal count" );
    const auto   wl = signals.rows();
    SignalFactor f;
    if ( signals.cols() <= wl )
    {
        f.root   = signals.transpose();
        f.target = target;
        return f;
    }
    Eigen::HouseholderQR<Matrix> qr( signals.transpose() );
    const Matrix                 qt = qr.householderQ().transpose() * Matrix( target );
    f.root     = qr.matrixQR().topRows( wl ).triangularView<Eigen::Upper>();
    f.target   = qt.topRows( wl );
    f.residual = qt.bottomRows( qt.rows() - wl ).squaredNorm();
    return f;
}

FilterSystem compressed_filter_system(
    std::span<const SignalFactor> factors,
    std::span<const MatrixX3>     sensors,
    std::span<const Matrix3>      maps )
{
    const auto cnt = factors.size();
    if ( cnt == 0 || sensors.size() != cnt || maps.size() != cnt )
        throw InputError( "compressed_filter_system: list lengths differ" );
    const auto   wl    = factors[0].root.cols();
    Eigen::Index total = 0;
    for ( std::size_t j = 0; j < cnt; ++j )
    {
        if ( factors[j].root.cols() != wl || sensors[j].rows() != wl )
            throw InputError( "compressed_filter_system: wavelength counts differ" );
        total += 3 * factors[j].root.rows();
    }

    FilterSystem sys;
    sys.design.resize( total, wl );
    sys.target.resize( total );
    Eigen::Index offset = 0;
    for ( std::size_t j = 0; j < cnt; ++j )
    {
        const MatrixX3 p = sensors[j] * maps[j];
        const auto     r = factors[j].root.rows();
        for ( Eigen::Index k = 0; k < 3; ++k )
        {
            sys.design.middleRows( offset, r ) =
                factors[j].root.array().rowwise() * p.col( k ).transpose().array();
            sys.target.segment( offset, r ) = factors[j].target.col( k );
            offset += r;
        }
    }
    return sys;
}

SignalMoments signal_moments( const Matrix &signals, const MatrixX3 &target )
{
    if ( target.rows() != signals.cols() )
        throw InputError( "signal_moments: target rows must equal signal count" );
    SignalMoments m;
    m.gram         = signals * signals.transpose();
    m.cross        = signals * target;
    m.target_norm2 = target.squaredNorm();
    return m;
}

double NormalEquations::objective( const Vector &f ) const
{
    return f.dot( gram * f ) - 2.0 * f.dot( rhs ) + target_norm2;
}

NormalEquations filter_normal_equations(
    std::span<const SignalMoments> moments,
    std::span<const MatrixX3>      sensors,
    std::span<const Matrix3>       maps )
{
    const auto cnt = moments.size();
    if ( cnt == 0 || sensors.size() != cnt || maps.size() != cnt )
        throw InputError( "filter_normal_equations: list lengths differ" );
    const auto      wavelengths = moments[0].gram.rows();
    NormalEquations ne;
    ne.gram = Matrix::Zero( wavelengths, wavelengths );
    ne.rhs  = Vector::Zero( wavelengths );
    for ( std::size_t j = 0; j < cnt; ++j )
    {
        if ( moments[j].gram.rows() != wavelengths ||
             sensors[j].rows() != wavelengths )
            throw InputError( "filter_normal_equations: wavelength counts differ" );
        const MatrixX3 p = sensors[j] * maps[j];
        ne.gram.noalias() +=
            ( moments[j].gram.array() * ( p * p.transpose() ).array() ).matrix();
        ne.rhs.noalias() +=
            ( p.array() * moments[j].cross.array() ).rowwise().sum().matrix();
        ne.target_norm2 += moments[j].target_norm2;
    }
    return ne;
}

NormalEquations normal_equations( const FilterSystem &system )
{
    NormalEquations ne;
    ne.gram         = system.design.transpose() * system.design;
    ne.rhs          = system.design.transpose() * system.target;
    ne.target_norm2 = system.target.squaredNorm();
    return ne;
}

FilterSolve
solve_filter_unconstrained( const FilterSystem &system, const SolveOptions &options )
{
    if ( system.design.rows() != system.target.size() )
        throw InputError( "solve_filter_unconstrained: V and w disagree in size" );
    if ( system.design.rows() < system.design.cols() )
    {
        // Fewer equations than wavelengths: never identifiable.
        if ( !options.allow_regularization )
            rank_error( "solve_filter_unconstrained", std::numeric_limits<double>::infinity() );
        return { ridge_solve( system.design, system.target ),
                 std::numeric_limits<double>::infinity(), true };
    }
    auto        qr = factor( system.design, "solve_filter_unconstrained" );
    FilterSolve out;
    out.condition = qr.condition;
    if ( qr.condition > options.condition_limit )
    {
        if ( !options.allow_regularization )
            rank_error( "solve_filter_unconstrained", qr.condition );
        out.filter      = ridge_solve( system.design, system.target );
        out.regularized = true;
    }
    else
        out.filter = qr.qr.solve( system.target );
    return out;
}

FilterSolve
solve_filter_unconstrained( const NormalEquations &normal, const SolveOptions &options )
{
    const auto n = normal.gram.rows();
    if ( normal.gram.cols() != n || normal.rhs.size() != n )
        throw InputError( "solve_filter_unconstrained: inconsistent normal equations" );
    if ( !normal.gram.allFinite() || !normal.rhs.allFinite() )
        throw NumericalError( "solve_filter_unconstrained: non-finite input" );

    Eigen::SelfAdjointEigenSolver<Matrix> eig( normal.gram, Eigen::EigenvaluesOnly );
    const auto  &ev   = eig.eigenvalues();
    const double lmax = ev( n - 1 );
    const double lmin = ev( 0 );
    FilterSolve  out;
    out.condition = lmin > 0.0 ? std::sqrt( lmax / lmin )
                               : std::numeric_limits<double>::infinity();

    const double limit = std::min( options.condition_limit, 1e7 );
    if ( out.condition > limit )
    {
        if ( !options.allow_regularization )
            rank_error( "solve_filter_unconstrained", out.condition );
        Matrix gram  = normal.gram;
        double ridge = kRidgeWeight * gram.trace() / static_cast<double>( n );
        if ( !( ridge > 0.0 ) )
            ridge = kRidgeWeight;
        gram.diagonal().array() += ridge;
        out.filter      = gram.ldlt().solve( normal.rhs );
        out.regularized = true;
        return out;
    }
    out.filter = normal.gram.llt().solve( normal.rhs );
    return out;
}

} // namespace chromafit
