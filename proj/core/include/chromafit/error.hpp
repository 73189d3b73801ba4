// SPDX-License-Identifier: Apache-2.0
// Copyright Contributors to the chromafit Project.

#pragma once

#include <stdexcept>
#include <string>

namespace chromafit
{

/// Base class for every error raised by the library.
class Error : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

/// Malformed or inconsistent input: bad files, grid mismatches, shape
/// errors, out-of-range parameters. The CLI maps these to exit code 2.
class InputError : public Error
{
public:
    using Error::Error;
};

/// A computation could not produce a trustworthy answer (rank deficiency
/// without fallback, non-finite iterates, solver non-convergence).
/// The CLI maps these to exit code 1.
class NumericalError : public Error
{
public:
    using Error::Error;
};

/// The constraint set of a QP/LP is empty.
class InfeasibleError : public NumericalError
{
public:
    using NumericalError::NumericalError;
};

} // namespace chromafit
