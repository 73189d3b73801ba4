// SPDX-License-Identifier: Apache-2.0
// Copyright Contributors to the chromafit Project.

#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace chromafit::app
{

/// Exit codes of the command-line tool.
enum ExitCode : int
{
    Success        = 0,
    NumericalFault = 1,
    InputFault     = 2
};

/// Entry point shared by the executable and the tests.
int run( int argc, const char *const *argv, std::ostream &out, std::ostream &err );
int run( const std::vector<std::string> &args, std::ostream &out, std::ostream &err );

} // namespace chromafit::app
