// SPDX-License-Identifier: Apache-2.0
// Copyright Contributors to the chromafit Project.

#include "chromafit/app.hpp"

#include <iostream>

int main( int argc, char **argv )
{
    return chromafit::app::run( argc, argv, std::cout, std::cerr );
}
