// SPDX-License-Identifier: Apache-2.0
// Copyright Contributors to the chromafit Project.

#include <benchmark/benchmark.h>

BENCHMARK_MAIN();
