// SPDX-License-Identifier: Apache-2.0
// Copyright Contributors to the chromafit Project.

#pragma once

#include <utility>
#include <vector>

namespace chromafit::detail
{

struct CmfRow
{
    double wavelength;
    double x, y, z;
};

/// CIE 1931 2-degree standard observer, 360..830 nm at 10 nm.
std::vector<CmfRow> cie1931_2deg();

/// CIE standard illuminant D65 relative SPD, 360..780 nm at 10 nm.
std::vector<std::pair<double, double>> cie_d65();

/// CIE standard illuminant A from its defining Planckian formula
/// (T = 2848 K with c2 = 1.435e-2 m K, normalized to 100 at 560 nm),
/// 300..830 nm at 5 nm.
std::vector<std::pair<double, double>> cie_a();

} // namespace chromafit::detail
