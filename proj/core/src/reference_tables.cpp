// SPDX-License-Identifier: Apache-2.0
// Copyright Contributors to the chromafit Project.

#include "reference_tables.hpp"

#include <cmath>

namespace chromafit::detail
{

std::vector<CmfRow> cie1931_2deg()
{
    return {
        {360, 0.0001299, 3.917e-06, 0.0006061},
        {370, 0.0004149, 1.239e-05, 0.001946},
        {380, 0.001368, 3.9e-05, 0.006450001},
        {390, 0.004243, 0.00012, 0.02005001},
        {400, 0.01431, 0.000396, 0.06785001},
        {410, 0.04351, 0.00121, 0.2074},
        {420, 0.13438, 0.004, 0.6456},
        {430, 0.2839, 0.0116, 1.3856},
        {440, 0.34828, 0.023, 1.74706},
        {450, 0.3362, 0.038, 1.77211},
        {460, 0.2908, 0.06, 1.6692},
        {470, 0.19536, 0.09098, 1.28764},
        {480, 0.09564, 0.13902, 0.8129501},
        {490, 0.03201, 0.20802, 0.46518},
        {500, 0.0049, 0.323, 0.272},
        {510, 0.0093, 0.503, 0.1582},
        {520, 0.06327, 0.71, 0.07824999},
        {530, 0.1655, 0.862, 0.04216},
        {540, 0.2904, 0.954, 0.0203},
        {550, 0.4334499, 0.9949501, 0.008749999},
        {560, 0.5945, 0.995, 0.0039},
        {570, 0.7621, 0.952, 0.0021},
        {580, 0.9163, 0.87, 0.001650001},
        {590, 1.0263, 0.757, 0.0011},
        {600, 1.0622, 0.631, 0.0008},
        {610, 1.0026, 0.503, 0.00034},
        {620, 0.8544499, 0.381, 0.00019},
        {630, 0.6424, 0.265, 5e-05},
        {640, 0.4479, 0.175, 2e-05},
        {650, 0.2835, 0.107, 0},
        {660, 0.1649, 0.061, 0},
        {670, 0.0874, 0.032, 0},
        {680, 0.04677, 0.017, 0},
        {690, 0.0227, 0.00821, 0},
        {700, 0.01135916, 0.004102, 0},
        {710, 0.005790346, 0.002091, 0},
        {720, 0.002899327, 0.001047, 0},
        {730, 0.001439971, 0.00052, 0},
        {740, 0.0006900786, 0.0002492, 0},
        {750, 0.0003323011, 0.00012, 0},
        {760, 0.0001661505, 6e-05, 0},
        {770, 8.307527e-05, 3e-05, 0},
        {780, 4.150994e-05, 1.499e-05, 0},
        {790, 2.067383e-05, 7.4657e-06, 0},
        {800, 1.025398e-05, 3.7029e-06, 0},
        {810, 5.085868e-06, 1.8366e-06, 0},
        {820, 2.522525e-06, 9.1093e-07, 0},
        {830, 1.251141e-06, 4.5181e-07, 0},
    };
}

std::vector<std::pair<double, double>> cie_d65()
{
    return {
        { 360, 46.6383 }, { 370, 52.0891 }, { 380, 49.9755 }, { 390, 54.6482 },
        { 400, 82.7549 }, { 410, 91.4860 }, { 420, 93.4318 }, { 430, 86.6823 },
        { 440, 104.865 }, { 450, 117.008 }, { 460, 117.812 }, { 470, 114.861 },
        { 480, 115.923 }, { 490, 108.811 }, { 500, 109.354 }, { 510, 107.802 },
        { 520, 104.790 }, { 530, 107.689 }, { 540, 104.405 }, { 550, 104.046 },
        { 560, 100.000 }, { 570, 96.3342 }, { 580, 95.7880 }, { 590, 88.6856 },
        { 600, 90.0062 }, { 610, 89.5991 }, { 620, 87.6987 }, { 630, 83.2886 },
        { 640, 83.6992 }, { 650, 80.0268 }, { 660, 80.2146 }, { 670, 82.2778 },
        { 680, 78.2842 }, { 690, 69.7213 }, { 700, 71.6091 }, { 710, 61.6040 },
        { 720, 69.8856 }, { 730, 72.4863 }, { 740, 74.3026 }, { 750, 63.5927 },
        { 760, 46.4182 }, { 770, 66.8054 }, { 780, 63.3828 },
    };
}

std::vector<std::pair<double, double>> cie_a()
{
    constexpr double c2 = 1.435e7; // nm K
    constexpr double t  = 2848.0; // 2856 K expressed with c2 = 1.435e-2 m K
    const double     norm = std::exp( c2 / ( t * 560.0 ) ) - 1.0;

    std::vector<std::pair<double, double>> rows;
    for ( int wl = 300; wl <= 830; wl += 5 )
    {
        const double l = wl;
        const double v = 100.0 * std::pow( 560.0 / l, 5.0 ) * norm /
                         ( std::exp( c2 / ( t * l ) ) - 1.0 );
        rows.emplace_back( l, v );
    }
    return rows;
}

} // namespace chromafit::detail
