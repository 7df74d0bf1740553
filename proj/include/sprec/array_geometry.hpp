// SPDX-License-Identifier: Apache-2.0
//
// sprec - geometry-based spatial precoding for space-time block coded MIMO links
// ------------------------------------------------------------------------

#pragma once

#include <vector>

#include "sprec/types.hpp"

namespace sprec
{
    // All lengths are in wavelengths (wavelength normalized to 1).
    struct PolarPosition
    {
        double radius = 0.0;
        double azimuth = 0.0; // radians, wrapped to [-pi, pi)
    };

    /// Antenna element positions relative to the array origin.
    class AntennaArray
    {
    public:
        AntennaArray() = default;

        // Throws DomainError on empty input or negative radius. Azimuths are wrapped.
        explicit AntennaArray(std::vector<PolarPosition> positions);

        static AntennaArray from_cartesian(const std::vector<std::pair<double, double>> &xy);

        const std::vector<PolarPosition> &positions() const { return positions_; }
        int size() const { return static_cast<int>(positions_.size()); }
        double aperture_radius() const;

        double x(int i) const;
        double y(int i) const;

        /// Copy rotated by a common azimuth offset.
        AntennaArray rotated(double theta) const;

    private:
        std::vector<PolarPosition> positions_;
    };

    /// Configuration matrix of an aperture: rows are antennas, columns are modes -N..N.
    struct ApertureBasis
    {
        CMatrix matrix;
        int mode_order = 0;
        double aperture_radius = 0.0;

        int antennas() const { return static_cast<int>(matrix.rows()); }
        int modes() const { return static_cast<int>(matrix.cols()); }
    };

    double wrap_angle(double a);

    /// Mode order N = ceil(pi * e * r) for an aperture of radius r wavelengths.
    /// The aperture carries 2N+1 effective modes.
    int mode_count(double aperture_radius);

    /// Spatial-to-mode function J_n(k|w|) exp(i n (phi_w - pi/2)) with k = 2 pi.
    cplx smf(const PolarPosition &position, int mode_index);

    ApertureBasis config_matrix(const AntennaArray &array);

    /// Uniform linear array along the azimuth-0 axis, centred on the origin.
    AntennaArray make_ula(int n, double spacing);

    /// Uniform circular array whose adjacent chord equals min_adjacent_spacing.
    AntennaArray make_uca(int n, double min_adjacent_spacing);
} // namespace sprec
