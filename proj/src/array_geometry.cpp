// SPDX-License-Identifier: Apache-2.0
//
// sprec - geometry-based spatial precoding for space-time block coded MIMO links
// ------------------------------------------------------------------------

#include "sprec/array_geometry.hpp"

#include <algorithm>
#include <cmath>

#include "sprec/bessel.hpp"

namespace sprec
{
    double wrap_angle(double a)
    {
        double w = std::fmod(a + pi, 2.0 * pi);
        if (w < 0.0)
            w += 2.0 * pi;
        w -= pi;
        // fmod rounding can land exactly on +pi
        if (w >= pi)
            w -= 2.0 * pi;
        return w;
    }

    AntennaArray::AntennaArray(std::vector<PolarPosition> positions) : positions_(std::move(positions))
    {
        if (positions_.empty())
            throw DomainError("antenna array must contain at least one element");
        for (auto &p : positions_)
        {
            if (!(p.radius >= 0.0) || !std::isfinite(p.radius))
                throw DomainError("antenna radius must be finite and non-negative");
            if (!std::isfinite(p.azimuth))
                throw DomainError("antenna azimuth must be finite");
            p.azimuth = wrap_angle(p.azimuth);
        }
    }

    AntennaArray AntennaArray::from_cartesian(const std::vector<std::pair<double, double>> &xy)
    {
        std::vector<PolarPosition> pos;
        pos.reserve(xy.size());
        for (const auto &[x, y] : xy)
            pos.push_back({std::hypot(x, y), std::atan2(y, x)});
        return AntennaArray(std::move(pos));
    }

    double AntennaArray::aperture_radius() const
    {
        double r = 0.0;
        for (const auto &p : positions_)
            r = std::max(r, p.radius);
        return r;
    }

    double AntennaArray::x(int i) const
    {
        const auto &p = positions_.at(static_cast<size_t>(i));
        return p.radius * std::cos(p.azimuth);
    }

    double AntennaArray::y(int i) const
    {
        const auto &p = positions_.at(static_cast<size_t>(i));
        return p.radius * std::sin(p.azimuth);
    }

    AntennaArray AntennaArray::rotated(double theta) const
    {
        auto pos = positions_;
        for (auto &p : pos)
            p.azimuth += theta;
        return AntennaArray(std::move(pos));
    }

    int mode_count(double aperture_radius)
    {
        if (!(aperture_radius >= 0.0))
            throw DomainError("aperture radius must be non-negative");
        constexpr double e = 2.718281828459045;
        // the 1e-12 slack keeps exact products such as 0.0 from rounding up
        return static_cast<int>(std::ceil(pi * e * aperture_radius - 1e-12));
    }

    cplx smf(const PolarPosition &position, int mode_index)
    {
        const double kr = 2.0 * pi * position.radius;
        const double amp = bessel_j(mode_index, kr);
        const double phase = static_cast<double>(mode_index) * (position.azimuth - pi / 2.0);
        return std::polar(amp, phase);
    }

    ApertureBasis config_matrix(const AntennaArray &array)
    {
        ApertureBasis basis;
        basis.aperture_radius = array.aperture_radius();
        basis.mode_order = mode_count(basis.aperture_radius);
        const int n_modes = 2 * basis.mode_order + 1;
        basis.matrix.resize(array.size(), n_modes);
        for (int t = 0; t < array.size(); ++t)
            for (int m = 0; m < n_modes; ++m)
                basis.matrix(t, m) = smf(array.positions()[static_cast<size_t>(t)], m - basis.mode_order);
        return basis;
    }

    AntennaArray make_ula(int n, double spacing)
    {
        if (n < 1)
            throw DomainError("ULA needs at least one element");
        if (n > 1 && !(spacing > 0.0))
            throw DomainError("ULA spacing must be positive");
        std::vector<std::pair<double, double>> xy;
        for (int i = 0; i < n; ++i)
            xy.emplace_back((i - 0.5 * (n - 1)) * spacing, 0.0);
        return AntennaArray::from_cartesian(xy);
    }

    AntennaArray make_uca(int n, double min_adjacent_spacing)
    {
        if (n < 1)
            throw DomainError("UCA needs at least one element");
        if (n == 1)
            return AntennaArray({PolarPosition{0.0, 0.0}});
        if (!(min_adjacent_spacing > 0.0))
            throw DomainError("UCA spacing must be positive");
        const double radius = min_adjacent_spacing / (2.0 * std::sin(pi / n));
        std::vector<PolarPosition> pos;
        for (int i = 0; i < n; ++i)
            pos.push_back({radius, 2.0 * pi * i / n});
        return AntennaArray(std::move(pos));
    }
} // namespace sprec
