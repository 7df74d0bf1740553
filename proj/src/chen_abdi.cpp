// SPDX-License-Identifier: Apache-2.0
//
// sprec - geometry-based spatial precoding for space-time block coded MIMO links
// ------------------------------------------------------------------------

#include <algorithm>
#include <cmath>

#include "sprec/bessel.hpp"
#include "sprec/channel.hpp"

namespace sprec
{
    // ---------------------------------------------------------------- Chen

    ChenModel::ChenModel(ChenGeometry geometry) : geometry_(std::move(geometry))
    {
        const auto &g = geometry_;
        if (!(g.ring_radius > 0.0))
            throw DomainError("scatterer ring radius must be positive");
        if (g.offsets.size() < 2)
            throw DomainError("Chen geometry needs at least two transmit elements");
        if (!(g.link_distance > g.ring_radius))
            throw DomainError("link distance must exceed the scatterer ring radius");
        if (!(g.doppler_norm >= 0.0))
            throw DomainError("normalized Doppler must be non-negative");

        // centre of the first pair at the origin, receiver on the azimuth-0 axis
        const double centre = 0.5 * (g.offsets[0] + g.offsets[1]);
        const double ux = std::cos(g.pair_angle), uy = std::sin(g.pair_angle);
        rx_x_ = g.link_distance;
        rx_y_ = 0.0;
        for (double s : g.offsets)
        {
            ex_.push_back((s - centre) * ux);
            ey_.push_back((s - centre) * uy);
            if (std::hypot(rx_x_ - ex_.back(), rx_y_ - ey_.back()) <= g.ring_radius)
                throw DomainError("transmit element lies inside the scatterer ring");
        }
    }

    ChenPair ChenModel::resolve(int m, int n) const
    {
        const auto um = static_cast<size_t>(m), un = static_cast<size_t>(n);
        ChenPair p;
        p.d_m = std::hypot(rx_x_ - ex_[um], rx_y_ - ey_[um]);
        p.d_n = std::hypot(rx_x_ - ex_[un], rx_y_ - ey_[un]);
        p.spacing = geometry_.offsets[un] - geometry_.offsets[um];

        const double cx = 0.5 * (ex_[um] + ex_[un]), cy = 0.5 * (ey_[um] + ey_[un]);
        const double vx = rx_x_ - cx, vy = rx_y_ - cy;
        p.distance = std::hypot(vx, vy);
        const double ux = std::cos(geometry_.pair_angle), uy = std::sin(geometry_.pair_angle);
        p.beta = std::acos(std::clamp((ux * vx + uy * vy) / p.distance, -1.0, 1.0));

        const double ax = ex_[um] - rx_x_, ay = ey_[um] - rx_y_;
        const double bx = ex_[un] - rx_x_, by = ey_[un] - rx_y_;
        p.alpha = std::abs(std::atan2(ax * by - ay * bx, ax * bx + ay * by));
        return p;
    }

    cplx ChenModel::correlation(int m, int n, double lag) const
    {
        if (m < 0 || n < 0 || m >= antennas() || n >= antennas())
            throw DimensionError("antenna index out of range");
        if (m > n)
            return std::conj(correlation(n, m, -lag));

        const auto &g = geometry_;
        const double ft = g.doppler_norm * lag;
        double zc = 0.0, zs = 0.0, dd = 0.0;
        if (m != n)
        {
            const ChenPair p = resolve(m, n);
            dd = p.d_m - p.d_n;
            const double scale = 2.0 * g.ring_radius / (p.d_m + p.d_n);
            zc = scale * (p.spacing - dd * std::cos(p.alpha) * std::cos(p.beta));
            zs = scale * dd * std::cos(p.alpha) * std::sin(p.beta);
        }
        const double xc = ft * std::cos(g.motion_angle) + zc;
        const double xs = ft * std::sin(g.motion_angle) - zs;
        const double arg = 2.0 * pi * std::sqrt(xc * xc + xs * xs);
        return std::polar(1.0, 2.0 * pi * dd) * bessel_j(0, arg);
    }

    CMatrix ChenModel::covariance() const
    {
        const int n = antennas();
        CMatrix r(n, n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                r(i, j) = std::conj(correlation(i, j, 0.0));
        return r;
    }

    CMatrix ChenModel::space_time_covariance(int frame_len) const
    {
        if (frame_len < 1)
            throw DomainError("frame length must be positive");
        const int n = antennas();
        CMatrix r(n * frame_len, n * frame_len);
        for (int s = 0; s < frame_len; ++s)
            for (int t = 0; t < frame_len; ++t)
                for (int i = 0; i < n; ++i)
                    for (int j = 0; j < n; ++j)
                        r(s * n + i, t * n + j) = std::conj(correlation(i, j, static_cast<double>(s - t)));
        return r;
    }

    // ---------------------------------------------------------------- Abdi

    AbdiModel::AbdiModel(AbdiGeometry geometry) : geometry_(std::move(geometry))
    {
        if (!(geometry_.kappa >= 0.0))
            throw DomainError("kappa must be non-negative");
        if (!(geometry_.tx_spread >= 0.0) || geometry_.tx_spread >= pi)
            throw DomainError("transmit spread must lie in [0, pi)");
        if (geometry_.tx_xy.empty() || geometry_.rx_xy.empty())
            throw DomainError("Abdi geometry needs transmit and receive elements");
    }

    cplx AbdiModel::correlation(double d_lm, double beta_lm, double delta_pq, double alpha_pq, double lag) const
    {
        const auto &g = geometry_;
        const double a = 2.0 * pi * g.doppler * lag;
        const double b = 2.0 * pi * d_lm;
        const double c = 2.0 * pi * delta_pq;
        const double kappa = g.kappa, mu = g.mean_aoa, gam = g.motion_angle, delta = g.tx_spread;
        const double sa = std::sin(alpha_pq);

        const double re = kappa * kappa - a * a - b * b - c * c * delta * delta * sa * sa
                          + 2.0 * a * b * std::cos(beta_lm - gam)
                          + 2.0 * c * delta * sa * (a * std::sin(gam) - b * std::sin(beta_lm));
        const double im = -2.0 * kappa
                          * (a * std::cos(mu - gam) - b * std::cos(mu - beta_lm) - c * delta * sa * std::sin(mu));
        const cplx i0 = bessel_i0_of_sqrt(cplx(re, im));
        const cplx front = std::polar(1.0, c * std::cos(alpha_pq));
        // I_0(kappa) through the same series keeps the zero-geometry value exactly 1
        return front * i0 / bessel_i0_of_sqrt(cplx(kappa * kappa, 0.0));
    }

    cplx AbdiModel::correlation(int l, int p, int m, int q, double lag) const
    {
        const auto &tx = geometry_.tx_xy;
        const auto &rx = geometry_.rx_xy;
        if (l < 0 || m < 0 || l >= rx_antennas() || m >= rx_antennas() || p < 0 || q < 0 || p >= tx_antennas()
            || q >= tx_antennas())
            throw DimensionError("antenna index out of range");
        const auto ul = static_cast<size_t>(l), um = static_cast<size_t>(m);
        const auto up = static_cast<size_t>(p), uq = static_cast<size_t>(q);
        const double rdx = rx[um].first - rx[ul].first, rdy = rx[um].second - rx[ul].second;
        const double tdx = tx[uq].first - tx[up].first, tdy = tx[uq].second - tx[up].second;
        const double d_lm = std::hypot(rdx, rdy);
        const double delta_pq = std::hypot(tdx, tdy);
        const double beta_lm = d_lm > 0.0 ? std::atan2(rdy, rdx) : 0.0;
        const double alpha_pq = delta_pq > 0.0 ? std::atan2(tdy, tdx) : 0.0;
        return correlation(d_lm, beta_lm, delta_pq, alpha_pq, lag);
    }

    CMatrix AbdiModel::covariance() const
    {
        const int nr = rx_antennas(), nt = tx_antennas();
        CMatrix r(nr * nt, nr * nt);
        for (int l = 0; l < nr; ++l)
            for (int p = 0; p < nt; ++p)
                for (int m = 0; m < nr; ++m)
                    for (int q = 0; q < nt; ++q)
                        r(l * nt + p, m * nt + q) = std::conj(correlation(l, p, m, q, 0.0));
        return r;
    }
} // namespace sprec
