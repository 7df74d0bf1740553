// SPDX-License-Identifier: Apache-2.0
//
// sprec - geometry-based spatial precoding for space-time block coded MIMO links
// ------------------------------------------------------------------------
//
// Scattering statistics and channel realization.
//
// Vectorization convention used throughout: a channel H (n_R x n_T) is flattened
// row by row, h = vec(H^T)^T, so entry (r, t) sits at index r * n_T + t. Every
// covariance returned by this module is R = E[h^H h] in that ordering.

#pragma once

#include <iosfwd>
#include <vector>

#include "sprec/array_geometry.hpp"
#include "sprec/rng.hpp"
#include "sprec/types.hpp"

namespace sprec
{
    enum class Side
    {
        transmitter,
        receiver
    };

    struct ModalCorrelation
    {
        CMatrix matrix;
        Side side = Side::transmitter;

        int mode_order() const { return static_cast<int>((matrix.rows() - 1) / 2); }
    };

    /// Unnormalized sinc, sin(x)/x with sinc(0) = 1.
    double sinc(double x);

    /// Modal correlation of a uniform-limited azimuth power distribution of half-width
    /// `spread` around `mean_angle`. Throws DomainError unless 0 < spread <= pi.
    ModalCorrelation modal_corr_uniform_limited(double spread, double mean_angle, int mode_order,
                                                Side side = Side::transmitter);

    ModalCorrelation modal_corr_isotropic(int mode_order, Side side = Side::transmitter);

    /// Half-width of the uniform-limited distribution with angular spread (std. dev.) sigma.
    inline double uniform_limited_halfwidth(double angular_spread) { return std::sqrt(3.0) * angular_spread; }

    /// R_S = M_R (x) M_T.
    CMatrix scattering_covariance(const ModalCorrelation &rx, const ModalCorrelation &tx);

    /// Hermitian square root of a PSD matrix. Eigenvalues in [-1e-10, 0) are clamped
    /// to zero, anything more negative throws NotPsdError.
    CMatrix psd_sqrt(const CMatrix &m);

    /// Draws vectors h with E[h^H h] = R from i.i.d. unit-variance complex Gaussians.
    class CovarianceSampler
    {
    public:
        CovarianceSampler() = default;
        explicit CovarianceSampler(const CMatrix &covariance);

        int dimension() const { return static_cast<int>(mixing_.rows()); }
        const CMatrix &mixing() const { return mixing_; }

        /// One draw, h as a column vector of length dimension().
        CVector draw(Rng &rng) const;

        /// One draw reshaped row-major into rows x cols.
        CMatrix draw_matrix(Rng &rng, int rows, int cols) const;

    private:
        CMatrix mixing_;
    };

    /// Scattering channel H_S of shape rows x cols with E[h_S^H h_S] = R_S.
    CMatrix realize_scattering(const CMatrix &scattering_cov, int rows, int cols, Rng &rng);

    /// H = J_R H_S J_T^H.
    CMatrix assemble_channel(const ApertureBasis &rx, const CMatrix &scattering, const ApertureBasis &tx);

    /// Full MIMO covariance (J_R^* M_R J_R^T) (x) (J_T M_T J_T^H).
    CMatrix channel_covariance(const ApertureBasis &tx, const ApertureBasis &rx, const ModalCorrelation &m_tx,
                               const ModalCorrelation &m_rx);

    /// Channel H (n_rx x n_tx) with E[h^H h] = R.
    CMatrix realize_from_covariance(const CMatrix &covariance, int n_rx, int n_tx, Rng &rng);

    /// Hermitian within tol (absolute) and minimum eigenvalue >= -1e-10.
    bool is_hermitian_psd(const CMatrix &m, double tol = 1e-12);

    // --------------------------------------------------------------------
    // Geometric correlation models

    /// Single-antenna receiver on a ring of scatterers, far from a transmit array.
    struct ChenGeometry
    {
        double ring_radius = 30.0;      // a, wavelengths
        double link_distance = 1000.0;  // receiver to centre of the first antenna pair
        double pair_angle = pi / 3.0;   // angle between array axis and the first pair's line of sight
        double motion_angle = pi / 9.0; // receiver direction of motion w.r.t. the array end-fire
        double doppler_norm = 0.001;    // f_D * T
        std::vector<double> offsets;    // element coordinates along the array axis
    };

    /// Resolved per-pair quantities of a ChenGeometry.
    struct ChenPair
    {
        double d_m = 0.0, d_n = 0.0; // element-to-receiver distances
        double spacing = 0.0;        // signed spacing along the array axis, n relative to m
        double alpha = 0.0;          // angle the pair subtends at the receiver
        double beta = 0.0;           // angle between array axis and the pair-centre line of sight
        double distance = 0.0;       // receiver to pair centre
    };

    class ChenModel
    {
    public:
        explicit ChenModel(ChenGeometry geometry);

        int antennas() const { return static_cast<int>(geometry_.offsets.size()); }
        const ChenGeometry &geometry() const { return geometry_; }

        ChenPair resolve(int m, int n) const;

        /// Space-time cross correlation E[h_m(t + lag) h_n(t)^*], lag in codeword periods.
        cplx correlation(int m, int n, double lag) const;

        /// 1 x n_T channel covariance E[h^H h] at zero lag.
        CMatrix covariance() const;

        /// Covariance of the stacked process [h(0), h(1), ..., h(L-1)].
        CMatrix space_time_covariance(int frame_len) const;

    private:
        ChenGeometry geometry_;
        double rx_x_ = 0.0, rx_y_ = 0.0;
        std::vector<double> ex_, ey_; // element positions
    };

    /// Two-ring style MIMO model with non-isotropic transmit spread.
    struct AbdiGeometry
    {
        double kappa = 0.0;        // receive AOA concentration
        double mean_aoa = 0.0;     // mu
        double motion_angle = 0.0; // gamma
        double tx_spread = 0.0;    // Delta, radians
        double doppler = 0.0;      // f_D in units of 1/lag
        std::vector<std::pair<double, double>> tx_xy, rx_xy;
    };

    class AbdiModel
    {
    public:
        explicit AbdiModel(AbdiGeometry geometry);

        int tx_antennas() const { return static_cast<int>(geometry_.tx_xy.size()); }
        int rx_antennas() const { return static_cast<int>(geometry_.rx_xy.size()); }

        /// E[h_{lp}(t + lag) h_{mq}(t)^*] for receive elements l, m and transmit elements p, q.
        cplx correlation(int l, int p, int m, int q, double lag) const;

        /// Closed form with explicit spacings; b = 2 pi d_lm, c = 2 pi delta_pq.
        cplx correlation(double d_lm, double beta_lm, double delta_pq, double alpha_pq, double lag) const;

        /// Channel covariance E[h^H h] at zero lag.
        CMatrix covariance() const;

    private:
        AbdiGeometry geometry_;
    };

    // --------------------------------------------------------------------
    // Export

    /// Row-major CSV, each entry written as "re,im".
    void write_complex_csv(std::ostream &os, const CMatrix &m);
} // namespace sprec
