// SPDX-License-Identifier: Apache-2.0
//
// sprec - geometry-based spatial precoding for space-time block coded MIMO links
// ------------------------------------------------------------------------
//
// Fixed spatial precoders from aperture geometry.
//
// The design problem, for transmit eigen-gains t_i and receive eigen-gains r_j, is
//
//     minimize  -sum_j sum_i log(1 + t_i q_i r_j)   s.t.  q >= 0,  sum_i q_i = budget
//
// whose KKT conditions give, for every active index, the water-level equation
//
//     upsilon = sum_j r_j t_i / (1 + r_j t_i q_i)
//
// and q_i = 0 whenever upsilon >= t_i * sum_j r_j. With one receive branch this is
// classical water-filling, q_i = max(0, 1/upsilon - 1/t_i).

#pragma once

#include <vector>

#include "sprec/array_geometry.hpp"
#include "sprec/types.hpp"

namespace sprec
{
    enum class Scheme
    {
        coherent,
        differential
    };

    struct EigenmodeProfile
    {
        RVector t;   // squared singular values of J_T, descending, length n_T
        RVector r;   // squared singular values of J_R, descending, length n_R
        CMatrix u_t; // left singular vectors of J_T in matching order
        CMatrix u_r; // left singular vectors of J_R
        bool rank_deficient = false; // J_T J_T^H has an eigenvalue below 1e-9 of the largest

        int n_tx() const { return static_cast<int>(t.size()); }
        int n_rx() const { return static_cast<int>(r.size()); }
    };

    EigenmodeProfile eigenmodes(const ApertureBasis &tx, const ApertureBasis &rx);

    /// Number of eigen-gains above rel_tol times the largest.
    int effective_rank(const RVector &gains, double rel_tol = 1e-9);

    struct Allocation
    {
        RVector q;
        double water_level = 0.0; // upsilon; the water height is 1/upsilon
        std::vector<int> active;
    };

    Allocation waterfill_miso(const RVector &t, double budget);
    Allocation waterfill_two_rx(const RVector &t, double r1, double r2, double budget);
    Allocation waterfill_three_rx(const RVector &t, const RVector &r, double budget);
    Allocation waterfill_general(const RVector &t, const RVector &r, double budget);

    /// Closed form for n_R <= 3 receive gains, general solver otherwise.
    Allocation waterfill(const RVector &t, const RVector &r, double budget);

    /// Positive root of the n_R = 2 quadratic for one mode, 0 when inactive.
    double two_rx_root(double t, double r1, double r2, double water_level);

    /// Real roots of the n_R = 3 cubic a3 q^3 + a2 q^2 + a1 q + a0 for one mode.
    std::vector<double> three_rx_cubic_roots(double t, const RVector &r, double water_level);

    /// Positive root of the n_R = 3 cubic for one mode, 0 when inactive.
    double three_rx_root(double t, const RVector &r, double water_level);

    /// Positive solution of upsilon = sum_j r_j t / (1 + r_j t q), 0 when inactive.
    double general_root(double t, const RVector &r, double water_level);

    /// Objective -sum_j sum_i log(1 + t_i q_i r_j).
    double allocation_objective(const RVector &t, const RVector &r, const RVector &q);

    /// Largest violation of stationarity on active indices and of dual feasibility on
    /// inactive ones (absolute).
    double kkt_residual(const RVector &t, const RVector &r, const Allocation &alloc);

    /// n_T gamma beta / 4 (coherent) or n_T gamma beta / (8 + beta) (differential).
    double allocation_budget(Scheme scheme, int n_tx, double beta, double snr);

    struct PrecoderSolution
    {
        Allocation allocation;
        double budget = 0.0;
        CMatrix f;

        double trace() const { return f.squaredNorm(); }
    };

    PrecoderSolution coherent_precoder(const EigenmodeProfile &profile, double beta, double snr);
    PrecoderSolution differential_precoder(const EigenmodeProfile &profile, double beta, double snr);
    PrecoderSolution design_precoder(Scheme scheme, const EigenmodeProfile &profile, double beta, double snr);

    /// Chernoff bound 1 / |I + (snr beta / 4) R_H (I (x) F F^H)| for a general channel
    /// covariance R_H = E[h^H h] (n_R n_T square). Throws DomainError when R_H is singular.
    double pep_bound_coherent(const CMatrix &channel_cov, const CMatrix &f, double beta, double snr);

    /// Same bound using the eigenmode form R_RT (I (x) U_T^H F F^H U_T) under rich scattering.
    double pep_bound_coherent(const EigenmodeProfile &profile, const CMatrix &f, double beta, double snr);

    /// (1/2) ((8 + beta)/8)^(-n_T n_R) / |I + (beta snr / (8 + beta)) R_H (I (x) F F^H)|.
    double pep_bound_differential(const CMatrix &channel_cov, const CMatrix &f, double beta, double snr);
    double pep_bound_differential(const EigenmodeProfile &profile, const CMatrix &f, double beta, double snr);

    /// R_H = (U_R^* (x) U_T)(R_R (x) R_T)(U_R^T (x) U_T^H) for rich scattering.
    CMatrix eigenmode_channel_covariance(const EigenmodeProfile &profile);
} // namespace sprec
