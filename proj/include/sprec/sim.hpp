// SPDX-License-Identifier: Apache-2.0
//
// sprec - geometry-based spatial precoding for space-time block coded MIMO links
// ------------------------------------------------------------------------
//
// Monte-Carlo link simulation: Y = sqrt(E_s) H F S + N with E_s = 1 and N entries
// CN(0, sigma^2), so the average SNR is 1 / sigma^2.

#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "sprec/array_geometry.hpp"
#include "sprec/channel.hpp"
#include "sprec/precoder.hpp"
#include "sprec/rng.hpp"
#include "sprec/stbc.hpp"

namespace sprec
{
    enum class ScatteringKind
    {
        iid,             // H itself has i.i.d. CN(0,1) entries, no geometry
        isotropic,       // H_S i.i.d., H = J_R H_S J_T^H
        kronecker_modal, // H_S with R_S = M_R (x) M_T from uniform-limited APDs
        chen,            // single receive antenna, time-selective ring model
        abdi             // static two-ring style covariance
    };

    ScatteringKind parse_scattering(const std::string &name);
    std::string to_string(ScatteringKind k);

    struct ScatteringSpec
    {
        ScatteringKind kind = ScatteringKind::isotropic;

        // kronecker_modal: half-widths and mean angles in radians; a half-width of pi is isotropic
        double tx_halfwidth = pi;
        double tx_mean = 0.0;
        double rx_halfwidth = pi;
        double rx_mean = 0.0;

        ChenGeometry chen;  // offsets taken from the transmit array when empty
        AbdiGeometry abdi;  // element coordinates taken from the arrays when empty
    };

    struct Experiment
    {
        AntennaArray tx_array;
        AntennaArray rx_array;
        ScatteringSpec scattering;
        Design design = Design::alamouti;
        int psk_order = 4;
        Normalization normalization = Normalization::unit_energy;
        Scheme scheme = Scheme::coherent;
        bool precoded = false;
        std::vector<double> snr_db;
        long trials = 10000;     // data codewords per SNR point (upper bound when stop_errors > 0)
        long stop_errors = 0;    // stop a point once this many codeword errors are seen; 0 disables
        int frame_len = 0;       // codeword blocks per channel draw; 0 picks the scheme default
        std::uint64_t seed = 1;
        int threads = 0;         // 0 leaves the OpenMP default

        int effective_frame_len() const;
        /// Data codewords per frame (the differential reference block carries none).
        int data_per_frame() const;
    };

    /// Throws DomainError / UnsupportedDesign for inconsistent experiments.
    void validate(const Experiment &exp);

    struct BerPoint
    {
        double snr_db = 0.0;
        long codewords = 0;
        long codeword_errors = 0;
        long bits = 0;
        long bit_errors = 0;
        long frames = 0;

        double ber() const { return bits > 0 ? static_cast<double>(bit_errors) / static_cast<double>(bits) : 0.0; }
        bool operator==(const BerPoint &) const = default;
    };

    struct PepPoint
    {
        double snr_db = 0.0;
        long trials = 0;
        long errors = 0;
        double bound = 0.0;     // NaN when the channel covariance is singular
        double beta = 0.0;

        double pep() const { return trials > 0 ? static_cast<double>(errors) / static_cast<double>(trials) : 0.0; }
        /// Binomial standard error of pep().
        double sigma() const;
    };

    /// Draws frames of channel matrices for one scattering configuration.
    class ChannelSource
    {
    public:
        ChannelSource(const AntennaArray &tx, const AntennaArray &rx, const ScatteringSpec &spec, int blocks);

        int n_tx() const { return n_tx_; }
        int n_rx() const { return n_rx_; }
        int blocks() const { return blocks_; }
        bool time_varying() const { return st_.dimension() > n_tx_; }

        /// One channel per block; quasi-static kinds repeat the same matrix.
        void draw(Rng &rng, std::vector<CMatrix> &frame) const;

        /// E[h^H h] of a single block, h = vec(H^T)^T.
        const CMatrix &covariance() const { return covariance_; }

    private:
        ScatteringSpec spec_;
        int n_tx_ = 0, n_rx_ = 0, blocks_ = 1;
        ApertureBasis j_tx_, j_rx_;
        CovarianceSampler scatter_;  // kronecker_modal, over H_S
        CovarianceSampler direct_;   // abdi, over H
        CovarianceSampler st_;       // chen, over the stacked frame
        CMatrix covariance_;
    };

    /// Precoder for one SNR point: the designed F when exp.precoded, identity otherwise.
    CMatrix precoder_for(const Experiment &exp, const EigenmodeProfile &profile, double beta, double snr);

    EigenmodeProfile experiment_profile(const Experiment &exp);

    /// Per-frame kernel shared by the parallel engine and the serial reference.
    struct FrameTally
    {
        long codewords = 0;
        long codeword_errors = 0;
        long bit_errors = 0;
    };

    struct FrameContext
    {
        const Experiment *exp = nullptr;
        const Codebook *book = nullptr;
        const ChannelSource *source = nullptr;
        CMatrix f;
        double noise_var = 1.0;
        std::size_t point = 0;
    };

    FrameTally simulate_frame(const FrameContext &ctx, long frame, int data_codewords);

    /// OpenMP engine. Frames run in fixed waves and merge in frame order, so the result
    /// does not depend on the thread count.
    std::vector<BerPoint> run_ber(const Experiment &exp);

    /// Single-threaded reference, identical output to run_ber.
    std::vector<BerPoint> run_ber_serial(const Experiment &exp);

    /// Two-codeword Monte-Carlo PEP for the pair (i, j) and the matching Chernoff bound.
    /// trials come from exp.trials; pair defaults to the minimum-distance pair.
    std::vector<PepPoint> run_pep(const Experiment &exp, std::optional<std::pair<int, int>> pair = std::nullopt);

    /// SNR at which a BER curve first crosses `target`, interpolating log10(BER)
    /// linearly in dB. Throws RangeError when the curve never crosses.
    double snr_at_ber(const std::vector<BerPoint> &curve, double target);

    /// snr_at_ber(plain) - snr_at_ber(precoded).
    double precoding_gain(const std::vector<BerPoint> &plain, const std::vector<BerPoint> &precoded, double target);

    /// Bit error rate of Alamouti over i.i.d. Rayleigh with n_R = 1, coherent, Gray QPSK.
    double alamouti_qpsk_ber(double snr_db);

    /// Frame wave size used by run_ber.
    inline constexpr long frame_wave = 1024;
} // namespace sprec
