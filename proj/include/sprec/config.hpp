// SPDX-License-Identifier: Apache-2.0
//
// sprec - geometry-based spatial precoding for space-time block coded MIMO links
// ------------------------------------------------------------------------
//
// Run configuration documents. Angles are given in degrees, lengths in wavelengths
// and SNR in dB; conversion to internal units happens in to_experiment().

#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

#include "sprec/sim.hpp"

namespace sprec
{
    inline constexpr int schema_version = 1;

    /// Invalid configuration; pointer() is the JSON pointer of the offending value.
    class ConfigError : public std::runtime_error
    {
    public:
        ConfigError(const std::string &what, std::string pointer = "")
            : std::runtime_error(pointer.empty() ? what : pointer + ": " + what), pointer_(std::move(pointer))
        {
        }
        const std::string &pointer() const { return pointer_; }

    private:
        std::string pointer_;
    };

    struct ArraySpec
    {
        std::string type = "single"; // single | ula | uca | points
        int count = 1;
        double spacing = 0.0;
        std::vector<std::pair<double, double>> xy;
    };

    struct ScatteringConfig
    {
        std::string model = "isotropic";
        std::optional<double> tx_spread_deg; // angular spread (std. dev.) of a uniform-limited APD
        double tx_mean_deg = 0.0;
        std::optional<double> rx_spread_deg;
        double rx_mean_deg = 0.0;

        double ring_radius = 30.0;
        double link_distance = 1000.0;
        double pair_angle_deg = 60.0;
        double motion_angle_deg = 20.0;
        double doppler_norm = 0.001;

        double kappa = 0.0;
        double mean_aoa_deg = 0.0;
        double tx_halfspread_deg = 0.0; // two-ring transmit spread
        double doppler = 0.0;
    };

    struct RunConfig
    {
        std::string name = "run";
        std::uint64_t seed = 1;
        int threads = 0;
        ArraySpec tx;
        ArraySpec rx;
        ScatteringConfig scattering;
        std::string design = "alamouti";
        int psk = 4;
        std::string normalization = "unit_energy";
        std::string scheme = "coherent";
        std::string precoding = "both"; // on | off | both
        std::vector<double> snr_db;
        long trials = 10000;
        long stop_errors = 0;
        int frame_len = 0;
        std::optional<std::pair<int, int>> pep_pair;
        std::optional<double> target_ber;
    };

    /// Parses and validates a document. Throws ConfigError with a JSON pointer (schema
    /// problems) or with line and column (syntax errors).
    RunConfig parse_config(const std::string &text);
    RunConfig load_config(const std::string &path);

    /// Canonical document with every field present; parse_config(emit) reproduces cfg.
    nlohmann::json emit_config(const RunConfig &cfg);

    AntennaArray build_array(const ArraySpec &spec);

    /// Experiment with precoding forced on or off. Throws ConfigError for inconsistent setups.
    Experiment to_experiment(const RunConfig &cfg, bool precoded);

    /// Precoding states requested by cfg.precoding, off first.
    std::vector<bool> precoding_states(const RunConfig &cfg);
} // namespace sprec
