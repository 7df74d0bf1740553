// SPDX-License-Identifier: Apache-2.0
//
// sprec - geometry-based spatial precoding for space-time block coded MIMO links
// ------------------------------------------------------------------------
//
// Command-line front end.
//
//   sprec solve|ber|pep|corr|modes --config run.json [--out DIR] [--seed N] [--trials N] [--threads N]
//
// Exit codes: 0 ok, 1 internal error, 2 usage, 3 configuration, 4 I/O, 5 numerical or
// domain failure during the run.

#include <cmath>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"

#include "sprec/config.hpp"
#include "sprec/io.hpp"
#include "sprec/report.hpp"
#include "sprec/sim.hpp"
#include "sprec/version.hpp"

namespace
{
    using nlohmann::json;
    using namespace sprec;

    enum Exit
    {
        exit_ok = 0,
        exit_internal = 1,
        exit_usage = 2,
        exit_config = 3,
        exit_io = 4,
        exit_numeric = 5
    };

    struct Options
    {
        std::string config;
        std::string out = ".";
        std::optional<std::uint64_t> seed;
        std::optional<long> trials;
        std::optional<int> threads;
    };

    struct Output
    {
        std::string path;
        std::string content;
    };


    std::string csv_path(const Options &o, const RunConfig &cfg, const std::string &cmd, const char *ext)
    {
        return (std::filesystem::path(o.out) / (cfg.name + "_" + cmd + ext)).string();
    }

    json metadata(const std::string &cmd, const RunConfig &cfg)
    {
        const json echo = emit_config(cfg);
        json meta;
        meta["tool"] = "sprec";
        meta["version"] = sprec::version;
        meta["command"] = cmd;
        meta["seed"] = cfg.seed;
        meta["config_hash"] = hex64(fnv1a64(echo.dump()));
        meta["config"] = echo;
        return meta;
    }

    std::vector<Output> cmd_solve(const Options &o, const RunConfig &cfg)
    {
        const Experiment exp = to_experiment(cfg, true);
        const Codebook book = build_codebook(exp.design, make_psk(exp.psk_order), exp.normalization);
        const EigenmodeProfile profile = experiment_profile(exp);
        if (profile.rank_deficient)
            std::cerr << "warning: transmit configuration matrix is rank deficient; the PEP bound assumes full rank\n";

        std::ostringstream csv;
        csv << "scheme,snr_db,mode,t,q,water_level,water_height,active,f_trace\n";
        json rows = json::array();
        for (double snr_db : exp.snr_db)
        {
            const double snr = std::pow(10.0, snr_db / 10.0);
            const PrecoderSolution sol = design_precoder(exp.scheme, profile, book.beta_min, snr);
            const Allocation &a = sol.allocation;
            for (int i = 0; i < profile.n_tx(); ++i)
            {
                csv << scheme_name(exp.scheme) << ',' << format_double(snr_db) << ',' << i << ','
                    << format_double(profile.t(i)) << ',' << format_double(a.q(i)) << ','
                    << format_double(a.water_level) << ',' << format_double(1.0 / a.water_level) << ','
                    << (a.q(i) > 0.0 ? 1 : 0) << ',' << format_double(sol.trace()) << '\n';
            }
            rows.push_back({{"snr_db", snr_db},
                            {"budget", sol.budget},
                            {"water_level", a.water_level},
                            {"active", a.active},
                            {"q", std::vector<double>(a.q.data(), a.q.data() + a.q.size())}});
        }
        json meta = metadata("solve", cfg);
        meta["beta"] = book.beta_min;
        meta["t"] = std::vector<double>(profile.t.data(), profile.t.data() + profile.t.size());
        meta["r"] = std::vector<double>(profile.r.data(), profile.r.data() + profile.r.size());
        meta["rank_deficient"] = profile.rank_deficient;
        meta["allocations"] = rows;
        return {{csv_path(o, cfg, "solve", ".csv"), csv.str()}, {csv_path(o, cfg, "solve", ".json"), meta.dump(2) + "\n"}};
    }

    std::vector<Output> cmd_ber(const Options &o, const RunConfig &cfg)
    {
        std::string csv = ber_csv_header;
        json meta = metadata("ber", cfg);
        json curves = json::array();
        std::vector<std::vector<BerPoint>> results;
        for (bool state : precoding_states(cfg))
        {
            const Experiment exp = to_experiment(cfg, state);
            const std::vector<BerPoint> points = run_ber(exp);
            append_ber_rows(csv, exp.scheme, state, points);
            json curve = {{"precoded", state}, {"points", json::array()}};
            for (const BerPoint &p : points)
            {
                curve["points"].push_back({{"snr_db", p.snr_db},
                                           {"codewords", p.codewords},
                                           {"codeword_errors", p.codeword_errors},
                                           {"bits", p.bits},
                                           {"bit_errors", p.bit_errors},
                                           {"frames", p.frames},
                                           {"ber", p.ber()}});
            }
            curves.push_back(curve);
            results.push_back(points);
        }
        meta["curves"] = curves;
        if (cfg.target_ber && results.size() == 2)
        {
            try
            {
                meta["precoding_gain_db"] = precoding_gain(results[0], results[1], *cfg.target_ber);
            }
            catch (const RangeError &e)
            {
                meta["precoding_gain_db"] = nullptr;
                meta["precoding_gain_note"] = e.what();
            }
        }
        return {{csv_path(o, cfg, "ber", ".csv"), csv}, {csv_path(o, cfg, "ber", ".json"), meta.dump(2) + "\n"}};
    }

    std::vector<Output> cmd_pep(const Options &o, const RunConfig &cfg)
    {
        std::string csv = pep_csv_header;
        for (bool state : precoding_states(cfg))
        {
            const Experiment exp = to_experiment(cfg, state);
            append_pep_rows(csv, exp.scheme, state, run_pep(exp, cfg.pep_pair));
        }
        return {{csv_path(o, cfg, "pep", ".csv"), csv},
                {csv_path(o, cfg, "pep", ".json"), metadata("pep", cfg).dump(2) + "\n"}};
    }

    std::vector<Output> cmd_corr(const Options &o, const RunConfig &cfg)
    {
        const Experiment exp = to_experiment(cfg, false);
        const ChannelSource source(exp.tx_array, exp.rx_array, exp.scattering, 1);
        std::ostringstream csv;
        const CMatrix &r = source.covariance();
        for (Eigen::Index i = 0; i < r.rows(); ++i)
        {
            for (Eigen::Index j = 0; j < r.cols(); ++j)
                csv << (j > 0 ? "," : "") << format_double(r(i, j).real()) << ',' << format_double(r(i, j).imag());
            csv << '\n';
        }
        json meta = metadata("corr", cfg);
        meta["dimension"] = r.rows();
        meta["layout"] = "row-major E[h^H h] with h = vec(H^T)^T; each entry written as re,im";
        return {{csv_path(o, cfg, "corr", ".csv"), csv.str()}, {csv_path(o, cfg, "corr", ".json"), meta.dump(2) + "\n"}};
    }

    std::vector<Output> cmd_modes(const Options &o, const RunConfig &cfg)
    {
        const Experiment exp = to_experiment(cfg, false);
        const ApertureBasis tx = config_matrix(exp.tx_array);
        const ApertureBasis rx = config_matrix(exp.rx_array);
        const EigenmodeProfile profile = eigenmodes(tx, rx);
        std::ostringstream csv;
        csv << "side,index,gain\n";
        for (int i = 0; i < profile.n_tx(); ++i)
            csv << "tx," << i << ',' << format_double(profile.t(i)) << '\n';
        for (int j = 0; j < profile.n_rx(); ++j)
            csv << "rx," << j << ',' << format_double(profile.r(j)) << '\n';
        json meta = metadata("modes", cfg);
        auto side = [](const ApertureBasis &b, const RVector &g)
        {
            return json{{"antennas", b.antennas()},
                        {"aperture_radius", b.aperture_radius},
                        {"mode_order", b.mode_order},
                        {"modes", b.modes()},
                        {"rank", effective_rank(g)}};
        };
        meta["tx"] = side(tx, profile.t);
        meta["rx"] = side(rx, profile.r);
        std::cout << "tx: " << tx.antennas() << " antennas, radius " << tx.aperture_radius << ", " << tx.modes()
                  << " modes, rank " << effective_rank(profile.t) << "\n"
                  << "rx: " << rx.antennas() << " antennas, radius " << rx.aperture_radius << ", " << rx.modes()
                  << " modes, rank " << effective_rank(profile.r) << "\n";
        return {{csv_path(o, cfg, "modes", ".csv"), csv.str()}, {csv_path(o, cfg, "modes", ".json"), meta.dump(2) + "\n"}};
    }

    int run(const std::string &cmd, const Options &o)
    {
        RunConfig cfg;
        try
        {
            cfg = load_config(o.config);
            if (o.seed)
                cfg.seed = *o.seed;
            if (o.trials)
            {
                if (*o.trials < 1)
                    throw ConfigError("--trials must be at least 1");
                cfg.trials = *o.trials;
            }
            if (o.threads)
            {
                if (*o.threads < 0)
                    throw ConfigError("--threads must be non-negative");
                cfg.threads = *o.threads;
            }
        }
        catch (const IoError &e)
        {
            std::cerr << "error: " << e.what() << "\n";
            return exit_io;
        }
        catch (const ConfigError &e)
        {
            std::cerr << "config error in " << o.config << ": " << e.what() << "\n";
            return exit_config;
        }

        std::vector<Output> outputs;
        try
        {
            if (cmd == "solve")
                outputs = cmd_solve(o, cfg);
            else if (cmd == "ber")
                outputs = cmd_ber(o, cfg);
            else if (cmd == "pep")
                outputs = cmd_pep(o, cfg);
            else if (cmd == "corr")
                outputs = cmd_corr(o, cfg);
            else
                outputs = cmd_modes(o, cfg);
        }
        catch (const ConfigError &e)
        {
            std::cerr << "config error in " << o.config << ": " << e.what() << "\n";
            return exit_config;
        }
        catch (const std::logic_error &e)
        {
            std::cerr << "error: " << e.what() << "\n";
            return exit_numeric;
        }
        catch (const std::runtime_error &e)
        {
            // solver, covariance, codebook and range failures
            std::cerr << "error: " << e.what() << "\n";
            return exit_numeric;
        }

        try
        {
            for (const Output &out : outputs)
            {
                atomic_write(out.path, out.content);
                std::cerr << "wrote " << out.path << "\n";
            }
        }
        catch (const IoError &e)
        {
            std::cerr << "error: " << e.what() << "\n";
            return exit_io;
        }
        return exit_ok;
    }
} // namespace

int main(int argc, char **argv)
{
    CLI::App app{"Geometry-based spatial precoding for orthogonal space-time block codes"};
    app.set_version_flag("--version", std::string(sprec::version));
    app.require_subcommand(1);

    Options opts;
    std::string chosen;
    const std::vector<std::pair<std::string, std::string>> commands = {
        {"solve", "Precoder allocations and water levels per SNR"},
        {"ber", "Monte-Carlo bit error rate sweep"},
        {"pep", "Monte-Carlo pairwise error probability against the Chernoff bound"},
        {"corr", "Dump the channel covariance E[h^H h]"},
        {"modes", "Mode counts, ranks and eigen-gains of the arrays"}};
    for (const auto &[name, help] : commands)
    {
        CLI::App *sub = app.add_subcommand(name, help);
        sub->add_option("--config", opts.config, "Run configuration (JSON)")->required();
        sub->add_option("--out", opts.out, "Output directory")->capture_default_str();
        sub->add_option("--seed", opts.seed, "Master seed (overrides the config)");
        sub->add_option("--trials", opts.trials, "Codewords per SNR point (overrides the config)");
        sub->add_option("--threads", opts.threads, "Worker threads, 0 for the OpenMP default");
        sub->callback([&chosen, name = name] { chosen = name; });
    }

    try
    {
        app.parse(argc, argv);
    }
    catch (const CLI::ParseError &e)
    {
        const int code = app.exit(e);
        return code == 0 ? exit_ok : exit_usage;
    }

    try
    {
        return run(chosen, opts);
    }
    catch (const std::exception &e)
    {
        std::cerr << "internal error: " << e.what() << "\n";
        return exit_internal;
    }
}
