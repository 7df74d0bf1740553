// SPDX-License-Identifier: Apache-2.0
//
// sprec - geometry-based spatial precoding for space-time block coded MIMO links
// ------------------------------------------------------------------------

#include "sprec/config.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "sprec/io.hpp"

namespace sprec
{
    namespace
    {
        using nlohmann::json;

        // Typed access to one JSON object; rejects keys nobody asked for.
        class ObjectReader
        {
        public:
            ObjectReader(const json &node, std::string pointer) : node_(node), pointer_(std::move(pointer))
            {
                if (!node_.is_object())
                    throw ConfigError("expected an object", pointer_.empty() ? "/" : pointer_);
            }

            bool has(const std::string &key)
            {
                seen_.insert(key);
                return node_.contains(key) && !node_.at(key).is_null();
            }

            std::string path(const std::string &key) const { return pointer_ + "/" + key; }

            const json &at(const std::string &key) { return node_.at(key); }

            double number(const std::string &key, double fallback)
            {
                if (!has(key))
                    return fallback;
                const json &v = node_.at(key);
                if (!v.is_number())
                    throw ConfigError("expected a number", path(key));
                const double d = v.get<double>();
                if (!std::isfinite(d))
                    throw ConfigError("expected a finite number", path(key));
                return d;
            }

            std::optional<double> optional_number(const std::string &key)
            {
                if (!has(key))
                    return std::nullopt;
                return number(key, 0.0);
            }

            long integer(const std::string &key, long fallback)
            {
                if (!has(key))
                    return fallback;
                const json &v = node_.at(key);
                if (!v.is_number_integer())
                    throw ConfigError("expected an integer", path(key));
                return v.get<long>();
            }

            std::uint64_t unsigned_integer(const std::string &key, std::uint64_t fallback)
            {
                if (!has(key))
                    return fallback;
                const json &v = node_.at(key);
                if (!v.is_number_unsigned())
                    throw ConfigError("expected a non-negative integer", path(key));
                return v.get<std::uint64_t>();
            }

            std::string text(const std::string &key, const std::string &fallback,
                             std::initializer_list<const char *> allowed = {})
            {
                if (!has(key))
                    return fallback;
                const json &v = node_.at(key);
                if (!v.is_string())
                    throw ConfigError("expected a string", path(key));
                std::string s = v.get<std::string>();
                if (allowed.size() > 0)
                {
                    bool ok = false;
                    std::string options;
                    for (const char *a : allowed)
                    {
                        ok = ok || s == a;
                        options += options.empty() ? a : std::string(", ") + a;
                    }
                    if (!ok)
                        throw ConfigError("'" + s + "' is not one of: " + options, path(key));
                }
                return s;
            }

            void finish() const
            {
                for (auto it = node_.begin(); it != node_.end(); ++it)
                    if (!seen_.count(it.key()))
                        throw ConfigError("unknown key", path(it.key()));
            }

        private:
            const json &node_;
            std::string pointer_;
            std::set<std::string> seen_;
        };

        ArraySpec read_array(const json &node, const std::string &pointer)
        {
            ObjectReader r(node, pointer);
            ArraySpec a;
            a.type = r.text("type", "single", {"single", "ula", "uca", "points"});
            if (a.type == "ula" || a.type == "uca")
            {
                a.count = static_cast<int>(r.integer("count", 0));
                if (a.count < 1)
                    throw ConfigError("count must be at least 1", r.path("count"));
                a.spacing = r.number("spacing", 0.0);
                if (!(a.spacing > 0.0))
                    throw ConfigError("spacing must be positive", r.path("spacing"));
            }
            else if (a.type == "points")
            {
                if (!r.has("xy") || !r.at("xy").is_array() || r.at("xy").empty())
                    throw ConfigError("expected a non-empty array of [x, y] pairs", r.path("xy"));
                const json &xy = r.at("xy");
                for (std::size_t i = 0; i < xy.size(); ++i)
                {
                    const std::string p = r.path("xy") + "/" + std::to_string(i);
                    if (!xy[i].is_array() || xy[i].size() != 2 || !xy[i][0].is_number() || !xy[i][1].is_number())
                        throw ConfigError("expected [x, y]", p);
                    a.xy.emplace_back(xy[i][0].get<double>(), xy[i][1].get<double>());
                }
                a.count = static_cast<int>(a.xy.size());
            }
            r.finish();
            return a;
        }

        ScatteringConfig read_scattering(const json &node, const std::string &pointer)
        {
            ObjectReader r(node, pointer);
            ScatteringConfig s;
            s.model = r.text("model", s.model, {"iid", "isotropic", "kronecker_modal", "chen", "abdi"});
            s.tx_spread_deg = r.optional_number("tx_spread_deg");
            s.tx_mean_deg = r.number("tx_mean_deg", s.tx_mean_deg);
            s.rx_spread_deg = r.optional_number("rx_spread_deg");
            s.rx_mean_deg = r.number("rx_mean_deg", s.rx_mean_deg);
            s.ring_radius = r.number("ring_radius", s.ring_radius);
            s.link_distance = r.number("link_distance", s.link_distance);
            s.pair_angle_deg = r.number("pair_angle_deg", s.pair_angle_deg);
            s.motion_angle_deg = r.number("motion_angle_deg", s.motion_angle_deg);
            s.doppler_norm = r.number("doppler_norm", s.doppler_norm);
            s.kappa = r.number("kappa", s.kappa);
            s.mean_aoa_deg = r.number("mean_aoa_deg", s.mean_aoa_deg);
            s.tx_halfspread_deg = r.number("tx_halfspread_deg", s.tx_halfspread_deg);
            s.doppler = r.number("doppler", s.doppler);
            r.finish();

            for (auto [key, value] : {std::pair{"tx_spread_deg", s.tx_spread_deg}, std::pair{"rx_spread_deg", s.rx_spread_deg}})
                if (value && !(*value > 0.0 && std::sqrt(3.0) * *value <= 180.0))
                    throw ConfigError("angular spread must satisfy 0 < sqrt(3) * spread <= 180", pointer + "/" + key);
            if (!(s.kappa >= 0.0))
                throw ConfigError("kappa must be non-negative", pointer + "/kappa");
            if (!(s.tx_halfspread_deg >= 0.0 && s.tx_halfspread_deg < 180.0))
                throw ConfigError("spread must lie in [0, 180)", pointer + "/tx_halfspread_deg");
            return s;
        }

        std::vector<double> read_snr(const json &node, const std::string &pointer)
        {
            std::vector<double> out;
            if (node.is_array())
            {
                for (std::size_t i = 0; i < node.size(); ++i)
                {
                    if (!node[i].is_number())
                        throw ConfigError("expected a number", pointer + "/" + std::to_string(i));
                    out.push_back(node[i].get<double>());
                }
            }
            else
            {
                ObjectReader r(node, pointer);
                const double start = r.number("start", 0.0);
                const double stop = r.number("stop", 0.0);
                const double step = r.number("step", 1.0);
                r.finish();
                if (!(step > 0.0) || stop < start)
                    throw ConfigError("range needs step > 0 and stop >= start", pointer);
                const long n = static_cast<long>(std::floor((stop - start) / step + 1e-9)) + 1;
                if (n > 100000)
                    throw ConfigError("SNR range is too long", pointer);
                for (long k = 0; k < n; ++k)
                    out.push_back(start + static_cast<double>(k) * step);
            }
            if (out.empty())
                throw ConfigError("SNR grid is empty", pointer);
            for (std::size_t k = 1; k < out.size(); ++k)
                if (!(out[k] > out[k - 1]))
                    throw ConfigError("SNR grid must be strictly increasing", pointer);
            return out;
        }

        std::string line_column(const std::string &text, std::size_t byte)
        {
            std::size_t line = 1, column = 1;
            for (std::size_t i = 0; i < byte && i < text.size(); ++i)
            {
                if (text[i] == '\n')
                {
                    ++line;
                    column = 1;
                }
                else
                    ++column;
            }
            return "line " + std::to_string(line) + ", column " + std::to_string(column);
        }

        json array_json(const ArraySpec &a)
        {
            json j;
            j["type"] = a.type;
            if (a.type == "ula" || a.type == "uca")
            {
                j["count"] = a.count;
                j["spacing"] = a.spacing;
            }
            else if (a.type == "points")
            {
                j["xy"] = json::array();
                for (const auto &[x, y] : a.xy)
                    j["xy"].push_back({x, y});
            }
            return j;
        }
    } // namespace

    RunConfig parse_config(const std::string &text)
    {
        json doc;
        try
        {
            doc = json::parse(text);
        }
        catch (const json::parse_error &e)
        {
            const std::size_t at = e.byte > 0 ? e.byte - 1 : 0;
            throw ConfigError("syntax error at " + line_column(text, at) + ": " + e.what());
        }

        ObjectReader r(doc, "");
        RunConfig cfg;
        if (!r.has("schema_version"))
            throw ConfigError("missing schema_version", "/schema_version");
        if (r.integer("schema_version", 0) != schema_version)
            throw ConfigError("unsupported schema version (expected " + std::to_string(schema_version) + ")",
                              "/schema_version");
        cfg.name = r.text("name", cfg.name);
        if (cfg.name.empty() || cfg.name.find_first_of("/\\") != std::string::npos)
            throw ConfigError("name must be a non-empty file stem", "/name");
        cfg.seed = r.unsigned_integer("seed", cfg.seed);
        cfg.threads = static_cast<int>(r.integer("threads", cfg.threads));
        if (cfg.threads < 0)
            throw ConfigError("threads must be non-negative", "/threads");
        if (r.has("tx_array"))
            cfg.tx = read_array(r.at("tx_array"), "/tx_array");
        else
            throw ConfigError("missing transmit array", "/tx_array");
        if (r.has("rx_array"))
            cfg.rx = read_array(r.at("rx_array"), "/rx_array");
        if (r.has("scattering"))
            cfg.scattering = read_scattering(r.at("scattering"), "/scattering");

        if (r.has("code"))
        {
            ObjectReader c(r.at("code"), "/code");
            cfg.design = c.text("design", cfg.design, {"alamouti", "rate34_3tx", "rate34_4tx", "real_orthogonal_4tx"});
            cfg.psk = static_cast<int>(c.integer("psk", cfg.psk));
            if (cfg.psk < 2 || cfg.psk > 256 || (cfg.psk & (cfg.psk - 1)) != 0)
                throw ConfigError("psk must be a power of two between 2 and 256", "/code/psk");
            cfg.normalization = c.text("normalization", cfg.normalization, {"unit_energy", "printed"});
            c.finish();
        }
        cfg.scheme = r.text("scheme", cfg.scheme, {"coherent", "differential"});
        cfg.precoding = r.text("precoding", cfg.precoding, {"on", "off", "both"});
        if (!r.has("snr_db"))
            throw ConfigError("missing SNR grid", "/snr_db");
        cfg.snr_db = read_snr(r.at("snr_db"), "/snr_db");
        cfg.trials = r.integer("trials", cfg.trials);
        if (cfg.trials < 1)
            throw ConfigError("trials must be at least 1", "/trials");
        cfg.stop_errors = r.integer("stop_errors", cfg.stop_errors);
        if (cfg.stop_errors < 0)
            throw ConfigError("stop_errors must be non-negative", "/stop_errors");
        cfg.frame_len = static_cast<int>(r.integer("frame_len", cfg.frame_len));
        if (cfg.frame_len < 0)
            throw ConfigError("frame_len must be non-negative", "/frame_len");
        if (r.has("pep_pair"))
        {
            const json &p = r.at("pep_pair");
            if (!p.is_array() || p.size() != 2 || !p[0].is_number_integer() || !p[1].is_number_integer())
                throw ConfigError("expected [i, j]", "/pep_pair");
            cfg.pep_pair = std::pair{p[0].get<int>(), p[1].get<int>()};
        }
        cfg.target_ber = r.optional_number("target_ber");
        if (cfg.target_ber && !(*cfg.target_ber > 0.0 && *cfg.target_ber < 1.0))
            throw ConfigError("target_ber must lie in (0, 1)", "/target_ber");
        r.finish();

        // catch inconsistent combinations before any work starts
        for (bool state : precoding_states(cfg))
            to_experiment(cfg, state);
        return cfg;
    }

    RunConfig load_config(const std::string &path)
    {
        return parse_config(read_text_file(path));
    }

    nlohmann::json emit_config(const RunConfig &cfg)
    {
        json j;
        j["schema_version"] = schema_version;
        j["name"] = cfg.name;
        j["seed"] = cfg.seed;
        j["threads"] = cfg.threads;
        j["tx_array"] = array_json(cfg.tx);
        j["rx_array"] = array_json(cfg.rx);

        const ScatteringConfig &s = cfg.scattering;
        json sc;
        sc["model"] = s.model;
        sc["tx_spread_deg"] = s.tx_spread_deg ? json(*s.tx_spread_deg) : json(nullptr);
        sc["tx_mean_deg"] = s.tx_mean_deg;
        sc["rx_spread_deg"] = s.rx_spread_deg ? json(*s.rx_spread_deg) : json(nullptr);
        sc["rx_mean_deg"] = s.rx_mean_deg;
        sc["ring_radius"] = s.ring_radius;
        sc["link_distance"] = s.link_distance;
        sc["pair_angle_deg"] = s.pair_angle_deg;
        sc["motion_angle_deg"] = s.motion_angle_deg;
        sc["doppler_norm"] = s.doppler_norm;
        sc["kappa"] = s.kappa;
        sc["mean_aoa_deg"] = s.mean_aoa_deg;
        sc["tx_halfspread_deg"] = s.tx_halfspread_deg;
        sc["doppler"] = s.doppler;
        j["scattering"] = sc;

        j["code"] = {{"design", cfg.design}, {"psk", cfg.psk}, {"normalization", cfg.normalization}};
        j["scheme"] = cfg.scheme;
        j["precoding"] = cfg.precoding;
        j["snr_db"] = cfg.snr_db;
        j["trials"] = cfg.trials;
        j["stop_errors"] = cfg.stop_errors;
        j["frame_len"] = cfg.frame_len;
        j["pep_pair"] = cfg.pep_pair ? json::array({cfg.pep_pair->first, cfg.pep_pair->second}) : json(nullptr);
        j["target_ber"] = cfg.target_ber ? json(*cfg.target_ber) : json(nullptr);
        return j;
    }

    AntennaArray build_array(const ArraySpec &spec)
    {
        if (spec.type == "ula")
            return make_ula(spec.count, spec.spacing);
        if (spec.type == "uca")
            return make_uca(spec.count, spec.spacing);
        if (spec.type == "points")
            return AntennaArray::from_cartesian(spec.xy);
        return AntennaArray({PolarPosition{}});
    }

    Experiment to_experiment(const RunConfig &cfg, bool precoded)
    {
        Experiment e;
        try
        {
            e.tx_array = build_array(cfg.tx);
            e.rx_array = build_array(cfg.rx);
            const ScatteringConfig &s = cfg.scattering;
            e.scattering.kind = parse_scattering(s.model);
            if (s.tx_spread_deg)
                e.scattering.tx_halfwidth = uniform_limited_halfwidth(deg2rad(*s.tx_spread_deg));
            e.scattering.tx_mean = deg2rad(s.tx_mean_deg);
            if (s.rx_spread_deg)
                e.scattering.rx_halfwidth = uniform_limited_halfwidth(deg2rad(*s.rx_spread_deg));
            e.scattering.rx_mean = deg2rad(s.rx_mean_deg);
            e.scattering.chen.ring_radius = s.ring_radius;
            e.scattering.chen.link_distance = s.link_distance;
            e.scattering.chen.pair_angle = deg2rad(s.pair_angle_deg);
            e.scattering.chen.motion_angle = deg2rad(s.motion_angle_deg);
            e.scattering.chen.doppler_norm = s.doppler_norm;
            e.scattering.abdi.kappa = s.kappa;
            e.scattering.abdi.mean_aoa = deg2rad(s.mean_aoa_deg);
            e.scattering.abdi.motion_angle = deg2rad(s.motion_angle_deg);
            e.scattering.abdi.tx_spread = deg2rad(s.tx_halfspread_deg);
            e.scattering.abdi.doppler = s.doppler;

            e.design = parse_design(cfg.design);
            e.psk_order = cfg.psk;
            e.normalization = cfg.normalization == "printed" ? Normalization::printed : Normalization::unit_energy;
            e.scheme = cfg.scheme == "differential" ? Scheme::differential : Scheme::coherent;
            e.precoded = precoded;
            e.snr_db = cfg.snr_db;
            e.trials = cfg.trials;
            e.stop_errors = cfg.stop_errors;
            e.frame_len = cfg.frame_len;
            e.seed = cfg.seed;
            e.threads = cfg.threads;
            validate(e);
        }
        catch (const ConfigError &)
        {
            throw;
        }
        catch (const std::invalid_argument &ex)
        {
            throw ConfigError(ex.what());
        }
        catch (const std::domain_error &ex)
        {
            throw ConfigError(ex.what());
        }
        return e;
    }

    std::vector<bool> precoding_states(const RunConfig &cfg)
    {
        if (cfg.precoding == "on")
            return {true};
        if (cfg.precoding == "off")
            return {false};
        return {false, true};
    }
} // namespace sprec
