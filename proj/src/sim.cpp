// SPDX-License-Identifier: Apache-2.0
//
// sprec - geometry-based spatial precoding for space-time block coded MIMO links
// ------------------------------------------------------------------------

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>

#include <omp.h>

#include "sim_plan.hpp"

namespace sprec
{
    namespace
    {
        // keeps PEP streams disjoint from BER streams under the same master seed
        constexpr std::uint64_t pep_stream_tag = 0x7065705f73747265ULL;

        int draw_index(Rng &rng, int bits)
        {
            return bits == 0 ? 0 : static_cast<int>(rng() >> (64 - bits));
        }

        void add_noise(Rng &rng, ComplexNormal &noise, CMatrix &y)
        {
            for (Eigen::Index j = 0; j < y.cols(); ++j)
                for (Eigen::Index i = 0; i < y.rows(); ++i)
                    y(i, j) += noise(rng);
        }

        int thread_count(const Experiment &exp)
        {
            return exp.threads > 0 ? exp.threads : omp_get_max_threads();
        }

        double snr_linear(double db) { return std::pow(10.0, db / 10.0); }
    } // namespace

    int Experiment::effective_frame_len() const
    {
        if (frame_len > 0)
            return frame_len;
        return scheme == Scheme::coherent ? 1 : 100;
    }

    int Experiment::data_per_frame() const
    {
        return scheme == Scheme::coherent ? effective_frame_len() : effective_frame_len() - 1;
    }

    void validate(const Experiment &exp)
    {
        if (exp.snr_db.empty())
            throw DomainError("SNR grid is empty");
        for (double s : exp.snr_db)
            if (!std::isfinite(s))
                throw DomainError("SNR grid contains a non-finite value");
        if (exp.trials < 1)
            throw DomainError("trials must be at least 1");
        if (exp.stop_errors < 0)
            throw DomainError("stop_errors must be non-negative");
        if (exp.frame_len < 0)
            throw DomainError("frame length must be non-negative");
        if (exp.scheme == Scheme::differential && exp.effective_frame_len() < 2)
            throw DomainError("differential detection needs at least two blocks per frame");
        if (exp.tx_array.size() != design_tx(exp.design))
            throw DimensionError("transmit array size does not match the space-time design");
        if (exp.rx_array.size() < 1)
            throw DomainError("receive array is empty");
        if (exp.scheme == Scheme::differential)
        {
            if (design_tx(exp.design) != design_length(exp.design))
                throw UnsupportedDesign("differential encoding needs a square design");
            if (exp.normalization != Normalization::unit_energy)
                throw UnsupportedDesign("differential encoding needs unitary codewords (unit_energy alphabet)");
        }
        if (exp.design == Design::real_orthogonal_4tx && exp.psk_order != 2)
            throw UnsupportedDesign("the real orthogonal design needs a real (BPSK) alphabet");
    }

    double PepPoint::sigma() const
    {
        if (trials <= 0)
            return 0.0;
        const double p = pep();
        return std::sqrt(p * (1.0 - p) / static_cast<double>(trials));
    }

    EigenmodeProfile experiment_profile(const Experiment &exp)
    {
        return eigenmodes(config_matrix(exp.tx_array), config_matrix(exp.rx_array));
    }

    CMatrix precoder_for(const Experiment &exp, const EigenmodeProfile &profile, double beta, double snr)
    {
        if (!exp.precoded)
            return CMatrix::Identity(exp.tx_array.size(), exp.tx_array.size());
        return design_precoder(exp.scheme, profile, beta, snr).f;
    }

    namespace detail
    {
        SweepPlan plan_sweep(const Experiment &exp)
        {
            validate(exp);
            SweepPlan plan;
            plan.book = build_codebook(exp.design, make_psk(exp.psk_order), exp.normalization);
            plan.profile = experiment_profile(exp);
            plan.source = std::make_unique<ChannelSource>(exp.tx_array, exp.rx_array, exp.scattering,
                                                          exp.effective_frame_len());
            plan.per_frame = exp.data_per_frame();
            plan.frames = (exp.trials + plan.per_frame - 1) / plan.per_frame;
            return plan;
        }

        FrameContext SweepPlan::context(const Experiment &exp, std::size_t point) const
        {
            FrameContext ctx;
            ctx.exp = &exp;
            ctx.book = &book;
            ctx.source = source.get();
            ctx.point = point;
            const double snr = snr_linear(exp.snr_db[point]);
            ctx.noise_var = 1.0 / snr;
            ctx.f = precoder_for(exp, profile, book.beta_min, snr);
            return ctx;
        }

        int SweepPlan::data_in(const Experiment &exp, long frame) const
        {
            const long left = exp.trials - frame * per_frame;
            return static_cast<int>(std::min<long>(per_frame, left));
        }

        void accumulate(BerPoint &point, const FrameTally &tally, int bits_per_codeword)
        {
            point.codewords += tally.codewords;
            point.codeword_errors += tally.codeword_errors;
            point.bit_errors += tally.bit_errors;
            point.bits += tally.codewords * bits_per_codeword;
            point.frames += 1;
        }
    } // namespace detail

    FrameTally simulate_frame(const FrameContext &ctx, long frame, int data_codewords)
    {
        const Codebook &book = *ctx.book;
        const int bits = book.bits_per_codeword;
        Rng rng = make_stream(ctx.exp->seed, ctx.point, static_cast<std::uint64_t>(frame));
        std::vector<CMatrix> channel;
        ctx.source->draw(rng, channel);
        ComplexNormal noise(ctx.noise_var);

        FrameTally tally;
        auto record = [&](int sent, int decided)
        {
            ++tally.codewords;
            if (sent != decided)
            {
                ++tally.codeword_errors;
                tally.bit_errors += bit_errors(book, sent, decided);
            }
        };

        if (ctx.exp->scheme == Scheme::coherent)
        {
            CMatrix h_eff;
            for (int c = 0; c < data_codewords; ++c)
            {
                if (c == 0 || ctx.source->time_varying())
                    h_eff = channel[static_cast<size_t>(c)] * ctx.f;
                const int sent = draw_index(rng, bits);
                CMatrix y = h_eff * book.codewords[static_cast<size_t>(sent)];
                add_noise(rng, noise, y);
                record(sent, ml_decode_coherent(y, h_eff, book));
            }
            return tally;
        }

        DiffState state(book.n_tx());
        CMatrix y_prev = channel[0] * ctx.f * state.x();
        add_noise(rng, noise, y_prev);
        for (int c = 1; c <= data_codewords; ++c)
        {
            const int sent = draw_index(rng, bits);
            const CMatrix &x = state.encode(book.codewords[static_cast<size_t>(sent)]);
            CMatrix y = channel[static_cast<size_t>(c)] * ctx.f * x;
            add_noise(rng, noise, y);
            record(sent, diff_decode(y_prev, y, book));
            y_prev = std::move(y);
        }
        return tally;
    }

    std::vector<BerPoint> run_ber(const Experiment &exp)
    {
        const detail::SweepPlan plan = detail::plan_sweep(exp);
        const int threads = thread_count(exp);
        std::vector<BerPoint> out;
        std::vector<FrameTally> wave(static_cast<size_t>(frame_wave));

        for (std::size_t k = 0; k < exp.snr_db.size(); ++k)
        {
            const FrameContext ctx = plan.context(exp, k);
            BerPoint point;
            point.snr_db = exp.snr_db[k];
            bool stop = false;
            for (long start = 0; start < plan.frames && !stop; start += frame_wave)
            {
                const long count = std::min(frame_wave, plan.frames - start);
                std::exception_ptr failure;
#pragma omp parallel for schedule(dynamic, 16) num_threads(threads)
                for (long i = 0; i < count; ++i)
                {
                    try
                    {
                        wave[static_cast<size_t>(i)] =
                            simulate_frame(ctx, start + i, plan.data_in(exp, start + i));
                    }
                    catch (...)
                    {
#pragma omp critical(sprec_failure)
                        if (!failure)
                            failure = std::current_exception();
                    }
                }
                if (failure)
                    std::rethrow_exception(failure);

                for (long i = 0; i < count; ++i)
                {
                    detail::accumulate(point, wave[static_cast<size_t>(i)], plan.book.bits_per_codeword);
                    if (exp.stop_errors > 0 && point.codeword_errors >= exp.stop_errors)
                    {
                        stop = true;
                        break;
                    }
                }
            }
            out.push_back(point);
        }
        return out;
    }

    std::vector<PepPoint> run_pep(const Experiment &exp, std::optional<std::pair<int, int>> pair)
    {
        validate(exp);
        const Codebook book = build_codebook(exp.design, make_psk(exp.psk_order), exp.normalization);
        const auto [i, j] = pair.value_or(book.beta_pair);
        if (i == j || i < 0 || j < 0 || i >= book.size() || j >= book.size())
            throw DomainError("PEP needs two distinct codeword indices");
        const CMatrix &s_i = book.codewords[static_cast<size_t>(i)];
        const CMatrix &s_j = book.codewords[static_cast<size_t>(j)];
        const CMatrix diff = s_i - s_j;
        const double beta = (diff * diff.adjoint())(0, 0).real();
        // a tie goes to the lower index
        const bool j_wins_ties = j < i;

        const EigenmodeProfile profile = experiment_profile(exp);
        const bool differential = exp.scheme == Scheme::differential;
        const ChannelSource source(exp.tx_array, exp.rx_array, exp.scattering, differential ? 2 : 1);
        const int threads = thread_count(exp);
        const std::uint64_t seed = mix64(exp.seed ^ pep_stream_tag);

        std::vector<PepPoint> out;
        for (std::size_t k = 0; k < exp.snr_db.size(); ++k)
        {
            const double snr = snr_linear(exp.snr_db[k]);
            const CMatrix f = precoder_for(exp, profile, book.beta_min, snr);
            const double noise_var = 1.0 / snr;

            PepPoint point;
            point.snr_db = exp.snr_db[k];
            point.trials = exp.trials;
            point.beta = beta;
            try
            {
                point.bound = differential ? pep_bound_differential(source.covariance(), f, beta, snr)
                                           : pep_bound_coherent(source.covariance(), f, beta, snr);
            }
            catch (const DomainError &)
            {
                point.bound = std::numeric_limits<double>::quiet_NaN();
            }

            long errors = 0;
#pragma omp parallel for schedule(dynamic, 256) num_threads(threads) reduction(+ : errors)
            for (long n = 0; n < exp.trials; ++n)
            {
                Rng rng = make_stream(seed, k, static_cast<std::uint64_t>(n));
                std::vector<CMatrix> channel;
                source.draw(rng, channel);
                ComplexNormal noise(noise_var);
                double m_i = 0.0, m_j = 0.0;
                if (!differential)
                {
                    const CMatrix h_eff = channel[0] * f;
                    CMatrix y = h_eff * s_i;
                    add_noise(rng, noise, y);
                    // larger is better, as in the full decoder
                    m_i = -(y - h_eff * s_i).squaredNorm();
                    m_j = -(y - h_eff * s_j).squaredNorm();
                }
                else
                {
                    CMatrix y_prev = channel[0] * f;
                    add_noise(rng, noise, y_prev);
                    CMatrix y_cur = channel[1] * f * s_i;
                    add_noise(rng, noise, y_cur);
                    const CMatrix cross = (y_prev.adjoint() * y_cur).conjugate();
                    m_i = cross.cwiseProduct(s_i).sum().real();
                    m_j = cross.cwiseProduct(s_j).sum().real();
                }
                if (m_j > m_i || (m_j == m_i && j_wins_ties))
                    ++errors;
            }
            point.errors = errors;
            out.push_back(point);
        }
        return out;
    }

    double snr_at_ber(const std::vector<BerPoint> &curve, double target)
    {
        if (!(target > 0.0 && target < 1.0))
            throw DomainError("target BER must lie in (0, 1)");
        for (std::size_t k = 1; k < curve.size(); ++k)
            if (!(curve[k].snr_db > curve[k - 1].snr_db))
                throw DomainError("BER curve SNR values must be strictly increasing");
        if (!curve.empty() && curve.front().ber() == target)
            return curve.front().snr_db;
        for (std::size_t k = 1; k < curve.size(); ++k)
        {
            const double b0 = curve[k - 1].ber(), b1 = curve[k].ber();
            if (!(b0 > target && b1 <= target))
                continue;
            const double s0 = curve[k - 1].snr_db, s1 = curve[k].snr_db;
            double frac;
            if (b1 > 0.0)
                frac = (std::log10(target) - std::log10(b0)) / (std::log10(b1) - std::log10(b0));
            else
                frac = (target - b0) / (b1 - b0);
            return s0 + frac * (s1 - s0);
        }
        throw RangeError("target BER is not crossed by the curve");
    }

    double precoding_gain(const std::vector<BerPoint> &plain, const std::vector<BerPoint> &precoded, double target)
    {
        return snr_at_ber(plain, target) - snr_at_ber(precoded, target);
    }

    double alamouti_qpsk_ber(double snr_db)
    {
        // Two-branch maximal-ratio combining with the transmit power split between antennas;
        // each Gray QPSK bit sees a BPSK decision at branch SNR snr/4.
        const double gc = snr_linear(snr_db) / 4.0;
        const double mu = std::sqrt(gc / (1.0 + gc));
        const double a = 0.5 * (1.0 - mu);
        const double b = 0.5 * (1.0 + mu);
        return a * a * (1.0 + 2.0 * b);
    }
} // namespace sprec
