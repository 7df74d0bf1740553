// SPDX-License-Identifier: Apache-2.0
//
// sprec - geometry-based spatial precoding for space-time block coded MIMO links
// ------------------------------------------------------------------------

#include <cmath>

#include "doctest.h"

#include "sprec/sim.hpp"

using namespace sprec;

namespace
{
    Experiment small(Scheme scheme, bool precoded)
    {
        Experiment e;
        e.tx_array = make_ula(2, 0.2);
        e.rx_array = make_ula(1, 1.0);
        e.scheme = scheme;
        e.precoded = precoded;
        e.snr_db = {0.0, 6.0, 12.0};
        e.trials = 3000;
        e.seed = 42;
        if (scheme == Scheme::differential)
            e.frame_len = 10;
        return e;
    }

    std::vector<BerPoint> curve(std::initializer_list<std::pair<double, double>> pts)
    {
        std::vector<BerPoint> c;
        for (auto [snr, ber] : pts)
        {
            BerPoint p;
            p.snr_db = snr;
            p.bits = 1000000;
            p.bit_errors = static_cast<long>(std::llround(ber * 1e6));
            c.push_back(p);
        }
        return c;
    }
} // namespace

TEST_CASE("experiment defaults and validation")
{
    Experiment e = small(Scheme::coherent, false);
    e.frame_len = 0;
    CHECK(e.effective_frame_len() == 1);
    CHECK(e.data_per_frame() == 1);
    e.scheme = Scheme::differential;
    CHECK(e.effective_frame_len() == 100);
    CHECK(e.data_per_frame() == 99);
    CHECK_NOTHROW(validate(e));

    e.frame_len = 1;
    CHECK_THROWS_AS(validate(e), DomainError);
    e.frame_len = 10;
    e.snr_db.clear();
    CHECK_THROWS_AS(validate(e), DomainError);
    e.snr_db = {0.0};
    e.trials = 0;
    CHECK_THROWS_AS(validate(e), DomainError);
    e.trials = 10;
    e.design = Design::rate34_3tx;
    e.tx_array = make_ula(3, 0.2);
    CHECK_THROWS_AS(validate(e), UnsupportedDesign);
    e.scheme = Scheme::coherent;
    CHECK_NOTHROW(validate(e));
    e.tx_array = make_ula(2, 0.2);
    CHECK_THROWS(validate(e));
    e.design = Design::real_orthogonal_4tx;
    e.tx_array = make_ula(4, 0.2);
    e.psk_order = 4;
    CHECK_THROWS(validate(e));
}

TEST_CASE("parallel engine equals the serial reference")
{
    for (Scheme s : {Scheme::coherent, Scheme::differential})
        for (bool pre : {false, true})
        {
            Experiment e = small(s, pre);
            e.trials = 5000;
            const auto ref = run_ber_serial(e);
            for (int threads : {1, 2, 3, 4})
            {
                e.threads = threads;
                CHECK(run_ber(e) == ref);
            }
        }
}

TEST_CASE("error-count stopping is deterministic")
{
    Experiment e = small(Scheme::coherent, true);
    e.trials = 200000;
    e.stop_errors = 150;
    const auto ref = run_ber_serial(e);
    for (const auto &p : ref)
        CHECK(p.codeword_errors >= 150);
    for (int threads : {1, 3})
    {
        e.threads = threads;
        CHECK(run_ber(e) == ref);
    }
    e.seed = 43;
    CHECK_FALSE(run_ber(e) == ref);
}

TEST_CASE("trial accounting")
{
    Experiment e = small(Scheme::differential, false);
    e.trials = 95;
    const auto pts = run_ber(e);
    for (const auto &p : pts)
    {
        CHECK(p.codewords == 95);
        CHECK(p.frames == 11);
        CHECK(p.bits == 95 * 4);
        CHECK(p.ber() >= 0.0);
        CHECK(p.ber() <= 1.0);
    }
}

TEST_CASE("extreme SNRs")
{
    for (Scheme s : {Scheme::coherent, Scheme::differential})
    {
        Experiment e = small(s, false);
        e.snr_db = {-60.0, 200.0};
        e.trials = 20000;
        const auto pts = run_ber(e);
        const double p = pts[0].ber();
        const double sigma = std::sqrt(0.25 / static_cast<double>(pts[0].bits));
        // bits within a codeword are correlated, so allow a wider band than 3 sigma
        CHECK(std::abs(p - 0.5) < 6.0 * sigma);
        CHECK(pts[1].bit_errors == 0);
    }
}

TEST_CASE("precoding changes results only through the precoder")
{
    Experiment e = small(Scheme::coherent, false);
    e.scattering.kind = ScatteringKind::iid;
    // an i.i.d. channel has no geometry; precoding still uses the array eigenmodes
    const auto a = run_ber(e);
    e.precoded = true;
    const auto b = run_ber(e);
    CHECK(a.size() == b.size());
    CHECK(precoding_gain(a, a, 0.1) == 0.0);
}

TEST_CASE("snr_at_ber interpolation")
{
    const auto c = curve({{0.0, 0.2}, {5.0, 0.02}, {10.0, 0.002}});
    CHECK(snr_at_ber(c, 0.2) == doctest::Approx(0.0));
    CHECK(snr_at_ber(c, 0.0632455532) == doctest::Approx(2.5).epsilon(1e-6));
    CHECK(snr_at_ber(c, 0.002) == doctest::Approx(10.0));
    CHECK_THROWS_AS(snr_at_ber(c, 0.5), RangeError);
    CHECK_THROWS_AS(snr_at_ber(c, 1e-4), RangeError);

    // a zero-error point falls back to linear interpolation
    const auto z = curve({{0.0, 0.1}, {10.0, 0.0}});
    CHECK(snr_at_ber(z, 0.05) == doctest::Approx(5.0));

    const auto shifted = curve({{-2.0, 0.2}, {3.0, 0.02}, {8.0, 0.002}});
    CHECK(precoding_gain(c, shifted, 0.02) == doctest::Approx(2.0));
    CHECK(precoding_gain(c, c, 0.01) == 0.0);
}

TEST_CASE("analytic Alamouti reference")
{
    // gamma_c = snr / 4, mu = sqrt(gamma_c / (1 + gamma_c))
    for (double db : {0.0, 10.0, 20.0})
    {
        const double g = std::pow(10.0, db / 10.0) / 4.0;
        const double mu = std::sqrt(g / (1.0 + g));
        const double p = 0.25 * (1.0 - mu) * (1.0 - mu) * (2.0 + mu);
        CHECK(alamouti_qpsk_ber(db) == doctest::Approx(p).epsilon(1e-14));
    }
    CHECK(alamouti_qpsk_ber(10.0) == doctest::Approx(0.01705).epsilon(1e-3));
    CHECK(alamouti_qpsk_ber(-200.0) == doctest::Approx(0.5));
}

TEST_CASE("pep runs are deterministic and bounded")
{
    Experiment e = small(Scheme::coherent, false);
    e.snr_db = {0.0, 8.0};
    e.trials = 20000;
    e.threads = 1;
    const auto a = run_pep(e);
    e.threads = 3;
    const auto b = run_pep(e);
    REQUIRE(a.size() == 2);
    for (size_t k = 0; k < a.size(); ++k)
    {
        CHECK(a[k].errors == b[k].errors);
        CHECK(a[k].bound == b[k].bound);
        CHECK(a[k].beta == doctest::Approx(1.0));
        CHECK(a[k].pep() <= a[k].bound + 3.0 * a[k].sigma());
    }
    CHECK(a[1].pep() < a[0].pep());

    const auto other = run_pep(e, std::pair{0, 15});
    CHECK(other[0].beta > a[0].beta);
    CHECK(other[0].pep() < a[0].pep());
    CHECK_THROWS(run_pep(e, std::pair{3, 3}));
}

TEST_CASE("pep with a rank-deficient channel reports no bound")
{
    Experiment e;
    e.tx_array = make_ula(4, 0.02);
    e.rx_array = make_ula(1, 1.0);
    e.design = Design::rate34_4tx;
    e.snr_db = {5.0};
    e.trials = 2000;
    const auto p = run_pep(e);
    CHECK(std::isnan(p[0].bound));
    CHECK(p[0].trials == 2000);
}

TEST_CASE("channel sources")
{
    ScatteringSpec spec;
    CHECK(parse_scattering("kronecker_modal") == ScatteringKind::kronecker_modal);
    CHECK(to_string(ScatteringKind::abdi) == "abdi");
    CHECK_THROWS(parse_scattering("ray_traced"));

    const ChannelSource iso(make_ula(2, 0.2), make_ula(2, 1.0), spec, 5);
    Rng a = make_stream(1, 2, 3), b = make_stream(1, 2, 3);
    std::vector<CMatrix> fa, fb;
    iso.draw(a, fa);
    iso.draw(b, fb);
    REQUIRE(fa.size() == 5);
    CHECK(fa[0] == fb[0]);
    CHECK(fa[0].rows() == 2);
    CHECK(fa[0].cols() == 2);
    CHECK_FALSE(iso.time_varying());

    spec.kind = ScatteringKind::chen;
    CHECK_THROWS(ChannelSource(make_ula(2, 0.2), make_ula(2, 1.0), spec, 5));
}

TEST_CASE("streams depend only on their key")
{
    Rng a = make_stream(7, 1, 2);
    Rng b = make_stream(7, 1, 2);
    Rng c = make_stream(7, 2, 1);
    CHECK(a() == b());
    CHECK(make_stream(7, 1, 2)() != c());
    CHECK(make_stream(8, 1, 2)() != make_stream(7, 1, 2)());
}
