// SPDX-License-Identifier: Apache-2.0
//
// sprec - geometry-based spatial precoding for space-time block coded MIMO links
// ------------------------------------------------------------------------

#include <bit>
#include <cmath>
#include <random>

#include "doctest.h"

#include "sprec/rng.hpp"
#include "sprec/stbc.hpp"

using namespace sprec;

namespace
{
    int brute_coherent(const CMatrix &y, const CMatrix &h, const Codebook &book)
    {
        int best = 0;
        double best_d = std::numeric_limits<double>::infinity();
        for (int k = 0; k < book.size(); ++k)
        {
            const double d = (y - h * book.codewords[static_cast<size_t>(k)]).squaredNorm();
            if (d < best_d)
            {
                best_d = d;
                best = k;
            }
        }
        return best;
    }

    int brute_differential(const CMatrix &y_prev, const CMatrix &y_cur, const Codebook &book)
    {
        int best = 0;
        double best_d = std::numeric_limits<double>::infinity();
        for (int k = 0; k < book.size(); ++k)
        {
            const double d = (y_cur - y_prev * book.codewords[static_cast<size_t>(k)]).squaredNorm();
            if (d < best_d)
            {
                best_d = d;
                best = k;
            }
        }
        return best;
    }

    CMatrix gaussian(int rows, int cols, Rng &g, double var = 1.0)
    {
        ComplexNormal cn(var);
        CMatrix m(rows, cols);
        cn.fill(g, m);
        return m;
    }

    struct BookCase
    {
        Design design;
        int psk;
    };

    const BookCase all_books[] = {{Design::alamouti, 2},   {Design::alamouti, 4},         {Design::alamouti, 8},
                                  {Design::rate34_3tx, 4}, {Design::rate34_4tx, 4},       {Design::rate34_3tx, 2},
                                  {Design::real_orthogonal_4tx, 2}};
} // namespace

TEST_CASE("design names and shapes")
{
    for (Design d : {Design::alamouti, Design::rate34_3tx, Design::rate34_4tx, Design::real_orthogonal_4tx})
        CHECK(parse_design(to_string(d)) == d);
    CHECK_THROWS(parse_design("golden"));
    CHECK(design_tx(Design::alamouti) == 2);
    CHECK(design_length(Design::rate34_3tx) == 4);
    CHECK(design_symbols(Design::rate34_4tx) == 3);
    CHECK(design_tx(Design::real_orthogonal_4tx) == 4);
    CHECK(design_length(Design::real_orthogonal_4tx) == 4);
}

TEST_CASE("Gray-labelled PSK")
{
    for (int m : {2, 4, 8, 16})
    {
        const Constellation c = make_psk(m);
        REQUIRE(c.size() == m);
        CHECK(c.bits_per_symbol == std::countr_zero(static_cast<unsigned>(m)));
        for (int i = 0; i < m; ++i)
        {
            CHECK(std::abs(std::abs(c.points[static_cast<size_t>(i)]) - 1.0) < 1e-15);
            const int j = (i + 1) % m;
            CHECK(std::popcount(c.labels[static_cast<size_t>(i)] ^ c.labels[static_cast<size_t>(j)]) == 1);
        }
    }
    const Constellation b = make_psk(2);
    CHECK(b.points[0].imag() == 0.0);
    CHECK(b.points[1].imag() == 0.0);
    const Constellation q = make_psk(4);
    for (const cplx &p : q.points)
        CHECK(std::abs(std::abs(p.real()) - std::sqrt(0.5)) < 1e-15);
    CHECK_THROWS(make_psk(3));
}

TEST_CASE("Alamouti QPSK codebook")
{
    const Codebook book = build_codebook(Design::alamouti, make_psk(4));
    REQUIRE(book.size() == 16);
    CHECK(book.n_tx() == 2);
    CHECK(book.length() == 2);
    CHECK(book.square());
    CHECK(book.bits_per_codeword == 4);
    CHECK(book.gram_scale == doctest::Approx(1.0));
    for (const auto &s : book.codewords)
        CHECK((s * s.adjoint() - CMatrix::Identity(2, 2)).cwiseAbs().maxCoeff() < 1e-12);

    // exhaustive scan over all 120 pairs
    int pairs = 0;
    double beta_min = 1e9;
    for (int i = 0; i < 16; ++i)
        for (int j = i + 1; j < 16; ++j, ++pairs)
        {
            const CMatrix d = book.codewords[static_cast<size_t>(i)] - book.codewords[static_cast<size_t>(j)];
            const CMatrix g = d * d.adjoint();
            CHECK(std::abs(g(0, 1)) < 1e-12);
            CHECK(std::abs(g(0, 0) - g(1, 1)) < 1e-12);
            beta_min = std::min(beta_min, g(0, 0).real());
        }
    CHECK(pairs == 120);
    CHECK(beta_min == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(book.beta_min == doctest::Approx(1.0).epsilon(1e-12));

    const DistanceScan scan = codeword_distance_scan(book.codewords);
    CHECK(scan.table.isApprox(scan.table.transpose()));
    CHECK(scan.table.diagonal().norm() == 0.0);
    CHECK(scan.table(scan.argmin.first, scan.argmin.second) == doctest::Approx(1.0));

    // codeword 0 carries symbol labels 0,0 and the first symbol is most significant
    const Constellation c = make_psk(4);
    const CMatrix s5 = design_matrix(Design::alamouti, {c.points[1] / std::sqrt(2.0), c.points[1] / std::sqrt(2.0)});
    CHECK(book.codewords[5].isApprox(s5, 1e-14));
    CHECK(book.labels[5] == ((c.labels[1] << 2) | c.labels[1]));
}

TEST_CASE("all shipped designs satisfy the distance property")
{
    for (const auto &bc : all_books)
    {
        CAPTURE(to_string(bc.design));
        CAPTURE(bc.psk);
        const Codebook book = build_codebook(bc.design, make_psk(bc.psk));
        const int k = design_symbols(bc.design);
        CHECK(book.size() == static_cast<int>(std::pow(bc.psk, k)));
        for (const auto &s : book.codewords)
            CHECK((s * s.adjoint() - CMatrix::Identity(book.n_tx(), book.n_tx())).cwiseAbs().maxCoeff() < 1e-12);
        CHECK(book.beta_min > 0.0);
    }
}

TEST_CASE("real orthogonal design")
{
    const Codebook book = build_codebook(Design::real_orthogonal_4tx, make_psk(2));
    REQUIRE(book.size() == 16);
    CHECK(book.n_tx() == 4);
    CHECK(book.length() == 4);
    for (const auto &s : book.codewords)
    {
        CHECK(s.imag().norm() == 0.0);
        CHECK((s.real() * s.real().transpose() - RMatrix::Identity(4, 4)).cwiseAbs().maxCoeff() < 1e-12);
    }
    CHECK_THROWS(build_codebook(Design::real_orthogonal_4tx, make_psk(4)));
}

TEST_CASE("printed normalization")
{
    const Codebook q = build_codebook(Design::alamouti, make_psk(4), Normalization::printed);
    CHECK(q.gram_scale == doctest::Approx(2.0));
    CHECK((q.codewords[3] * q.codewords[3].adjoint()).isApprox(2.0 * CMatrix::Identity(2, 2)));
    CHECK(q.beta_min == doctest::Approx(2.0));

    const Codebook b = build_codebook(Design::real_orthogonal_4tx, make_psk(2), Normalization::printed);
    for (const cplx &a : b.alphabet)
        CHECK(std::abs(std::abs(a) - std::sqrt(0.5)) < 1e-15);
    CHECK(b.gram_scale == doctest::Approx(2.0));
}

TEST_CASE("distance scan rejects bad codebooks")
{
    const Codebook book = build_codebook(Design::alamouti, make_psk(2));
    std::vector<CMatrix> dup = book.codewords;
    dup.push_back(dup[1]);
    CHECK_THROWS_AS(codeword_distance_scan(dup), PropertyError);

    Rng g(1);
    std::vector<CMatrix> junk{gaussian(2, 2, g), gaussian(2, 2, g)};
    CHECK_THROWS_AS(codeword_distance_scan(junk), PropertyError);
    CHECK_THROWS_AS(codeword_distance_scan({book.codewords[0]}), PropertyError);
}

TEST_CASE("distance scan is homogeneous of degree two")
{
    const Codebook book = build_codebook(Design::rate34_3tx, make_psk(4));
    const DistanceScan base = codeword_distance_scan(book.codewords);
    for (double s : {0.3, 2.5})
    {
        std::vector<CMatrix> scaled = book.codewords;
        for (auto &c : scaled)
            c *= s;
        const DistanceScan sc = codeword_distance_scan(scaled);
        CHECK((sc.table - s * s * base.table).cwiseAbs().maxCoeff() < 1e-10);
        CHECK(sc.beta_min == doctest::Approx(s * s * base.beta_min));
    }
}

TEST_CASE("coherent decoding")
{
    Rng g(3);
    for (const auto &bc : all_books)
    {
        const Codebook book = build_codebook(bc.design, make_psk(bc.psk));
        for (int trial = 0; trial < 100; ++trial)
        {
            const int n_rx = 1 + trial % 3;
            const CMatrix h = gaussian(n_rx, book.n_tx(), g);
            // noiseless transmissions decode exactly
            for (int k = 0; k < book.size(); k += (book.size() > 16 ? 7 : 1))
                CHECK(ml_decode_coherent(h * book.codewords[static_cast<size_t>(k)], h, book) == k);
            // noisy ones agree with a direct distance scan
            const int k = trial % book.size();
            const CMatrix y = h * book.codewords[static_cast<size_t>(k)] + gaussian(n_rx, book.length(), g, 0.5);
            CHECK(ml_decode_coherent(y, h, book) == brute_coherent(y, h, book));
        }
        const CMatrix y = gaussian(1, book.length(), g);
        CHECK(ml_decode_coherent(y, CMatrix::Zero(1, book.n_tx()), book) == 0);
    }
}

TEST_CASE("coherent decoding exhaustively for Alamouti")
{
    Rng g(4);
    const Codebook book = build_codebook(Design::alamouti, make_psk(4));
    for (int c = 0; c < 100; ++c)
    {
        const CMatrix h = gaussian(2, 2, g);
        for (int k = 0; k < book.size(); ++k)
            CHECK(ml_decode_coherent(h * book.codewords[static_cast<size_t>(k)], h, book) == k);
    }
}

TEST_CASE("differential decoding")
{
    Rng g(6);
    for (const auto &bc : all_books)
    {
        const Codebook book = build_codebook(bc.design, make_psk(bc.psk));
        if (!book.square())
            continue;
        for (int trial = 0; trial < 200; ++trial)
        {
            const int n_rx = 1 + trial % 2;
            const CMatrix yp = gaussian(n_rx, book.n_tx(), g);
            const int k = trial % book.size();
            const CMatrix yc = yp * book.codewords[static_cast<size_t>(k)];
            CHECK(diff_decode(yp, yc, book) == k);
            const CMatrix noisy = yc + gaussian(n_rx, book.n_tx(), g, 0.4);
            CHECK(diff_decode(yp, noisy, book) == brute_differential(yp, noisy, book));
        }
        CHECK(diff_decode(CMatrix::Zero(1, book.n_tx()), gaussian(1, book.n_tx(), g), book) == 0);
    }
}

TEST_CASE("differential encoding")
{
    const Codebook book = build_codebook(Design::alamouti, make_psk(4));
    DiffState st(2);
    CHECK(st.x().isIdentity(0.0));
    CHECK(st.encode(book.codewords[6]).isApprox(book.codewords[6], 1e-15));

    // S followed by the codeword equal to S^H returns to the identity
    DiffState back(2);
    int inverse = -1;
    for (int k = 0; k < book.size(); ++k)
        if (book.codewords[static_cast<size_t>(k)].isApprox(book.codewords[9].adjoint(), 1e-12))
            inverse = k;
    REQUIRE(inverse >= 0);
    back.encode(book.codewords[9]);
    CHECK(back.encode(book.codewords[static_cast<size_t>(inverse)]).isIdentity(1e-12));

    const Codebook wide = build_codebook(Design::rate34_3tx, make_psk(4));
    DiffState three(3);
    CHECK_THROWS_AS(three.encode(wide.codewords[0]), UnsupportedDesign);
}

TEST_CASE("differential state stays unitary")
{
    for (const auto &bc : {BookCase{Design::alamouti, 4}, BookCase{Design::rate34_4tx, 4}, BookCase{Design::real_orthogonal_4tx, 2}})
    {
        const Codebook book = build_codebook(bc.design, make_psk(bc.psk));
        if (!book.square())
            continue;
        DiffState st(book.n_tx());
        std::mt19937_64 g(12);
        std::uniform_int_distribution<int> pick(0, book.size() - 1);
        double worst = 0.0;
        for (int n = 0; n < 10000; ++n)
        {
            const CMatrix &x = st.encode(book.codewords[static_cast<size_t>(pick(g))]);
            worst = std::max(worst, (x * x.adjoint() - CMatrix::Identity(book.n_tx(), book.n_tx())).norm());
        }
        CHECK(st.steps() == 10000);
        CHECK(worst <= 1e-9);
    }
}

TEST_CASE("noiseless differential streams decode exactly")
{
    const Codebook book = build_codebook(Design::alamouti, make_psk(8));
    Rng g(13);
    const CMatrix h = gaussian(2, 2, g);
    std::mt19937_64 pick_g(5);
    std::uniform_int_distribution<int> pick(0, book.size() - 1);
    DiffState st(2);
    CMatrix prev = h * st.x();
    for (int n = 0; n < 2000; ++n)
    {
        const int k = pick(pick_g);
        const CMatrix cur = h * st.encode(book.codewords[static_cast<size_t>(k)]);
        CHECK(diff_decode(prev, cur, book) == k);
        prev = cur;
    }
}

TEST_CASE("polar factor")
{
    Rng g(14);
    const CMatrix a = gaussian(3, 3, g);
    const CMatrix u = polar_unitary(a);
    CHECK((u * u.adjoint()).isIdentity(1e-12));
    const CMatrix v = polar_unitary(u);
    CHECK(v.isApprox(u, 1e-12));
}

TEST_CASE("bit errors between labels")
{
    const Codebook book = build_codebook(Design::alamouti, make_psk(4));
    CHECK(bit_errors(book, 0, 0) == 0);
    for (int k = 0; k < book.size(); ++k)
        CHECK(bit_errors(book, 0, k) == std::popcount(book.labels[0] ^ book.labels[static_cast<size_t>(k)]));
    CHECK(bit_errors(book, 0, 15) >= 1);
}
