// SPDX-License-Identifier: Apache-2.0
//
// sprec - geometry-based spatial precoding for space-time block coded MIMO links
// ------------------------------------------------------------------------

#include "sprec/stbc.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include <Eigen/SVD>

namespace sprec
{
    namespace
    {
        constexpr double property_tolerance = 1e-10;

        // orthogonal designs in their usual time x antenna layout
        CMatrix time_major(Design d, const std::vector<cplx> &x)
        {
            const cplx z(0.0, 0.0);
            CMatrix g;
            switch (d)
            {
            case Design::alamouti:
                g.resize(2, 2);
                g << x[0], x[1],
                    -std::conj(x[1]), std::conj(x[0]);
                break;
            case Design::rate34_4tx:
            case Design::rate34_3tx:
                g.resize(4, 4);
                g << x[0], x[1], x[2], z,
                    -std::conj(x[1]), std::conj(x[0]), z, x[2],
                    -std::conj(x[2]), z, std::conj(x[0]), -x[1],
                    z, -std::conj(x[2]), std::conj(x[1]), x[0];
                if (d == Design::rate34_3tx)
                    g = g.leftCols(3).eval();
                break;
            case Design::real_orthogonal_4tx:
                g.resize(4, 4);
                g << x[0], x[1], x[2], x[3],
                    -x[1], x[0], -x[3], x[2],
                    -x[2], x[3], x[0], -x[1],
                    -x[3], -x[2], x[1], x[0];
                break;
            }
            return g;
        }
    } // namespace

    Design parse_design(const std::string &name)
    {
        if (name == "alamouti")
            return Design::alamouti;
        if (name == "rate34_3tx")
            return Design::rate34_3tx;
        if (name == "rate34_4tx")
            return Design::rate34_4tx;
        if (name == "real_orthogonal_4tx")
            return Design::real_orthogonal_4tx;
        throw UnsupportedDesign("unknown space-time design '" + name + "'");
    }

    std::string to_string(Design d)
    {
        switch (d)
        {
        case Design::alamouti:
            return "alamouti";
        case Design::rate34_3tx:
            return "rate34_3tx";
        case Design::rate34_4tx:
            return "rate34_4tx";
        case Design::real_orthogonal_4tx:
            return "real_orthogonal_4tx";
        }
        return "unknown";
    }

    int design_tx(Design d)
    {
        switch (d)
        {
        case Design::alamouti:
            return 2;
        case Design::rate34_3tx:
            return 3;
        default:
            return 4;
        }
    }

    int design_length(Design d) { return d == Design::alamouti ? 2 : 4; }

    int design_symbols(Design d)
    {
        switch (d)
        {
        case Design::alamouti:
            return 2;
        case Design::real_orthogonal_4tx:
            return 4;
        default:
            return 3;
        }
    }

    Constellation make_psk(int order)
    {
        if (order < 2 || (order & (order - 1)) != 0 || order > 256)
            throw DomainError("PSK order must be a power of two between 2 and 256");
        Constellation c;
        c.bits_per_symbol = std::countr_zero(static_cast<unsigned>(order));
        const double offset = order == 4 ? pi / 4.0 : 0.0;
        for (int k = 0; k < order; ++k)
        {
            c.points.push_back(std::polar(1.0, offset + 2.0 * pi * k / order));
            c.labels.push_back(static_cast<std::uint32_t>(k ^ (k >> 1)));
        }
        // BPSK points are exactly real
        if (order == 2)
            c.points = {cplx(1.0, 0.0), cplx(-1.0, 0.0)};
        return c;
    }

    CMatrix design_matrix(Design d, const std::vector<cplx> &x)
    {
        if (static_cast<int>(x.size()) != design_symbols(d))
            throw DimensionError("wrong number of symbols for the design");
        return time_major(d, x).transpose();
    }

    DistanceScan codeword_distance_scan(const std::vector<CMatrix> &codewords)
    {
        if (codewords.size() < 2)
            throw PropertyError("distance scan needs at least two codewords");
        const int n = static_cast<int>(codewords.size());
        DistanceScan scan;
        scan.table = RMatrix::Zero(n, n);
        scan.beta_min = std::numeric_limits<double>::infinity();
        for (int i = 0; i < n; ++i)
        {
            for (int j = i + 1; j < n; ++j)
            {
                const CMatrix diff = codewords[static_cast<size_t>(i)] - codewords[static_cast<size_t>(j)];
                const CMatrix gram = diff * diff.adjoint();
                const double beta = gram(0, 0).real();
                const double dev =
                    (gram - cplx(beta, 0.0) * CMatrix::Identity(gram.rows(), gram.cols())).cwiseAbs().maxCoeff();
                if (dev > property_tolerance)
                {
                    std::ostringstream msg;
                    msg << "codewords " << i << " and " << j << " violate the scaled-identity distance property"
                        << " (deviation " << dev << ")";
                    throw PropertyError(msg.str());
                }
                if (beta <= property_tolerance)
                {
                    std::ostringstream msg;
                    msg << "codewords " << i << " and " << j << " are identical";
                    throw PropertyError(msg.str());
                }
                scan.table(i, j) = scan.table(j, i) = beta;
                if (beta < scan.beta_min - 1e-12)
                {
                    scan.beta_min = beta;
                    scan.argmin = {i, j};
                }
            }
        }
        return scan;
    }

    Codebook build_codebook(Design design, const Constellation &constellation, Normalization normalization)
    {
        if (constellation.size() < 2)
            throw DomainError("constellation needs at least two points");
        Codebook book;
        book.design = design;
        book.normalization = normalization;
        book.symbols = design_symbols(design);
        book.bits_per_codeword = book.symbols * constellation.bits_per_symbol;
        if (book.bits_per_codeword > 24)
            throw DomainError("codebook too large for exhaustive enumeration");

        double scale = 1.0 / std::sqrt(static_cast<double>(book.symbols));
        if (normalization == Normalization::printed)
            scale = constellation.size() == 2 ? 1.0 / std::sqrt(2.0) : 1.0;
        for (const cplx &p : constellation.points)
            book.alphabet.push_back(scale * p);

        const int m = constellation.size();
        long total = 1;
        for (int k = 0; k < book.symbols; ++k)
            total *= m;
        std::vector<cplx> x(static_cast<size_t>(book.symbols));
        for (long index = 0; index < total; ++index)
        {
            long rest = index;
            std::uint32_t label = 0;
            for (int k = book.symbols - 1; k >= 0; --k)
            {
                const auto s = static_cast<size_t>(rest % m);
                rest /= m;
                x[static_cast<size_t>(k)] = book.alphabet[s];
                label |= constellation.labels[s] << ((book.symbols - 1 - k) * constellation.bits_per_symbol);
            }
            book.codewords.push_back(design_matrix(design, x));
            book.labels.push_back(label);
        }

        book.gram_scale = (book.codewords.front() * book.codewords.front().adjoint())(0, 0).real();
        for (size_t i = 0; i < book.codewords.size(); ++i)
        {
            const CMatrix &s = book.codewords[i];
            const CMatrix gram = s * s.adjoint();
            const double dev =
                (gram - cplx(book.gram_scale, 0.0) * CMatrix::Identity(gram.rows(), gram.cols())).cwiseAbs().maxCoeff();
            if (dev > 1e-12 * std::max(1.0, book.gram_scale))
                throw PropertyError("codeword " + std::to_string(i) + " does not have orthogonal rows");
        }

        const DistanceScan scan = codeword_distance_scan(book.codewords);
        book.beta_min = scan.beta_min;
        book.beta_pair = scan.argmin;
        return book;
    }

    int ml_decode_coherent(const CMatrix &y, const CMatrix &h_eff, const Codebook &book)
    {
        if (book.codewords.empty())
            throw DomainError("empty codebook");
        // Every codeword has S S^H = gram_scale I, so ||H S||_F is the same for all of them
        // and the distance reduces to the correlation Re tr(Y^H H S).
        const CMatrix cross = (h_eff.adjoint() * y).conjugate();
        int best = 0;
        double best_metric = -std::numeric_limits<double>::infinity();
        for (int k = 0; k < book.size(); ++k)
        {
            const double metric = cross.cwiseProduct(book.codewords[static_cast<size_t>(k)]).sum().real();
            if (metric > best_metric)
            {
                best_metric = metric;
                best = k;
            }
        }
        return best;
    }

    int diff_decode(const CMatrix &y_prev, const CMatrix &y_cur, const Codebook &book)
    {
        if (book.codewords.empty())
            throw DomainError("empty codebook");
        // Re tr(Y_prev S Y_cur^H) = Re sum(conj(Y_prev^H Y_cur) .* S)
        const CMatrix cross = (y_prev.adjoint() * y_cur).conjugate();
        int best = 0;
        double best_metric = -std::numeric_limits<double>::infinity();
        for (int k = 0; k < book.size(); ++k)
        {
            const double metric = cross.cwiseProduct(book.codewords[static_cast<size_t>(k)]).sum().real();
            if (metric > best_metric)
            {
                best_metric = metric;
                best = k;
            }
        }
        return best;
    }

    CMatrix polar_unitary(const CMatrix &m)
    {
        Eigen::JacobiSVD<CMatrix> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
        return svd.matrixU() * svd.matrixV().adjoint();
    }

    DiffState::DiffState(int n_tx)
    {
        if (n_tx < 1)
            throw DomainError("differential state needs at least one antenna");
        x_ = CMatrix::Identity(n_tx, n_tx);
    }

    const CMatrix &DiffState::encode(const CMatrix &s)
    {
        if (s.rows() != s.cols())
            throw UnsupportedDesign("differential encoding needs square codewords");
        if (s.rows() != x_.rows())
            throw DimensionError("codeword size does not match the differential state");
        x_ = (x_ * s).eval();
        if (++steps_ % renormalize_every == 0)
            x_ = polar_unitary(x_);
        return x_;
    }
} // namespace sprec
