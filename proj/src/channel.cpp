// SPDX-License-Identifier: Apache-2.0
//
// sprec - geometry-based spatial precoding for space-time block coded MIMO links
// ------------------------------------------------------------------------

#include "sprec/channel.hpp"

#include <cmath>
#include <ostream>
#include <string>

#include <Eigen/Eigenvalues>

namespace sprec
{
    namespace
    {
        constexpr double clamp_tolerance = 1e-10;

        CMatrix kron(const CMatrix &a, const CMatrix &b)
        {
            CMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
            for (Eigen::Index i = 0; i < a.rows(); ++i)
                for (Eigen::Index j = 0; j < a.cols(); ++j)
                    out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
            return out;
        }
    } // namespace

    double sinc(double x)
    {
        if (x == 0.0)
            return 1.0;
        return std::sin(x) / x;
    }

    ModalCorrelation modal_corr_uniform_limited(double spread, double mean_angle, int mode_order, Side side)
    {
        if (!(spread > 0.0) || spread > pi)
            throw DomainError("uniform-limited spread must satisfy 0 < spread <= pi");
        if (mode_order < 0)
            throw DomainError("mode order must be non-negative");
        const int n = 2 * mode_order + 1;
        ModalCorrelation out;
        out.side = side;
        out.matrix.resize(n, n);
        for (int m = 0; m < n; ++m)
        {
            for (int mp = 0; mp < n; ++mp)
            {
                const int d = m - mp;
                // sin(k pi) is not exactly zero in floating point
                double value = (spread == pi && d != 0) ? 0.0 : sinc(d * spread);
                out.matrix(m, mp) = std::polar(value, d * mean_angle);
            }
        }
        return out;
    }

    ModalCorrelation modal_corr_isotropic(int mode_order, Side side)
    {
        if (mode_order < 0)
            throw DomainError("mode order must be non-negative");
        const int n = 2 * mode_order + 1;
        return {CMatrix::Identity(n, n), side};
    }

    CMatrix scattering_covariance(const ModalCorrelation &rx, const ModalCorrelation &tx)
    {
        return kron(rx.matrix, tx.matrix);
    }

    CMatrix psd_sqrt(const CMatrix &m)
    {
        if (m.rows() != m.cols())
            throw DimensionError("psd_sqrt needs a square matrix");
        if (m.rows() == 0)
            return m;
        const CMatrix herm = 0.5 * (m + m.adjoint());
        Eigen::SelfAdjointEigenSolver<CMatrix> es(herm);
        if (es.info() != Eigen::Success)
            throw NumericError("eigen-decomposition failed in psd_sqrt");
        RVector ev = es.eigenvalues();
        // eigenvalues at rounding level of the largest are treated as exact zeros
        const double noise = 1e-14 * static_cast<double>(ev.size()) * ev.cwiseAbs().maxCoeff();
        for (Eigen::Index i = 0; i < ev.size(); ++i)
        {
            if (ev(i) < -clamp_tolerance)
                throw NotPsdError("matrix is not positive semi-definite (eigenvalue " + std::to_string(ev(i)) + ")");
            ev(i) = ev(i) <= noise ? 0.0 : std::sqrt(ev(i));
        }
        const CMatrix &v = es.eigenvectors();
        return v * ev.asDiagonal() * v.adjoint();
    }

    bool is_hermitian_psd(const CMatrix &m, double tol)
    {
        if (m.rows() != m.cols())
            return false;
        if ((m - m.adjoint()).cwiseAbs().maxCoeff() > tol)
            return false;
        Eigen::SelfAdjointEigenSolver<CMatrix> es(0.5 * (m + m.adjoint()), Eigen::EigenvaluesOnly);
        return es.eigenvalues().minCoeff() >= -clamp_tolerance;
    }

    CovarianceSampler::CovarianceSampler(const CMatrix &covariance)
    {
        // E[x x^H] = conj(R) when E[x^H x]-style R is requested for a row vector x
        mixing_ = psd_sqrt(covariance).conjugate();
    }

    CVector CovarianceSampler::draw(Rng &rng) const
    {
        ComplexNormal cn;
        CVector w(mixing_.cols());
        for (Eigen::Index i = 0; i < w.size(); ++i)
            w(i) = cn(rng);
        return mixing_ * w;
    }

    CMatrix CovarianceSampler::draw_matrix(Rng &rng, int rows, int cols) const
    {
        if (static_cast<Eigen::Index>(rows) * cols != mixing_.rows())
            throw DimensionError("requested shape does not match covariance dimension");
        const CVector h = draw(rng);
        CMatrix out(rows, cols);
        for (int r = 0; r < rows; ++r)
            for (int c = 0; c < cols; ++c)
                out(r, c) = h(r * cols + c);
        return out;
    }

    CMatrix realize_scattering(const CMatrix &scattering_cov, int rows, int cols, Rng &rng)
    {
        return CovarianceSampler(scattering_cov).draw_matrix(rng, rows, cols);
    }

    CMatrix assemble_channel(const ApertureBasis &rx, const CMatrix &scattering, const ApertureBasis &tx)
    {
        if (scattering.rows() != rx.matrix.cols() || scattering.cols() != tx.matrix.cols())
            throw DimensionError("scattering matrix is not conformable with the configuration matrices");
        return rx.matrix * scattering * tx.matrix.adjoint();
    }

    CMatrix channel_covariance(const ApertureBasis &tx, const ApertureBasis &rx, const ModalCorrelation &m_tx,
                               const ModalCorrelation &m_rx)
    {
        if (m_tx.matrix.rows() != tx.matrix.cols() || m_rx.matrix.rows() != rx.matrix.cols())
            throw DimensionError("modal correlation size does not match the aperture mode count");
        const CMatrix rx_part = rx.matrix.conjugate() * m_rx.matrix * rx.matrix.transpose();
        const CMatrix tx_part = tx.matrix * m_tx.matrix * tx.matrix.adjoint();
        return kron(rx_part, tx_part);
    }

    CMatrix realize_from_covariance(const CMatrix &covariance, int n_rx, int n_tx, Rng &rng)
    {
        return CovarianceSampler(covariance).draw_matrix(rng, n_rx, n_tx);
    }

    void write_complex_csv(std::ostream &os, const CMatrix &m)
    {
        const auto old_precision = os.precision(17);
        for (Eigen::Index i = 0; i < m.rows(); ++i)
        {
            for (Eigen::Index j = 0; j < m.cols(); ++j)
            {
                if (j > 0)
                    os << ',';
                os << m(i, j).real() << ',' << m(i, j).imag();
            }
            os << '\n';
        }
        os.precision(old_precision);
    }
} // namespace sprec
