// SPDX-License-Identifier: Apache-2.0
//
// sprec - geometry-based spatial precoding for space-time block coded MIMO links
// ------------------------------------------------------------------------

#include <cmath>

#include <Eigen/Eigenvalues>
#include <Eigen/LU>
#include <Eigen/SVD>

#include "sprec/precoder.hpp"

namespace sprec
{
    namespace
    {
        constexpr double singular_tolerance = 1e-12;

        void left_modes(const CMatrix &j, RVector &gains, CMatrix &u)
        {
            const Eigen::Index n = j.rows();
            Eigen::JacobiSVD<CMatrix> svd(j, Eigen::ComputeFullU);
            const RVector &s = svd.singularValues();
            gains = RVector::Zero(n);
            for (Eigen::Index i = 0; i < std::min<Eigen::Index>(n, s.size()); ++i)
                gains(i) = s(i) * s(i);
            u = svd.matrixU();
        }

        CMatrix kron(const CMatrix &a, const CMatrix &b)
        {
            CMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
            for (Eigen::Index i = 0; i < a.rows(); ++i)
                for (Eigen::Index j = 0; j < a.cols(); ++j)
                    out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
            return out;
        }

        void check_link(double beta, double snr)
        {
            if (!(beta > 0.0) || !std::isfinite(beta))
                throw DomainError("beta must be positive and finite");
            if (!(snr > 0.0) || !std::isfinite(snr))
                throw DomainError("SNR must be positive and finite");
        }

        // log |I + c R_H (I (x) F F^H)|
        double log_det_term(const CMatrix &channel_cov, const CMatrix &f, double c)
        {
            const Eigen::Index n_tx = f.rows();
            if (channel_cov.rows() != channel_cov.cols() || n_tx == 0 || channel_cov.rows() % n_tx != 0)
                throw DimensionError("channel covariance is not conformable with the precoder");
            Eigen::SelfAdjointEigenSolver<CMatrix> es(0.5 * (channel_cov + channel_cov.adjoint()),
                                                      Eigen::EigenvaluesOnly);
            const RVector &ev = es.eigenvalues();
            if (!(ev.maxCoeff() > 0.0) || ev.minCoeff() <= singular_tolerance * ev.maxCoeff())
                throw DomainError("channel covariance is singular; the PEP bound does not apply");

            const Eigen::Index n_rx = channel_cov.rows() / n_tx;
            const CMatrix ff = f * f.adjoint();
            CMatrix m = CMatrix::Identity(channel_cov.rows(), channel_cov.cols());
            for (Eigen::Index b = 0; b < n_rx; ++b)
                m.middleCols(b * n_tx, n_tx) += c * channel_cov.middleCols(b * n_tx, n_tx) * ff;

            Eigen::PartialPivLU<CMatrix> lu(m);
            double acc = 0.0;
            const CMatrix &packed = lu.matrixLU();
            for (Eigen::Index i = 0; i < packed.rows(); ++i)
                acc += std::log(std::abs(packed(i, i)));
            return acc;
        }
    } // namespace

    EigenmodeProfile eigenmodes(const ApertureBasis &tx, const ApertureBasis &rx)
    {
        if (tx.antennas() == 0 || rx.antennas() == 0)
            throw DomainError("empty configuration matrix");
        EigenmodeProfile p;
        left_modes(tx.matrix, p.t, p.u_t);
        left_modes(rx.matrix, p.r, p.u_r);
        p.rank_deficient = effective_rank(p.t) < p.n_tx();
        return p;
    }

    int effective_rank(const RVector &gains, double rel_tol)
    {
        if (gains.size() == 0)
            return 0;
        const double top = gains.maxCoeff();
        if (!(top > 0.0))
            return 0;
        int count = 0;
        for (Eigen::Index i = 0; i < gains.size(); ++i)
            if (gains(i) > rel_tol * top)
                ++count;
        return count;
    }

    double allocation_budget(Scheme scheme, int n_tx, double beta, double snr)
    {
        check_link(beta, snr);
        if (n_tx < 1)
            throw DomainError("at least one transmit antenna is required");
        if (scheme == Scheme::coherent)
            return n_tx * snr * beta / 4.0;
        return n_tx * snr * beta / (8.0 + beta);
    }

    PrecoderSolution design_precoder(Scheme scheme, const EigenmodeProfile &profile, double beta, double snr)
    {
        PrecoderSolution sol;
        sol.budget = allocation_budget(scheme, profile.n_tx(), beta, snr);
        sol.allocation = waterfill(profile.t, profile.r, sol.budget);
        const double scale = scheme == Scheme::coherent ? std::sqrt(4.0 / (beta * snr))
                                                        : std::sqrt((8.0 + beta) / (beta * snr));
        const RVector amp = sol.allocation.q.cwiseSqrt();
        sol.f = scale * profile.u_t * amp.cast<cplx>().asDiagonal();
        return sol;
    }

    PrecoderSolution coherent_precoder(const EigenmodeProfile &profile, double beta, double snr)
    {
        return design_precoder(Scheme::coherent, profile, beta, snr);
    }

    PrecoderSolution differential_precoder(const EigenmodeProfile &profile, double beta, double snr)
    {
        return design_precoder(Scheme::differential, profile, beta, snr);
    }

    CMatrix eigenmode_channel_covariance(const EigenmodeProfile &profile)
    {
        const CMatrix u = kron(profile.u_r.conjugate(), profile.u_t);
        RVector g(profile.r.size() * profile.t.size());
        for (Eigen::Index j = 0; j < profile.r.size(); ++j)
            for (Eigen::Index i = 0; i < profile.t.size(); ++i)
                g(j * profile.t.size() + i) = profile.r(j) * profile.t(i);
        return u * g.cast<cplx>().asDiagonal() * u.adjoint();
    }

    double pep_bound_coherent(const CMatrix &channel_cov, const CMatrix &f, double beta, double snr)
    {
        check_link(beta, snr);
        return std::exp(-log_det_term(channel_cov, f, snr * beta / 4.0));
    }

    double pep_bound_coherent(const EigenmodeProfile &profile, const CMatrix &f, double beta, double snr)
    {
        return pep_bound_coherent(eigenmode_channel_covariance(profile), f, beta, snr);
    }

    double pep_bound_differential(const CMatrix &channel_cov, const CMatrix &f, double beta, double snr)
    {
        check_link(beta, snr);
        const double n = static_cast<double>(channel_cov.rows());
        const double log_prefactor = std::log(0.5) - n * std::log((8.0 + beta) / 8.0);
        return std::exp(log_prefactor - log_det_term(channel_cov, f, beta * snr / (8.0 + beta)));
    }

    double pep_bound_differential(const EigenmodeProfile &profile, const CMatrix &f, double beta, double snr)
    {
        return pep_bound_differential(eigenmode_channel_covariance(profile), f, beta, snr);
    }
} // namespace sprec
