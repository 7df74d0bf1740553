// SPDX-License-Identifier: Apache-2.0
//
// sprec - geometry-based spatial precoding for space-time block coded MIMO links
// ------------------------------------------------------------------------

#include "sprec/sim.hpp"

namespace sprec
{
    ScatteringKind parse_scattering(const std::string &name)
    {
        if (name == "iid")
            return ScatteringKind::iid;
        if (name == "isotropic")
            return ScatteringKind::isotropic;
        if (name == "kronecker_modal")
            return ScatteringKind::kronecker_modal;
        if (name == "chen")
            return ScatteringKind::chen;
        if (name == "abdi")
            return ScatteringKind::abdi;
        throw DomainError("unknown scattering model '" + name + "'");
    }

    std::string to_string(ScatteringKind k)
    {
        switch (k)
        {
        case ScatteringKind::iid:
            return "iid";
        case ScatteringKind::isotropic:
            return "isotropic";
        case ScatteringKind::kronecker_modal:
            return "kronecker_modal";
        case ScatteringKind::chen:
            return "chen";
        case ScatteringKind::abdi:
            return "abdi";
        }
        return "unknown";
    }

    ChannelSource::ChannelSource(const AntennaArray &tx, const AntennaArray &rx, const ScatteringSpec &spec,
                                 int blocks)
        : spec_(spec), n_tx_(tx.size()), n_rx_(rx.size()), blocks_(blocks)
    {
        if (blocks < 1)
            throw DomainError("a frame needs at least one block");
        if (n_tx_ < 1 || n_rx_ < 1)
            throw DomainError("arrays must have at least one element");
        j_tx_ = config_matrix(tx);
        j_rx_ = config_matrix(rx);

        switch (spec_.kind)
        {
        case ScatteringKind::iid:
            covariance_ = CMatrix::Identity(n_tx_ * n_rx_, n_tx_ * n_rx_);
            break;
        case ScatteringKind::isotropic:
            covariance_ = channel_covariance(j_tx_, j_rx_, modal_corr_isotropic(j_tx_.mode_order),
                                             modal_corr_isotropic(j_rx_.mode_order, Side::receiver));
            break;
        case ScatteringKind::kronecker_modal:
        {
            const auto m_tx = modal_corr_uniform_limited(spec_.tx_halfwidth, spec_.tx_mean, j_tx_.mode_order);
            const auto m_rx =
                modal_corr_uniform_limited(spec_.rx_halfwidth, spec_.rx_mean, j_rx_.mode_order, Side::receiver);
            scatter_ = CovarianceSampler(scattering_covariance(m_rx, m_tx));
            covariance_ = channel_covariance(j_tx_, j_rx_, m_tx, m_rx);
            break;
        }
        case ScatteringKind::chen:
        {
            if (n_rx_ != 1)
                throw DomainError("the ring model has a single receive antenna");
            ChenGeometry g = spec_.chen;
            if (g.offsets.empty())
                for (int i = 0; i < n_tx_; ++i)
                    g.offsets.push_back(tx.x(i));
            if (static_cast<int>(g.offsets.size()) != n_tx_)
                throw DimensionError("ring model offsets do not match the transmit array");
            const ChenModel model(g);
            covariance_ = model.covariance();
            st_ = CovarianceSampler(blocks_ > 1 ? model.space_time_covariance(blocks_) : covariance_);
            break;
        }
        case ScatteringKind::abdi:
        {
            AbdiGeometry g = spec_.abdi;
            if (g.tx_xy.empty())
                for (int i = 0; i < n_tx_; ++i)
                    g.tx_xy.emplace_back(tx.x(i), tx.y(i));
            if (g.rx_xy.empty())
                for (int i = 0; i < n_rx_; ++i)
                    g.rx_xy.emplace_back(rx.x(i), rx.y(i));
            if (static_cast<int>(g.tx_xy.size()) != n_tx_ || static_cast<int>(g.rx_xy.size()) != n_rx_)
                throw DimensionError("two-ring element coordinates do not match the arrays");
            covariance_ = AbdiModel(g).covariance();
            direct_ = CovarianceSampler(covariance_);
            break;
        }
        }
    }

    void ChannelSource::draw(Rng &rng, std::vector<CMatrix> &frame) const
    {
        frame.resize(static_cast<size_t>(blocks_));
        CMatrix h;
        switch (spec_.kind)
        {
        case ScatteringKind::iid:
        {
            h.resize(n_rx_, n_tx_);
            ComplexNormal cn;
            for (int r = 0; r < n_rx_; ++r)
                for (int t = 0; t < n_tx_; ++t)
                    h(r, t) = cn(rng);
            break;
        }
        case ScatteringKind::isotropic:
        {
            CMatrix hs(j_rx_.modes(), j_tx_.modes());
            ComplexNormal cn;
            for (Eigen::Index r = 0; r < hs.rows(); ++r)
                for (Eigen::Index c = 0; c < hs.cols(); ++c)
                    hs(r, c) = cn(rng);
            h = assemble_channel(j_rx_, hs, j_tx_);
            break;
        }
        case ScatteringKind::kronecker_modal:
            h = assemble_channel(j_rx_, scatter_.draw_matrix(rng, j_rx_.modes(), j_tx_.modes()), j_tx_);
            break;
        case ScatteringKind::abdi:
            h = direct_.draw_matrix(rng, n_rx_, n_tx_);
            break;
        case ScatteringKind::chen:
        {
            const CVector stacked = st_.draw(rng);
            const int per = n_tx_;
            const int stored = static_cast<int>(stacked.size()) / per;
            for (int b = 0; b < blocks_; ++b)
            {
                CMatrix hb(1, per);
                const int src = stored > 1 ? b : 0;
                for (int t = 0; t < per; ++t)
                    hb(0, t) = stacked(src * per + t);
                frame[static_cast<size_t>(b)] = std::move(hb);
            }
            return;
        }
        }
        for (auto &slot : frame)
            slot = h;
    }
} // namespace sprec
