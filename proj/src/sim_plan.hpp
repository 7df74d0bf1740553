// SPDX-License-Identifier: Apache-2.0
//
// sprec - geometry-based spatial precoding for space-time block coded MIMO links
// ------------------------------------------------------------------------

#pragma once

#include <memory>

#include "sprec/sim.hpp"

namespace sprec::detail
{
    // Everything a BER sweep needs that does not change between SNR points.
    struct SweepPlan
    {
        Codebook book;
        EigenmodeProfile profile;
        std::unique_ptr<ChannelSource> source;
        long frames = 0;
        int per_frame = 0;

        FrameContext context(const Experiment &exp, std::size_t point) const;

        // data codewords carried by frame n
        int data_in(const Experiment &exp, long frame) const;
    };

    SweepPlan plan_sweep(const Experiment &exp);

    void accumulate(BerPoint &point, const FrameTally &tally, int bits_per_codeword);
} // namespace sprec::detail
