// SPDX-License-Identifier: Apache-2.0
//
// sprec - geometry-based spatial precoding for space-time block coded MIMO links
// ------------------------------------------------------------------------

#include "sim_plan.hpp"

namespace sprec
{
    std::vector<BerPoint> run_ber_serial(const Experiment &exp)
    {
        const detail::SweepPlan plan = detail::plan_sweep(exp);
        std::vector<BerPoint> out;
        for (std::size_t k = 0; k < exp.snr_db.size(); ++k)
        {
            const FrameContext ctx = plan.context(exp, k);
            BerPoint point;
            point.snr_db = exp.snr_db[k];
            for (long n = 0; n < plan.frames; ++n)
            {
                detail::accumulate(point, simulate_frame(ctx, n, plan.data_in(exp, n)), plan.book.bits_per_codeword);
                if (exp.stop_errors > 0 && point.codeword_errors >= exp.stop_errors)
                    break;
            }
            out.push_back(point);
        }
        return out;
    }
} // namespace sprec
