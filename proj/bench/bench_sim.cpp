// SPDX-License-Identifier: Apache-2.0
//
// sprec - geometry-based spatial precoding for space-time block coded MIMO links
// ------------------------------------------------------------------------
//
// Wall-clock comparison of the serial reference and the OpenMP sweep on the same
// experiment. Also checks that both produce identical counts.

#include <chrono>
#include <cstdlib>
#include <iomanip>
#include <iostream>

#include <omp.h>

#include "sprec/sim.hpp"

namespace
{
    template <typename F>
    double seconds(F &&f)
    {
        const auto t0 = std::chrono::steady_clock::now();
        f();
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    }
} // namespace

int main(int argc, char **argv)
{
    using namespace sprec;
    const long trials = argc > 1 ? std::atol(argv[1]) : 200000;
    if (trials < 1)
    {
        std::cerr << "usage: bench_sim [codewords per SNR point]\n";
        return 2;
    }

    for (Scheme scheme : {Scheme::coherent, Scheme::differential})
    {
        Experiment exp;
        exp.tx_array = make_ula(2, 0.2);
        exp.rx_array = make_ula(1, 1.0);
        exp.scattering.kind = ScatteringKind::isotropic;
        exp.scheme = scheme;
        exp.precoded = true;
        exp.snr_db = {0.0, 10.0};
        exp.trials = trials;
        exp.seed = 7;

        std::vector<BerPoint> serial, parallel;
        const double ts = seconds([&] { serial = run_ber_serial(exp); });
        const double tp = seconds([&] { parallel = run_ber(exp); });
        const long codewords = trials * static_cast<long>(exp.snr_db.size());
        std::cout << std::fixed << std::setprecision(3) << (scheme == Scheme::coherent ? "coherent    " : "differential")
                  << "  serial " << ts << " s (" << std::setprecision(0) << codewords / ts << " cw/s)"
                  << std::setprecision(3) << "  openmp[" << omp_get_max_threads() << "] " << tp << " s ("
                  << std::setprecision(0) << codewords / tp << " cw/s)" << std::setprecision(2)
                  << "  speedup " << ts / tp << (serial == parallel ? "  match" : "  MISMATCH") << "\n";
        if (serial != parallel)
            return 1;
    }
    return 0;
}
