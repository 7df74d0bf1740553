// SPDX-License-Identifier: Apache-2.0
//
// sprec - geometry-based spatial precoding for space-time block coded MIMO links
// ------------------------------------------------------------------------

#include "sprec/bessel.hpp"

#include <cmath>

namespace sprec
{
    double bessel_j(int n, double x)
    {
        // J_{-n}(x) = (-1)^n J_n(x), J_n(-x) = (-1)^n J_n(x)
        const int order = n < 0 ? -n : n;
        double sign = (n < 0 && (order % 2 == 1)) ? -1.0 : 1.0;
        if (x < 0.0)
        {
            x = -x;
            if (order % 2 == 1)
                sign = -sign;
        }
        if (x == 0.0)
            return order == 0 ? 1.0 : 0.0;
        return sign * std::cyl_bessel_j(static_cast<double>(order), x);
    }

    cplx bessel_i0_of_sqrt(cplx w)
    {
        if (std::abs(w) > 16.0)
        {
            // I_0 is even, so either square root works. The trapezoid rule on the
            // periodic integral (1/2pi) int exp(z cos th) avoids the series cancellation.
            const cplx z = std::sqrt(w);
            const int n = 40 + 2 * static_cast<int>(std::ceil(std::abs(z)));
            cplx sum = 0.0;
            for (int k = 0; k < n; ++k)
                sum += std::exp(z * std::cos(2.0 * pi * k / n));
            return sum / static_cast<double>(n);
        }
        const cplx quarter = w / 4.0;
        cplx term = 1.0;
        cplx sum = 1.0;
        for (int k = 1; k < 500; ++k)
        {
            term *= quarter / (static_cast<double>(k) * static_cast<double>(k));
            sum += term;
            if (std::abs(term) <= 1e-16 * std::abs(sum))
                break;
        }
        return sum;
    }

    cplx bessel_i0(cplx z)
    {
        return bessel_i0_of_sqrt(z * z);
    }
} // namespace sprec
