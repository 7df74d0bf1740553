// SPDX-License-Identifier: Apache-2.0
//
// sprec - geometry-based spatial precoding for space-time block coded MIMO links
// ------------------------------------------------------------------------

#pragma once

#include "sprec/types.hpp"

namespace sprec
{
    /// Bessel function of the first kind, integer order (negative orders allowed).
    double bessel_j(int n, double x);

    /// Modified Bessel function I_0 for complex argument.
    cplx bessel_i0(cplx z);

    /// I_0(sqrt(w)) evaluated directly from the series in w, so the branch of the
    /// square root never matters: sum_k (w/4)^k / (k!)^2.
    cplx bessel_i0_of_sqrt(cplx w);
} // namespace sprec
