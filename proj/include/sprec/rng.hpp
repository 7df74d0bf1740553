// SPDX-License-Identifier: Apache-2.0
//
// sprec - geometry-based spatial precoding for space-time block coded MIMO links
// ------------------------------------------------------------------------

#pragma once

#include <cmath>
#include <cstdint>
#include <random>

#include "sprec/types.hpp"

namespace sprec
{
    using Rng = std::mt19937_64;

    // SplitMix64 finalizer.
    constexpr std::uint64_t mix64(std::uint64_t z)
    {
        z += 0x9e3779b97f4a7c15ULL;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    /// Independent stream keyed by (master seed, a, b). Streams depend only on the
    /// key, never on scheduling, so results do not change with the thread count.
    inline Rng make_stream(std::uint64_t master, std::uint64_t a, std::uint64_t b = 0)
    {
        return Rng(mix64(mix64(mix64(master) ^ a) + 0x632be59bd9b4e019ULL * (b + 1)));
    }

    /// Zero-mean circularly symmetric complex Gaussian with E|z|^2 = variance.
    class ComplexNormal
    {
    public:
        explicit ComplexNormal(double variance = 1.0) : dist_(0.0, std::sqrt(variance / 2.0)) {}

        template <typename G>
        cplx operator()(G &g)
        {
            const double re = dist_(g);
            const double im = dist_(g);
            return {re, im};
        }

        template <typename G>
        void fill(G &g, CMatrix &m)
        {
            for (Eigen::Index j = 0; j < m.cols(); ++j)
                for (Eigen::Index i = 0; i < m.rows(); ++i)
                    m(i, j) = (*this)(g);
        }

    private:
        std::normal_distribution<double> dist_;
    };
} // namespace sprec
