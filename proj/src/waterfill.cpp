// SPDX-License-Identifier: Apache-2.0
//
// sprec - geometry-based spatial precoding for space-time block coded MIMO links
// ------------------------------------------------------------------------

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <sstream>

#include "sprec/precoder.hpp"

namespace sprec
{
    namespace
    {
        constexpr int outer_iteration_cap = 200;

        void check_inputs(const RVector &t, const RVector &r, double budget)
        {
            if (t.size() == 0)
                throw DomainError("empty transmit gain vector");
            if (!(budget > 0.0) || !std::isfinite(budget))
                throw DomainError("power budget must be positive and finite");
            if ((t.array() < 0.0).any() || (r.array() < 0.0).any())
                throw DomainError("eigen-gains must be non-negative");
            if (!(t.maxCoeff() > 0.0))
                throw DomainError("all transmit eigen-gains are zero");
            if (r.size() == 0 || !(r.sum() > 0.0))
                throw DomainError("receive eigen-gains must have a positive sum");
        }

        std::vector<int> active_set(const RVector &q)
        {
            std::vector<int> out;
            for (Eigen::Index i = 0; i < q.size(); ++i)
                if (q(i) > 0.0)
                    out.push_back(static_cast<int>(i));
            return out;
        }

        // Water level upsilon such that sum_i root(t_i, upsilon) = budget. The sum is
        // continuous and strictly decreasing on (0, max_i t_i sum r), so bisection in
        // log(upsilon) brackets it.
        Allocation solve_level(const RVector &t, const RVector &r, double budget,
                               const std::function<double(double, double)> &root)
        {
            const double rsum = r.sum();
            const double top = t.maxCoeff() * rsum;
            auto total = [&](double level)
            {
                double s = 0.0;
                for (Eigen::Index i = 0; i < t.size(); ++i)
                    s += root(t(i), level);
                return s;
            };

            double hi = top;
            double lo = 0.5 * top;
            int guard = 0;
            while (total(lo) < budget)
            {
                hi = lo;
                lo *= 0.5;
                if (++guard > 2000 || lo == 0.0)
                    throw NumericError("water level search failed to bracket the budget");
            }

            int it = 0;
            for (; it < outer_iteration_cap; ++it)
            {
                const double mid = std::sqrt(lo * hi);
                if (!(mid > lo && mid < hi))
                    break;
                if (total(mid) >= budget)
                    lo = mid;
                else
                    hi = mid;
                if (hi - lo <= 1e-15 * lo)
                    break;
            }

            // pick whichever bracket end meets the budget more closely
            const double s_lo = total(lo), s_hi = total(hi);
            const double level = std::abs(s_lo - budget) <= std::abs(s_hi - budget) ? lo : hi;

            Allocation a;
            a.water_level = level;
            a.q.resize(t.size());
            for (Eigen::Index i = 0; i < t.size(); ++i)
                a.q(i) = root(t(i), level);
            a.active = active_set(a.q);

            // when the water height dwarfs the budget, q_i = h - 1/t_i loses digits to
            // cancellation; the remaining relative error is absorbed by a rescale
            const double err = std::abs(a.q.sum() - budget) / budget;
            if (err <= 1e-6)
                a.q *= budget / a.q.sum();
            else
            {
                std::ostringstream msg;
                msg << "water level search did not converge: relative budget error " << err << " after " << it
                    << " iterations (level " << level << ", budget " << budget << ")";
                throw NumericError(msg.str());
            }
            return a;
        }
    } // namespace

    Allocation waterfill_miso(const RVector &t, double budget)
    {
        check_inputs(t, RVector::Ones(1), budget);
        const Eigen::Index n = t.size();
        std::vector<Eigen::Index> order(static_cast<size_t>(n));
        std::iota(order.begin(), order.end(), 0);
        std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return t(a) > t(b); });

        // grow the active set while the water height clears the next floor 1/t
        double inv_sum = 0.0;
        double height = 0.0;
        for (Eigen::Index k = 0; k < n; ++k)
        {
            const double tk = t(order[static_cast<size_t>(k)]);
            if (!(tk > 0.0))
                break;
            const double candidate = (budget + inv_sum + 1.0 / tk) / static_cast<double>(k + 1);
            if (k > 0 && candidate <= 1.0 / tk)
                break;
            inv_sum += 1.0 / tk;
            height = candidate;
        }

        Allocation a;
        a.water_level = 1.0 / height;
        a.q.resize(n);
        for (Eigen::Index i = 0; i < n; ++i)
            a.q(i) = t(i) > 0.0 ? std::max(0.0, height - 1.0 / t(i)) : 0.0;
        a.q *= budget / a.q.sum();
        a.active = active_set(a.q);
        return a;
    }

    double two_rx_root(double t, double r1, double r2, double level)
    {
        if (!(level < t * (r1 + r2)))
            return 0.0;
        const double den = 2.0 * level * r1 * r2 * t * t;
        const double a = (2.0 * r1 * r2 * t * t - level * t * (r1 + r2)) / den;
        const double k = (level * level * t * t * (r1 - r2) * (r1 - r2) + 4.0 * r1 * r1 * r2 * r2 * t * t * t * t)
                         / (den * den);
        return std::max(0.0, a + std::sqrt(k));
    }

    std::vector<double> three_rx_cubic_roots(double t, const RVector &r, double level)
    {
        const double r1 = r(0), r2 = r(1), r3 = r(2);
        const double e1 = r1 + r2 + r3;
        const double e2 = r1 * r2 + r1 * r3 + r2 * r3;
        const double e3 = r1 * r2 * r3;
        const double a3 = level * e3 * t * t * t;
        const double a2 = level * t * t * e2 - 3.0 * e3 * t * t * t;
        const double a1 = level * t * e1 - 2.0 * t * t * e2;
        const double a0 = level - t * e1;

        const double q = (3.0 * a1 * a3 - a2 * a2) / (9.0 * a3 * a3);
        const double rr = (9.0 * a1 * a2 * a3 - 27.0 * a0 * a3 * a3 - 2.0 * a2 * a2 * a2) / (54.0 * a3 * a3 * a3);
        const double shift = -a2 / (3.0 * a3);
        const double disc = q * q * q + rr * rr;

        std::vector<double> roots;
        if (disc >= 0.0)
        {
            const double sd = std::sqrt(disc);
            roots.push_back(shift + std::cbrt(rr + sd) + std::cbrt(rr - sd));
        }
        else
        {
            // three real roots: trigonometric form of the same Cardano quantities
            const double mag = std::sqrt(-q);
            const double theta = std::acos(std::clamp(rr / (mag * mag * mag), -1.0, 1.0));
            for (int k = 0; k < 3; ++k)
                roots.push_back(shift + 2.0 * mag * std::cos((theta + 2.0 * pi * k) / 3.0));
        }
        std::sort(roots.begin(), roots.end(), std::greater<>());
        return roots;
    }

    double three_rx_root(double t, const RVector &r, double level)
    {
        if (!(level < t * r.head(3).sum()))
            return 0.0;
        double q = std::max(0.0, three_rx_cubic_roots(t, r, level).front());
        // Cardano loses digits when the cubic is badly scaled; polish on the stationarity condition
        for (int it = 0; it < 3 && q > 0.0; ++it)
        {
            double g = -level, dg = 0.0;
            for (int j = 0; j < 3; ++j)
            {
                const double rt = r(j) * t;
                const double den = 1.0 + rt * q;
                g += rt / den;
                dg -= rt * rt / (den * den);
            }
            if (dg == 0.0)
                break;
            q = std::max(0.0, q - g / dg);
        }
        return q;
    }

    double general_root(double t, const RVector &r, double level)
    {
        const double rsum = r.sum();
        if (!(level < t * rsum))
            return 0.0;
        // g(q) = sum_j r_j t / (1 + r_j t q) - level is convex and decreasing, so Newton
        // from q = 0 climbs monotonically to the unique root without overshoot.
        const double upper = static_cast<double>(r.size()) / level;
        double q = 0.0;
        for (int it = 0; it < 200; ++it)
        {
            double g = -level, dg = 0.0;
            for (Eigen::Index j = 0; j < r.size(); ++j)
            {
                const double rt = r(j) * t;
                const double den = 1.0 + rt * q;
                g += rt / den;
                dg -= rt * rt / (den * den);
            }
            if (g <= 0.0 || dg == 0.0)
                break;
            double next = q - g / dg;
            if (!(next > q))
                break;
            next = std::min(next, upper);
            const bool done = next - q <= 1e-15 * next;
            q = next;
            if (done)
                break;
        }
        return q;
    }

    Allocation waterfill_two_rx(const RVector &t, double r1, double r2, double budget)
    {
        if (!(r1 > 0.0) || !(r2 > 0.0))
            throw DomainError("two-branch water-filling needs positive receive gains");
        RVector r(2);
        r << r1, r2;
        check_inputs(t, r, budget);
        return solve_level(t, r, budget, [&](double ti, double level) { return two_rx_root(ti, r1, r2, level); });
    }

    Allocation waterfill_three_rx(const RVector &t, const RVector &r, double budget)
    {
        if (r.size() != 3 || !(r.minCoeff() > 0.0))
            throw DomainError("three-branch water-filling needs three positive receive gains");
        check_inputs(t, r, budget);
        return solve_level(t, r, budget, [&](double ti, double level) { return three_rx_root(ti, r, level); });
    }

    Allocation waterfill_general(const RVector &t, const RVector &r, double budget)
    {
        check_inputs(t, r, budget);
        return solve_level(t, r, budget, [&](double ti, double level) { return general_root(ti, r, level); });
    }

    Allocation waterfill(const RVector &t, const RVector &r, double budget)
    {
        // zero receive gains contribute nothing to the objective
        std::vector<double> pos;
        for (Eigen::Index j = 0; j < r.size(); ++j)
            if (r(j) > 0.0)
                pos.push_back(r(j));
        const RVector rp = Eigen::Map<const RVector>(pos.data(), static_cast<Eigen::Index>(pos.size()));
        switch (rp.size())
        {
        case 1:
            return waterfill_miso(rp(0) * t, budget);
        case 2:
            return waterfill_two_rx(t, rp(0), rp(1), budget);
        case 3:
            return waterfill_three_rx(t, rp, budget);
        default:
            return waterfill_general(t, rp, budget);
        }
    }

    double allocation_objective(const RVector &t, const RVector &r, const RVector &q)
    {
        double f = 0.0;
        for (Eigen::Index j = 0; j < r.size(); ++j)
            for (Eigen::Index i = 0; i < t.size(); ++i)
                f -= std::log1p(t(i) * q(i) * r(j));
        return f;
    }

    double kkt_residual(const RVector &t, const RVector &r, const Allocation &alloc)
    {
        double worst = 0.0;
        for (Eigen::Index i = 0; i < t.size(); ++i)
        {
            double marginal = 0.0;
            for (Eigen::Index j = 0; j < r.size(); ++j)
                marginal += r(j) * t(i) / (1.0 + r(j) * t(i) * alloc.q(i));
            if (alloc.q(i) > 0.0)
                worst = std::max(worst, std::abs(alloc.water_level - marginal));
            else
                worst = std::max(worst, marginal - alloc.water_level);
        }
        return worst;
    }
} // namespace sprec
