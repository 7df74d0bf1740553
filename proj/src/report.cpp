// SPDX-License-Identifier: Apache-2.0
//
// sprec - geometry-based spatial precoding for space-time block coded MIMO links
// ------------------------------------------------------------------------

#include "sprec/report.hpp"

#include "sprec/io.hpp"

namespace sprec
{
    std::string scheme_name(Scheme s) { return s == Scheme::coherent ? "coherent" : "differential"; }

    void append_ber_rows(std::string &out, Scheme scheme, bool precoded, const std::vector<BerPoint> &points)
    {
        const std::string lead = scheme_name(scheme) + (precoded ? ",1," : ",0,");
        for (const BerPoint &p : points)
            out += lead + format_double(p.snr_db) + ',' + std::to_string(p.codewords) + ',' + std::to_string(p.bits)
                   + ',' + std::to_string(p.bit_errors) + ',' + format_double(p.ber()) + '\n';
    }

    void append_pep_rows(std::string &out, Scheme scheme, bool precoded, const std::vector<PepPoint> &points)
    {
        const std::string lead = scheme_name(scheme) + (precoded ? ",1," : ",0,");
        for (const PepPoint &p : points)
            out += lead + format_double(p.snr_db) + ',' + std::to_string(p.trials) + ',' + std::to_string(p.errors)
                   + ',' + format_double(p.pep()) + ',' + format_double(p.sigma()) + ',' + format_double(p.bound)
                   + ',' + format_double(p.beta) + '\n';
    }
} // namespace sprec
