// SPDX-License-Identifier: Apache-2.0
//
// sprec - geometry-based spatial precoding for space-time block coded MIMO links
// ------------------------------------------------------------------------
//
// CSV serialization of simulation results.

#pragma once

#include <string>
#include <vector>

#include "sprec/sim.hpp"

namespace sprec
{
    std::string scheme_name(Scheme s);

    inline constexpr const char *ber_csv_header = "scheme,precoded,snr_db,trials,bits,bit_errors,ber\n";
    inline constexpr const char *pep_csv_header = "scheme,precoded,snr_db,trials,errors,pep,sigma,bound,beta\n";

    void append_ber_rows(std::string &out, Scheme scheme, bool precoded, const std::vector<BerPoint> &points);
    void append_pep_rows(std::string &out, Scheme scheme, bool precoded, const std::vector<PepPoint> &points);
} // namespace sprec
