// SPDX-License-Identifier: Apache-2.0
//
// sprec - geometry-based spatial precoding for space-time block coded MIMO links
// ------------------------------------------------------------------------

#pragma once

namespace sprec
{
    inline constexpr const char *version = "1.0.0";
} // namespace sprec
