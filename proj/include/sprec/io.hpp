// SPDX-License-Identifier: Apache-2.0
//
// sprec - geometry-based spatial precoding for space-time block coded MIMO links
// ------------------------------------------------------------------------

#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

namespace sprec
{
    class IoError : public std::runtime_error
    {
    public:
        using std::runtime_error::runtime_error;
    };

    std::string read_text_file(const std::string &path);

    /// Writes to a sibling temporary file and renames it over `path`, so readers never
    /// observe a partial file. Creates missing parent directories.
    void atomic_write(const std::string &path, std::string_view content);

    /// Shortest decimal form that reads back to the same double.
    std::string format_double(double v);

    std::uint64_t fnv1a64(std::string_view data);

    /// 16 lowercase hex digits.
    std::string hex64(std::uint64_t v);
} // namespace sprec
