// SPDX-License-Identifier: Apache-2.0
//
// sprec - geometry-based spatial precoding for space-time block coded MIMO links
// ------------------------------------------------------------------------

#include "sprec/io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <unistd.h>

namespace sprec
{
    namespace fs = std::filesystem;

    std::string read_text_file(const std::string &path)
    {
        std::ifstream in(path, std::ios::binary);
        if (!in)
            throw IoError("cannot open '" + path + "' for reading");
        std::ostringstream ss;
        ss << in.rdbuf();
        if (in.bad())
            throw IoError("failed reading '" + path + "'");
        return ss.str();
    }

    void atomic_write(const std::string &path, std::string_view content)
    {
        const fs::path target(path);
        std::error_code ec;
        if (target.has_parent_path())
        {
            fs::create_directories(target.parent_path(), ec);
            if (ec)
                throw IoError("cannot create directory '" + target.parent_path().string() + "': " + ec.message());
        }
        const fs::path tmp = target.string() + ".tmp" + std::to_string(::getpid());
        {
            std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
            if (!out)
                throw IoError("cannot open '" + tmp.string() + "' for writing");
            out.write(content.data(), static_cast<std::streamsize>(content.size()));
            out.flush();
            if (!out)
            {
                out.close();
                fs::remove(tmp, ec);
                throw IoError("failed writing '" + tmp.string() + "'");
            }
        }
        fs::rename(tmp, target, ec);
        if (ec)
        {
            std::error_code ignored;
            fs::remove(tmp, ignored);
            throw IoError("cannot move output into place at '" + path + "': " + ec.message());
        }
    }

    std::string format_double(double v)
    {
        if (std::isnan(v))
            return "nan";
        if (std::isinf(v))
            return v > 0 ? "inf" : "-inf";
        char buf[64];
        const auto res = std::to_chars(buf, buf + sizeof(buf), v);
        return std::string(buf, res.ptr);
    }

    std::uint64_t fnv1a64(std::string_view data)
    {
        std::uint64_t h = 0xcbf29ce484222325ULL;
        for (unsigned char c : data)
        {
            h ^= c;
            h *= 0x100000001b3ULL;
        }
        return h;
    }

    std::string hex64(std::uint64_t v)
    {
        char buf[17];
        std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(v));
        return buf;
    }
} // namespace sprec
