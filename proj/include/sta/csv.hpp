#pragma once

#include <charconv>
#include <cstdio>
#include <stdexcept>
#include <string>

namespace sta {

/** @brief Shortest-faithful decimal form at 17 significant digits. */
inline std::string format_double(double v) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, 17);
    if (res.ec != std::errc{}) throw std::runtime_error("format_double failed");
    return std::string(buf, res.ptr);
}

/** @brief Write content to path through a temporary file plus rename. */
inline void write_file_atomic(const std::string& path, const std::string& content) {
    const std::string tmp = path + ".tmp";
    std::FILE* f = std::fopen(tmp.c_str(), "wb");
    if (!f) throw std::runtime_error("cannot open '" + tmp + "' for writing");
    const std::size_t written = std::fwrite(content.data(), 1, content.size(), f);
    const bool flushed = std::fflush(f) == 0;
    std::fclose(f);
    if (written != content.size() || !flushed) {
        std::remove(tmp.c_str());
        throw std::runtime_error("short write to '" + tmp + "'");
    }
    if (std::rename(tmp.c_str(), path.c_str()) != 0) {
        std::remove(tmp.c_str());
        throw std::runtime_error("cannot rename '" + tmp + "' to '" + path + "'");
    }
}

} // namespace sta
