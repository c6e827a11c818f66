#include "hamflow/io_util.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "hamflow/errors.hpp"

namespace hamflow {

std::string format_g17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

void ensure_dir(const std::filesystem::path& dir) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec)
        throw_error(ErrorKind::io, "cannot create directory " + dir.string() + ": " + ec.message());
}

void write_csv(const std::filesystem::path& path, const std::string& header,
               const std::vector<std::vector<std::string>>& rows) {
    std::ofstream out(path);
    if (!out) throw_error(ErrorKind::io, "cannot open " + path.string() + " for writing");
    out << header << '\n';
    for (const auto& row : rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i) out << ',';
            out << row[i];
        }
        out << '\n';
    }
    if (!out) throw_error(ErrorKind::io, "write failed: " + path.string());
}

void write_text(const std::filesystem::path& path, const std::string& content) {
    std::ofstream out(path);
    if (!out) throw_error(ErrorKind::io, "cannot open " + path.string() + " for writing");
    out << content;
    if (!out) throw_error(ErrorKind::io, "write failed: " + path.string());
}

std::string read_text(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw_error(ErrorKind::io, "cannot open " + path.string());
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::uint64_t fnv1a64(const std::string& data) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : data) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

std::string fnv1a64_hex(const std::string& data) {
    char buf[20];
    std::snprintf(buf, sizeof(buf), "%016llx",
                  static_cast<unsigned long long>(fnv1a64(data)));
    return buf;
}

}  // namespace hamflow
