#include "sparsedct/signal_io.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cstring>
#include <fstream>
#include <sstream>

namespace sparsedct {

namespace {

double from_little_endian(std::array<unsigned char, 8> bytes) {
    if constexpr (std::endian::native == std::endian::big) {
        std::reverse(bytes.begin(), bytes.end());
    }
    double v;
    std::memcpy(&v, bytes.data(), 8);
    return v;
}

std::array<unsigned char, 8> to_little_endian(double v) {
    std::array<unsigned char, 8> bytes;
    std::memcpy(bytes.data(), &v, 8);
    if constexpr (std::endian::native == std::endian::big) {
        std::reverse(bytes.begin(), bytes.end());
    }
    return bytes;
}

}  // namespace

SignalFormat format_from_string(const std::string& name) {
    if (name == "text") return SignalFormat::Text;
    if (name == "bin" || name == "binary") return SignalFormat::Binary;
    throw ParseError("unknown signal format: " + name);
}

Signal read_signal(const std::filesystem::path& path, SignalFormat format) {
    std::ifstream in(path, format == SignalFormat::Binary ? std::ios::binary : std::ios::in);
    if (!in) {
        throw IoError("cannot open " + path.string());
    }
    Signal x;
    if (format == SignalFormat::Binary) {
        std::array<unsigned char, 8> bytes;
        while (in.read(reinterpret_cast<char*>(bytes.data()), 8)) {
            x.push_back(from_little_endian(bytes));
        }
        if (in.gcount() != 0) {
            throw ParseError(path.string() + ": trailing bytes, not a multiple of 8");
        }
    } else {
        std::string line;
        std::size_t lineno = 0;
        while (std::getline(in, line)) {
            ++lineno;
            const auto hash = line.find('#');
            if (hash != std::string::npos) line.erase(hash);
            std::istringstream ss(line);
            double v;
            if (ss >> v) {
                std::string rest;
                if (ss >> rest) {
                    throw ParseError(path.string() + ":" + std::to_string(lineno) +
                                     ": expected one value per line");
                }
                x.push_back(v);
            } else {
                ss.clear();
                std::string token;
                if (ss >> token) {
                    throw ParseError(path.string() + ":" + std::to_string(lineno) +
                                     ": not a number: " + token);
                }
            }
        }
        if (in.bad()) {
            throw IoError("read error on " + path.string());
        }
    }
    if (x.empty()) {
        throw ParseError(path.string() + ": no values");
    }
    return x;
}

void write_signal(const std::filesystem::path& path, const Signal& x, SignalFormat format,
                  const std::string& header_comment) {
    std::ofstream out(path, format == SignalFormat::Binary ? std::ios::binary : std::ios::out);
    if (!out) {
        throw IoError("cannot open " + path.string() + " for writing");
    }
    if (format == SignalFormat::Binary) {
        for (double v : x) {
            const auto bytes = to_little_endian(v);
            out.write(reinterpret_cast<const char*>(bytes.data()), 8);
        }
    } else {
        if (!header_comment.empty()) {
            std::istringstream lines(header_comment);
            std::string line;
            while (std::getline(lines, line)) {
                out << "# " << line << '\n';
            }
        }
        out.precision(17);
        for (double v : x) {
            out << v << '\n';
        }
    }
    out.flush();
    if (!out) {
        throw IoError("write error on " + path.string());
    }
}

}  // namespace sparsedct
