#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>

#include "sparsedct/signal.hpp"

namespace sparsedct {

enum class SignalFormat { Text, Binary };

/// File cannot be opened or written.
struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// File opened but its contents are not a valid signal.
struct ParseError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

SignalFormat format_from_string(const std::string& name);

// Text: one decimal value per line, blank lines and '#' comments allowed.
// Binary: raw little-endian IEEE-754 float64, no header.
Signal read_signal(const std::filesystem::path& path, SignalFormat format);
void write_signal(const std::filesystem::path& path, const Signal& x, SignalFormat format,
                  const std::string& header_comment = "");

}  // namespace sparsedct
