#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace dqm {

enum class ErrorCode {
    DegenerateNorm,
    NotUnit,
    SyntaxError,
    ChannelMismatch,
    UnsupportedChannel,
    BadRate,
    NotInvertible,
    TooFewFrames,
    ShapeMismatch,
    NoPositions,
    NotApplicable,
    LengthMismatch,
    FormatError,
    IoError,
};

std::string_view to_string(ErrorCode code);

// Every failure raised by the library. SyntaxError carries the 1-based line
// of the offending BVH token.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message,
          std::optional<std::size_t> line = std::nullopt);

    ErrorCode code() const noexcept { return code_; }
    std::optional<std::size_t> line() const noexcept { return line_; }

private:
    ErrorCode code_;
    std::optional<std::size_t> line_;
};

}  // namespace dqm
