#include "dqmotion/error.hpp"

namespace dqm {

std::string_view to_string(ErrorCode code) {
    switch (code) {
        case ErrorCode::DegenerateNorm: return "DegenerateNorm";
        case ErrorCode::NotUnit: return "NotUnit";
        case ErrorCode::SyntaxError: return "SyntaxError";
        case ErrorCode::ChannelMismatch: return "ChannelMismatch";
        case ErrorCode::UnsupportedChannel: return "UnsupportedChannel";
        case ErrorCode::BadRate: return "BadRate";
        case ErrorCode::NotInvertible: return "NotInvertible";
        case ErrorCode::TooFewFrames: return "TooFewFrames";
        case ErrorCode::ShapeMismatch: return "ShapeMismatch";
        case ErrorCode::NoPositions: return "NoPositions";
        case ErrorCode::NotApplicable: return "NotApplicable";
        case ErrorCode::LengthMismatch: return "LengthMismatch";
        case ErrorCode::FormatError: return "FormatError";
        case ErrorCode::IoError: return "IoError";
    }
    return "Unknown";
}

namespace {

std::string compose(ErrorCode code, const std::string& message, std::optional<std::size_t> line) {
    std::string out(to_string(code));
    if (line) out += " at line " + std::to_string(*line);
    out += ": ";
    out += message;
    return out;
}

}  // namespace

Error::Error(ErrorCode code, const std::string& message, std::optional<std::size_t> line)
    : std::runtime_error(compose(code, message, line)), code_(code), line_(line) {}

}  // namespace dqm
