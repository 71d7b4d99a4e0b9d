#pragma once

#include <stdexcept>
#include <string>

namespace fraisse {

/// Domain error carrying a stable machine-readable code such as
/// "signature-mismatch" or "amalgamation-failure".
class Error : public std::runtime_error {
public:
    Error(std::string code, const std::string& detail)
        : std::runtime_error(detail.empty() ? code : code + ": " + detail), code_(std::move(code)) {}

    [[nodiscard]] const std::string& code() const noexcept { return code_; }

private:
    std::string code_;
};

}  // namespace fraisse
