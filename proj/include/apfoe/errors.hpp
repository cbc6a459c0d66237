#pragma once

#include <stdexcept>
#include <string>

namespace apfoe {

/// Input is too short for the requested estimator.
class InsufficientSamples : public std::invalid_argument {
public:
    InsufficientSamples(const std::string& what, std::size_t needed, std::size_t got)
        : std::invalid_argument(what + ": needs " + std::to_string(needed) + " samples, got "
                                + std::to_string(got)),
          needed_(needed), got_(got) {}

    std::size_t needed() const noexcept { return needed_; }
    std::size_t got() const noexcept { return got_; }

private:
    std::size_t needed_;
    std::size_t got_;
};

/// Input carries no usable spectral content (e.g. all zeros).
class DegenerateInput : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed IQ or config file.
class ParseError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace apfoe
