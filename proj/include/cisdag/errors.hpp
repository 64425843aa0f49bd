#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace cisdag {

struct NotPositiveDefinite : std::runtime_error {
    explicit NotPositiveDefinite(const std::string& what) : std::runtime_error(what) {}
};

struct DimensionMismatch : std::runtime_error {
    explicit DimensionMismatch(const std::string& what) : std::runtime_error(what) {}
};

struct DimensionTooLarge : std::runtime_error {
    explicit DimensionTooLarge(const std::string& what) : std::runtime_error(what) {}
};

struct MaxIterations : std::runtime_error {
    explicit MaxIterations(const std::string& what) : std::runtime_error(what) {}
};

struct MleDoesNotExist : std::runtime_error {
    explicit MleDoesNotExist(const std::string& what) : std::runtime_error(what) {}
};

struct ModelMismatch : std::runtime_error {
    explicit ModelMismatch(const std::string& what) : std::runtime_error(what) {}
};

// Recovery found no admissible index at some step.  step is 1-based from the
// back (step 1 places the last position); best_margin is the least-violating
// candidate's worst coefficient, for diagnostics.
struct NoCandidate : std::runtime_error {
    std::size_t step;
    double best_margin;
    NoCandidate(const std::string& what, std::size_t step_, double best_margin_)
        : std::runtime_error(what), step(step_), best_margin(best_margin_) {}
};

struct ParseError : std::runtime_error {
    explicit ParseError(const std::string& what) : std::runtime_error(what) {}
};

} // namespace cisdag
