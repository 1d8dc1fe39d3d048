#pragma once

#include <stdexcept>
#include <string>

namespace superweyl {

struct ZeroBody : std::domain_error {
    using std::domain_error::domain_error;
};

struct BranchCut : std::domain_error {
    using std::domain_error::domain_error;
};

struct SingularBlock : std::domain_error {
    using std::domain_error::domain_error;
};

struct NoConvergence : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Riccati coefficient left the integrable regime (caustic / focal point).
struct RiccatiBlowup : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ZeroMomentum : std::domain_error {
    using std::domain_error::domain_error;
};

struct StepTooLarge : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ConfigError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

} // namespace superweyl
