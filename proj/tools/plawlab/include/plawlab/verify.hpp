#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace plawlab {

struct VerifyResult {
    std::string name;
    double measured = 0.0;
    double threshold = 0.0;
    bool passed = false;
};

/// Randomised invariant checks across all library modules. Every check is
/// driven by one generator seeded with seed, so reruns are reproducible.
std::vector<VerifyResult> run_verify_suite(std::uint64_t seed);

}  // namespace plawlab
