#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>

#include "mrpp/instance.hpp"

namespace mrpp {

class OracleCapExceeded : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Brute-force reference solver for small instances. Searches joint
/// configurations (positions plus a per-robot "parked" flag) with step weight
/// equal to the number of robots not yet parked, so the first terminal state
/// reached is sum-of-costs optimal. Returns nullopt when no solution with
/// SoC <= soc_limit exists. Shares no code with the production solvers.
std::optional<Solution> joint_bfs_oracle(const Instance& instance, int soc_limit,
                                         std::size_t max_states = 4'000'000);

}  // namespace mrpp
