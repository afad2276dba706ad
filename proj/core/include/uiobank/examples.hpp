#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "uiobank/simulation.hpp"

namespace uiobank {

// Six bundled demonstration setups exercising every part of the toolkit:
//   1  complete estimation under one sensor attack plus an actuator attack
//   2  partial estimation under one actuator and one sensor attack
//   3  attack reconstruction and isolation with the complete scheme
//   4  attack reconstruction and isolation with the partial scheme
//   5  static estimate feedback under a sensor attack
//   6  switching supervisor under mixed actuator/sensor attacks
// The `reproduce` CLI subcommand runs them and asserts their expected
// behavior.
inline constexpr int kExampleCount = 6;

PlantModel example_plant(int id, const Tolerances& tol = {});
Scenario example_scenario(int id, std::uint64_t seed = 1);

struct ReproduceCheck {
    std::string name;
    bool pass = false;
    std::string detail;
};

struct ReproduceReport {
    int id = 0;
    bool pass = false;
    std::vector<ReproduceCheck> checks;
    Trace trace;
};

ReproduceReport reproduce_example(int id, std::uint64_t seed = 1);

} // namespace uiobank
