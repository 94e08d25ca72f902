#pragma once

#include "nav2d/sim/scenario.hpp"

namespace nav2d::verify {

/// Scenario fixtures mirroring the reference experiments at desk scale.
/// The JSON files under scenarios/ are exports of these builders; a unit
/// test guards against divergence.
sim::Scenario make_empty_world();
sim::Scenario make_two_cluster_static();      // static DSW-equivalent scene (setpoint grid)
sim::Scenario make_nonequivalent_static();    // static scene with overlapping kernels disjoint
sim::Scenario make_subregion_gap_closing();   // concave workspace, moving circles, gap closes
sim::Scenario make_crowd();                   // robot-centered workspace, descending circles
sim::Scenario make_infinity_path();           // figure-eight path with three obstructions
sim::Scenario make_corridor_path();           // global path through the gap-closing scene

/// All of the above, keyed by name (used by the scenario test suite).
std::vector<sim::Scenario> all_fixtures();

}  // namespace nav2d::verify
