#pragma once

#include "nav2d/starworld/starworld.hpp"
#include "nav2d/util/rng.hpp"

namespace nav2d::verify {

/// A randomized environment whose inflated form E^rho_bar is DSW equivalent
/// by construction, plus robot/goal positions inside C^rho_bar.
struct RandomScene {
  star::Environment env;
  geom::Point2 robot;
  geom::Point2 goal;
};

/// Generates 1-3 obstacle clusters (1-3 mixed convex / L-shaped / starshaped
/// members each) whose members share a kernel ball, separated far enough
/// that rho_bar-inflation cannot merge distinct clusters. With
/// `with_workspace`, a disk workspace is used and one cluster may straddle
/// its boundary with the shared kernel ball outside.
RandomScene random_dsw_equivalent_scene(util::Rng& rng, double rho_bar, bool with_workspace);

}  // namespace nav2d::verify
