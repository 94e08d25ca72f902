#pragma once

#include <optional>
#include <string>
#include <vector>

#include "nav2d/geometry/boolean.hpp"
#include "nav2d/geometry/ops.hpp"
#include "nav2d/geometry/types.hpp"

namespace nav2d::star {

/// Raw robot environment: workspace plus obstacle collection.
struct Environment {
  geom::Region workspace = geom::Region::full_plane();
  geom::PolyList obstacles;
  double timestamp = 0.0;
};

/// Connected component of the obstacle intersection graph.
struct Cluster {
  std::vector<std::size_t> member_indices;
  geom::PolyList union_region;  // outer rings of the member union
  /// Intersection of the member kernels; nullopt when empty or when a
  /// member is not starshaped.
  std::optional<geom::Polygon2> kernel_intersection;
  bool all_starshaped = false;
};

struct StarObstacle {
  geom::Polygon2 polygon;
  std::vector<geom::Point2> kernel_points;
  geom::Point2 reference_point;
};

/// Modified environment E* = {W^rho, O*}.
struct StarWorld {
  geom::Region workspace_rho = geom::Region::full_plane();
  std::vector<StarObstacle> obstacles;
  double rho = 0.0;

  geom::PolyList obstacle_polygons() const {
    geom::PolyList out;
    out.reserve(obstacles.size());
    for (const StarObstacle& o : obstacles) out.push_back(o.polygon);
    return out;
  }
};

struct EnvModParams {
  double rho_bar = 0.2;
  double alpha = 0.9;
  int max_iterations = 20;
  int hull_rounds = 5;
  int kernel_points_per_cluster = 1;
};

struct EnvModResult {
  StarWorld star_world;
  geom::Point2 r0;
  geom::Point2 rg;
  double rho = 0.0;
  bool reused_cached = false;
  bool is_dsw = false;
  /// W eroded by rho_bar; the cache fallback pair is {workspace_rho_bar, {}}.
  geom::Region workspace_rho_bar;
  /// O* as produced by ModEnv* (the union-preservation claim is stated for
  /// this set; convexification may grow it afterwards).
  geom::PolyList obstacles_before_convexification;
  /// The inflated obstacle set O^rho the modification ran on.
  geom::PolyList obstacles_rho;
};

/// Connected components of the obstacle intersection graph (closed-set
/// semantics: touching obstacles share a cluster).
std::vector<Cluster> cluster_obstacles(const geom::PolyList& obstacles);

struct DswEquivalence {
  bool equivalent = false;
  std::vector<Cluster> clusters;
  std::string diagnostic;
};

/// DSW-equivalence test: every cluster has a nonempty kernel intersection,
/// and clusters not contained in the workspace have kernel mass outside it.
DswEquivalence is_dsw_equivalent(const Environment& env);

/// Kernel point selection for a cluster (workspace-exterior restriction
/// first, then the kernel-intersection restriction). Throws
/// KernelSelectionFailed when every restriction empties the candidate set.
std::vector<geom::Point2> select_kernel_points(
    const Cluster& cluster, const std::vector<geom::Point2>& exclude,
    const std::optional<geom::Point2>& prev_centroid, const geom::Region& workspace,
    int count = 1);

/// Smallest-available starshaped polygon containing the cluster union with
/// all of K in its kernel: union of the segment cones from each k in K,
/// iterated to a fixpoint. Throws HullFailed when the kernel property cannot
/// be certified.
geom::Polygon2 starshaped_hull_with_kernel(const geom::PolyList& cluster_union,
                                           const std::vector<geom::Point2>& kernel_points,
                                           int max_rounds = 5);

struct ModEnvOutcome {
  StarWorld world;
  bool reached_dsw = false;
  int iterations = 0;
};

/// ModEnv*: cluster, select kernel points (excluding r0, rg), replace each
/// cluster by its starshaped hull; repeat until the obstacles form a DSW or
/// the iteration cap is hit (caller falls back per the cache-reset rule).
ModEnvOutcome mod_env_star(const geom::Region& workspace_rho, const geom::PolyList& obstacles_rho,
                           double rho, const geom::Point2& r0, const geom::Point2& rg,
                           const StarWorld* prev, const EnvModParams& params = {});

/// DSW predicate: strictly starshaped obstacles, pairwise disjoint, and
/// workspace-straddling obstacles keep a kernel point outside the workspace.
bool is_dsw(const StarWorld& sw);

/// Full environment modification (clearance selection, initial/goal
/// reference selection, cache reuse, ModEnv*, convexification).
EnvModResult environment_modification(const Environment& env, const geom::Point2& p,
                                      const geom::Point2& pg, const geom::Point2& r_plus,
                                      const StarWorld* cached, const EnvModParams& params = {});

/// F1 = W1 \ O1 contained in F2 = W2 \ O2 (within area tolerance).
bool free_set_subset(const geom::Region& w1, const geom::PolyList& o1, const geom::Region& w2,
                     const geom::PolyList& o2, double tol = 1e-9);

}  // namespace nav2d::star
