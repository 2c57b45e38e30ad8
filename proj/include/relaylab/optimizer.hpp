#pragma once

#include <cstdint>
#include <vector>

#include "relaylab/scenario.hpp"

namespace relaylab {

/// One evaluation of the activation-probability box.
struct GridPoint {
    double p_rx = 0.0, p_tx = 0.0;
    bool feasible = false;   // queue stable with margin (or no arrivals)
    double objective = 0.0;  // network-wide throughput; meaningful iff feasible
    double lambda = 0.0;     // stationary arrival rate (lambda1 when unstable)
    double mu = 0.0;
};

/// Objective and feasibility sampled on a uniform resolution x resolution
/// grid over [0,1]^2, row-major in p_rx (outer) and p_tx (inner).
struct ObjectiveGrid {
    int resolution = 0;
    std::vector<GridPoint> points;
    const GridPoint& at(int i_rx, int i_tx) const;
};

ObjectiveGrid objective_grid(const Scenario& s, int resolution);

/// Feasibility constraint: lambda <= mu - kStabilityMargin, or lambda == 0.
inline constexpr double kStabilityMargin = 1e-9;
/// Objective values closer than this are treated as ties and broken toward
/// lower activation energy (min p_rx + p_tx, then min p_rx).
inline constexpr double kObjectiveTie = 1e-9;

struct OptimizationResult {
    double p_rx = 0.0, p_tx = 0.0;
    double t_net = 0.0;
    bool feasible = false;
    double energy_proxy = 0.0;      // p_rx + p_tx at the optimum
    double stability_margin = 0.0;  // mu - lambda at the optimum
    int grid_resolution = 0;
    int refinement_steps = 0;       // objective evaluations during refinement
    double min_gap = 0.0;  // min(lambda - mu) seen when nothing is feasible
};

/// Maximizes network-wide throughput over (p_rx, p_tx) in [0,1]^2 subject
/// to relay-queue stability: exhaustive grid scan, optionally followed by
/// coordinate-wise golden-section refinement inside the best grid cell's
/// neighborhood. Deterministic, including tie-breaking.
OptimizationResult optimize(const Scenario& s, int grid_resolution = 41,
                            bool refine = true);

/// Stability mask over the same grid.
struct StabilityRegion {
    int resolution = 0;
    std::vector<std::uint8_t> feasible;  // row-major, same layout as the grid
    std::vector<double> lambda, mu;
};

StabilityRegion stability_region(const Scenario& s, int resolution);

}  // namespace relaylab
