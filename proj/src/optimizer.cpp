#include "relaylab/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "relaylab/errors.hpp"
#include "relaylab/parallel.hpp"
#include "relaylab/queue_analytics.hpp"
#include "relaylab/throughput.hpp"

namespace relaylab {

namespace {

GridPoint evaluate_point(const Scenario& base, double p_rx, double p_tx) {
    Scenario s = base;
    s.access.p_rx = p_rx;
    s.access.p_tx = p_tx;

    GridPoint pt;
    pt.p_rx = p_rx;
    pt.p_tx = p_tx;
    const QueueMetrics queue = analyze_queue(s);
    pt.lambda = queue.lambda;
    pt.mu = queue.mu;
    pt.feasible = queue.stable && (queue.lambda == 0.0 ||
                                   queue.lambda <= queue.mu - kStabilityMargin);
    if (pt.feasible)
        pt.objective = analyze_throughput(s, queue).t_net;
    else
        pt.objective = -std::numeric_limits<double>::infinity();
    return pt;
}

// true when a is preferred over b under the tie-breaking policy
bool better(const GridPoint& a, const GridPoint& b) {
    if (!a.feasible) return false;
    if (!b.feasible) return true;
    if (a.objective > b.objective + kObjectiveTie) return true;
    if (b.objective > a.objective + kObjectiveTie) return false;
    const double ea = a.p_rx + a.p_tx, eb = b.p_rx + b.p_tx;
    if (ea != eb) return ea < eb;
    return a.p_rx < b.p_rx;
}

}  // namespace

const GridPoint& ObjectiveGrid::at(int i_rx, int i_tx) const {
    return points[static_cast<std::size_t>(i_rx) *
                      static_cast<std::size_t>(resolution) +
                  static_cast<std::size_t>(i_tx)];
}

ObjectiveGrid objective_grid(const Scenario& s, int resolution) {
    if (resolution < 11)
        throw ContractError("objective_grid: resolution must be >= 11");
    s.validate();

    ObjectiveGrid grid;
    grid.resolution = resolution;
    grid.points.resize(static_cast<std::size_t>(resolution) *
                       static_cast<std::size_t>(resolution));
    const double step = 1.0 / (resolution - 1);
    parallel_for(0, static_cast<std::int64_t>(grid.points.size()),
                 [&](std::int64_t idx) {
                     const int i = static_cast<int>(idx) / resolution;
                     const int j = static_cast<int>(idx) % resolution;
                     grid.points[static_cast<std::size_t>(idx)] =
                         evaluate_point(s, i * step, j * step);
                 });
    return grid;
}

OptimizationResult optimize(const Scenario& s, int grid_resolution,
                            bool refine) {
    const ObjectiveGrid grid = objective_grid(s, grid_resolution);

    OptimizationResult res;
    res.grid_resolution = grid_resolution;

    const GridPoint* best = nullptr;
    double min_gap = std::numeric_limits<double>::infinity();
    for (const GridPoint& pt : grid.points) {
        if (!pt.feasible) min_gap = std::min(min_gap, pt.lambda - pt.mu);
        if (best == nullptr || better(pt, *best)) best = &pt;
    }
    if (best == nullptr || !best->feasible) {
        res.feasible = false;
        res.min_gap = min_gap;
        return res;
    }

    GridPoint winner = *best;
    if (refine) {
        const double step = 1.0 / (grid_resolution - 1);
        const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
        int evals = 0;

        auto eval = [&](double p_rx, double p_tx) {
            ++evals;
            return evaluate_point(s, p_rx, p_tx);
        };
        GridPoint current = winner;
        for (int round = 0; round < 2; ++round) {
            for (int coord = 0; coord < 2; ++coord) {
                const double center = coord == 0 ? current.p_rx : current.p_tx;
                double lo = std::max(0.0, center - step);
                double hi = std::min(1.0, center + step);
                auto at = [&](double x) {
                    return coord == 0 ? eval(x, current.p_tx)
                                      : eval(current.p_rx, x);
                };
                double x1 = hi - inv_phi * (hi - lo);
                double x2 = lo + inv_phi * (hi - lo);
                GridPoint f1 = at(x1), f2 = at(x2);
                for (int it = 0; it < 28; ++it) {
                    if (better(f1, f2)) {
                        hi = x2;
                        x2 = x1;
                        f2 = f1;
                        x1 = hi - inv_phi * (hi - lo);
                        f1 = at(x1);
                    } else {
                        lo = x1;
                        x1 = x2;
                        f1 = f2;
                        x2 = lo + inv_phi * (hi - lo);
                        f2 = at(x2);
                    }
                }
                const GridPoint& cand = better(f1, f2) ? f1 : f2;
                if (better(cand, current)) current = cand;
            }
        }
        if (better(current, winner)) winner = current;
        res.refinement_steps = evals;
    }

    res.feasible = true;
    res.p_rx = winner.p_rx;
    res.p_tx = winner.p_tx;
    res.t_net = winner.objective;
    res.energy_proxy = winner.p_rx + winner.p_tx;
    res.stability_margin = winner.mu - winner.lambda;
    return res;
}

StabilityRegion stability_region(const Scenario& s, int resolution) {
    const ObjectiveGrid grid = objective_grid(s, resolution);
    StabilityRegion region;
    region.resolution = resolution;
    region.feasible.reserve(grid.points.size());
    region.lambda.reserve(grid.points.size());
    region.mu.reserve(grid.points.size());
    for (const GridPoint& pt : grid.points) {
        region.feasible.push_back(pt.feasible ? 1 : 0);
        region.lambda.push_back(pt.lambda);
        region.mu.push_back(pt.mu);
    }
    return region;
}

}  // namespace relaylab
