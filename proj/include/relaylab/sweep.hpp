#pragma once

#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "json.hpp"
#include "relaylab/scenario.hpp"

namespace relaylab {

/// One swept parameter over a base scenario, optionally re-optimizing the
/// activation probabilities at every point.
struct SweepSpec {
    enum class Variable { N, Gamma, G, Q0, Q, PRx, PTx };
    Variable variable = Variable::N;
    std::vector<double> values;
    Scenario base;
    bool optimize = false;
    int grid = 41;
    bool refine = true;
    std::string output;  // optional CSV path from the sweep document

    static Variable variable_from_name(const std::string& name);
    static std::string variable_name(Variable v);
};

SweepSpec sweep_spec_from_json(const nlohmann::json& doc);
SweepSpec load_sweep_spec(const std::string& path);

/// The base scenario with one variable replaced; validates the value range.
Scenario apply_sweep_value(const SweepSpec& spec, double value);

struct SweepRow {
    double value = 0.0;
    bool stable = false;
    // empty optionals render as blank CSV cells
    std::optional<double> t, t_net, p_rx, p_tx, p_empty, q_bar;
};

/// Evaluates every swept value (in parallel, output ordered by value index).
std::vector<SweepRow> run_sweep(const SweepSpec& spec);

/// Deterministic CSV: fixed header and column order, %.12g numbers.
void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows);

}  // namespace relaylab
