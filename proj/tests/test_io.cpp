#include <algorithm>
#include <sstream>

#include "doctest.h"
#include "json.hpp"
#include "relaylab/errors.hpp"
#include "relaylab/queue_analytics.hpp"
#include "relaylab/scenario_io.hpp"
#include "relaylab/sweep.hpp"

using namespace relaylab;
using nlohmann::json;

TEST_SUITE("io") {

TEST_CASE("minimal document loads the documented defaults") {
    const Scenario s = scenario_from_json(json{{"users", 5}});
    CHECK(s.n_users() == 5);
    CHECK(s.topology.distance(1, kRelayNode) == 60.0);
    CHECK(s.topology.distance(1, kDestNode) == 130.0);
    CHECK(s.topology.distance(kRelayNode, kDestNode) == 80.0);
    CHECK(s.phy.path_loss_exp == 4.0);
    CHECK(s.phy.gamma_dest == 0.2);
    CHECK(s.phy.self_interference == 1.0);
    CHECK(s.phy.user_tx_power_w[0] == 1e-3);
    CHECK(s.phy.relay_tx_power_w == 1e-2);
    CHECK(s.phy.noise_dest_w == 1e-11);
    CHECK(s.access.q[0] == 0.1);
    CHECK(s.access.q0 == 0.95);
    CHECK(s.access.p_rx == 1.0);
    CHECK(s.access.p_tx == 1.0);
}

TEST_CASE("unknown keys are rejected at every level") {
    CHECK_THROWS_AS(scenario_from_json(json{{"users", 2}, {"bogus", 1}}),
                    ConfigError);
    CHECK_THROWS_AS(scenario_from_json(
                        json{{"users", 2}, {"topology", {{"bogus", 1.0}}}}),
                    ConfigError);
    CHECK_THROWS_AS(
        scenario_from_json(json{{"users", 2}, {"phy", {{"gamma", 0.2}}}}),
        ConfigError);
    CHECK_THROWS_AS(
        scenario_from_json(json{{"users", 2}, {"access", {{"Q0", 0.9}}}}),
        ConfigError);
}

TEST_CASE("invariants are re-checked on load") {
    CHECK_THROWS_AS(scenario_from_json(json{{"users", 0}}), ConfigError);
    CHECK_THROWS_AS(
        scenario_from_json(
            json{{"users", 2}, {"topology", {{"relay_dest_m", -5.0}}}}),
        ConfigError);
    CHECK_THROWS_AS(
        scenario_from_json(
            json{{"users", 2}, {"phy", {{"sinr_threshold", -0.1}}}}),
        ConfigError);
    CHECK_THROWS_AS(
        scenario_from_json(
            json{{"users", 2}, {"phy", {{"path_loss_exponent", 8.0}}}}),
        ConfigError);
    CHECK_THROWS_AS(
        scenario_from_json(
            json{{"users", 2}, {"phy", {{"self_interference", 2.0}}}}),
        ConfigError);
    CHECK_THROWS_AS(
        scenario_from_json(json{{"users", 2}, {"access", {{"q", 1.5}}}}),
        ConfigError);
    CHECK_THROWS_AS(
        scenario_from_json(
            json{{"users", 3}, {"access", {{"q", {0.1, 0.2}}}}}),
        ConfigError);
}

TEST_CASE("round trip preserves the analysis") {
    json doc;
    doc["users"] = 3;
    doc["topology"] = {{"relay_dest_m", 75.0},
                       {"user_relay_m", {50.0, 60.0, 70.0}},
                       {"user_dest_m", 120.0}};
    doc["phy"] = {{"sinr_threshold", 0.6},
                  {"self_interference", 1e-8},
                  {"user_tx_power_w", {1e-3, 2e-3, 1e-3}}};
    doc["access"] = {{"q", {0.05, 0.1, 0.15}}, {"q0", 0.9}, {"p_rx", 0.7}};
    const Scenario a = scenario_from_json(doc);
    const Scenario b = scenario_from_json(scenario_to_json(a));
    const QueueMetrics qa = analyze_queue(a);
    const QueueMetrics qb = analyze_queue(b);
    CHECK(qa.lambda == qb.lambda);
    CHECK(qa.mu == qb.mu);
    CHECK(qa.p_empty == qb.p_empty);
    CHECK(qa.q_bar == qb.q_bar);
    CHECK(scenario_to_json(a) == scenario_to_json(b));
}

TEST_CASE("sweep spec parsing and validation") {
    json doc;
    doc["variable"] = "q0";
    doc["values"] = {0.5, 0.7, 0.9};
    doc["scenario"] = {{"users", 2}};
    const SweepSpec spec = sweep_spec_from_json(doc);
    CHECK(spec.variable == SweepSpec::Variable::Q0);
    CHECK(spec.values.size() == 3);
    CHECK_FALSE(spec.optimize);

    doc["bogus"] = 1;
    CHECK_THROWS_AS(sweep_spec_from_json(doc), ConfigError);
    doc.erase("bogus");

    doc["variable"] = "frequency";
    CHECK_THROWS_AS(sweep_spec_from_json(doc), ConfigError);
    doc["variable"] = "q0";

    doc["values"] = json::array();
    CHECK_THROWS_AS(sweep_spec_from_json(doc), ConfigError);
    doc["values"] = {0.5, 1.5};  // out of range for a probability
    CHECK_THROWS_AS(sweep_spec_from_json(doc), ConfigError);
}

TEST_CASE("user-count sweep needs a symmetric base") {
    json doc;
    doc["variable"] = "n";
    doc["values"] = {2, 4};
    doc["scenario"] = {{"users", 2},
                       {"access", {{"q", {0.1, 0.2}}}}};
    CHECK_THROWS_AS(sweep_spec_from_json(doc), ConfigError);
}

TEST_CASE("applying sweep values") {
    json doc;
    doc["variable"] = "n";
    doc["values"] = {7};
    doc["scenario"] = {{"users", 2}, {"access", {{"q", 0.2}}}};
    const SweepSpec spec = sweep_spec_from_json(doc);
    const Scenario s = apply_sweep_value(spec, 7);
    CHECK(s.n_users() == 7);
    CHECK(s.access.q[6] == 0.2);

    json g;
    g["variable"] = "gamma";
    g["values"] = {0.3};
    g["scenario"] = {{"users", 2}};
    const Scenario sg = apply_sweep_value(sweep_spec_from_json(g), 0.3);
    CHECK(sg.phy.gamma_dest == 0.3);
    CHECK(sg.phy.gamma_relay == 0.3);
}

TEST_CASE("single-value sweep yields a single row") {
    json doc;
    doc["variable"] = "q0";
    doc["values"] = {0.9};
    doc["scenario"] = {{"users", 2}};
    const auto rows = run_sweep(sweep_spec_from_json(doc));
    REQUIRE(rows.size() == 1);
    CHECK(rows[0].value == 0.9);
    CHECK(rows[0].stable);
    CHECK(rows[0].t.has_value());
}

TEST_CASE("unstable sweep points have blank metrics") {
    json doc;
    doc["variable"] = "q0";
    doc["values"] = {0.001, 0.9};
    doc["scenario"] = {{"users", 5},
                       {"phy", {{"sinr_threshold", 2.5},
                                {"self_interference", 1e-10}}},
                       {"access", {{"q0", 0.99}}}};
    const auto rows = run_sweep(sweep_spec_from_json(doc));
    REQUIRE(rows.size() == 2);
    CHECK_FALSE(rows[0].stable);
    CHECK_FALSE(rows[0].t.has_value());
    CHECK_FALSE(rows[0].q_bar.has_value());
    CHECK(rows[1].stable);
    CHECK(rows[1].t.has_value());
}

TEST_CASE("CSV output is deterministic") {
    json doc;
    doc["variable"] = "gamma";
    doc["values"] = {0.2, 0.6, 1.2};
    doc["scenario"] = {{"users", 3}};
    const SweepSpec spec = sweep_spec_from_json(doc);
    std::ostringstream a, b;
    write_sweep_csv(a, run_sweep(spec));
    write_sweep_csv(b, run_sweep(spec));
    const std::string text = a.str();
    CHECK(text == b.str());
    CHECK(text.substr(0, text.find('\n')) ==
          "value,T,T_net,P_rx_opt,P_tx_opt,P_empty,Q_bar,stable");
    // header + three data rows
    CHECK(std::count(text.begin(), text.end(), '\n') == 4);
}

}  // TEST_SUITE
