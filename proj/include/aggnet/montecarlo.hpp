#pragma once

#include <cstdint>
#include <vector>

#include "aggnet/equilibrium.hpp"
#include "aggnet/network.hpp"

namespace aggnet {

// Worker count: hardware concurrency, capped by the AGGNET_THREADS variable
// when it parses to a positive integer.
int thread_budget();

struct SimConfig {
    double sigma2 = 1.0;
    long long replications = 0;
    uint64_t seed = 0;
    int state = 1;         // conditioning state, 0 or 1
    int collect_agent = 0; // keep raw log-action samples for this agent (0 = none)

    void validate() const;
};

struct AgentMoments {
    double mean = 0.0; // sample mean of the log-action
    double var = 0.0;  // unbiased sample variance
    double r_hat_mean = 0.0;
    double r_hat_var = 0.0;
    double se_mean = 0.0;
    double se_r_mean = 0.0;
    double se_r_var = 0.0;
};

struct EmpiricalMoments {
    SimConfig cfg;
    std::vector<AgentMoments> agents; // size n+1, [0] unused
    std::vector<double> collected;    // samples of cfg.collect_agent, rep order
};

// Simulates log-action paths under the profile. Results are reproducible for
// a fixed seed regardless of worker count: each replication runs on its own
// counter-based stream and per-block accumulators merge in block order.
EmpiricalMoments simulate_paths(const Network& net,
                                const StrategyProfile<double>& prof,
                                const SimConfig& cfg);

struct SignalCountCheck {
    double r_hat_mean = 0.0;
    double r_hat_var = 0.0;
    double gap = 0.0; // |r_hat_var - r_hat_mean|
    double z = 0.0;   // gap in combined standard errors
};

// Per-agent agreement between the two moment-based count estimators.
std::vector<SignalCountCheck> empirical_signal_count(const EmpiricalMoments& m);

struct EnsembleResult {
    std::vector<int> n_grid;
    int d = 0;
    uint64_t seed = 0;
    std::vector<std::vector<double>> r_values; // [grid index][draw], r of agent n
    std::vector<double> median_r, q1_r, q3_r;
    std::vector<double> median_ratio, q1_ratio, q3_ratio;
};

// Samples a fixed out-degree random network per draw and computes the exact
// count of the last agent via the equilibrium engine on its ancestor closure.
EnsembleResult random_ensemble(const std::vector<int>& n_grid, int d, int draws,
                               uint64_t seed);

} // namespace aggnet
