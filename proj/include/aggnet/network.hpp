#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "aggnet/errors.hpp"

namespace aggnet {

// Observation network on agents 1..n. neighbors[i] lists the earlier agents
// whose actions agent i observes, ascending and duplicate-free; index 0 is
// unused so agent ids can be used directly. signal_links[i] names the earlier
// agent whose private signal i also observes (0 = none); only mentorship
// networks set it.
struct Network {
    int n = 0;
    std::vector<std::vector<int>> neighbors;
    std::vector<int> signal_links;

    bool has_signal_links() const {
        for (int s : signal_links)
            if (s != 0)
                return true;
        return false;
    }

    void validate() const; // throws InputError on invariant violations
};

enum class NetKind { general, maximal, silo, mentorship };

std::string kind_name(NetKind k);
NetKind kind_parse(const std::string& s);

// Generations network description: K positions per cohort; position k of
// generation t >= 2 observes positions psi[k-1] of generation t-1. The first
// generation observes nobody.
struct GenerationsSpec {
    int K = 0;
    std::vector<std::vector<int>> psi; // size K, 1-based positions, ascending
    int generations = 0;
    NetKind kind = NetKind::general;
    std::vector<std::vector<int>> partition; // silo kind only

    void validate() const;
};

struct SymmetryReport {
    bool is_symmetric = false;
    int d = 0; // common neighborhood size when symmetric
    int c = 0; // common pairwise overlap when symmetric
    bool strongly_connected = false;
    // c(K-1) == d(d-1) whenever symmetric with d >= 2 and 1 <= c < d;
    // true when the identity does not apply
    bool design_consistent = true;
};

struct RandomNetSpec {
    int n = 0;
    int d = 0;
    uint64_t seed = 0;
    uint64_t stream = 0; // substream selector, used by ensemble draws
};

// generation / position of agent i in a K-cohort layout
inline int generation_of(int i, int K) { return (i - 1) / K + 1; }
inline int position_of(int i, int K) { return (i - 1) % K + 1; }

Network build_generations(const GenerationsSpec& spec);
Network build_maximal(int K, int T);
Network build_silo(int K, const std::vector<std::vector<int>>& partition, int T);
Network build_mentorship(int K, int T);

// Builds whatever the spec's kind calls for (silo psi derived from the
// partition, mentorship signal links added).
Network expand_spec(const GenerationsSpec& spec);

Network sample_fixed_degree(const RandomNetSpec& spec);

SymmetryReport validate_symmetry(const GenerationsSpec& spec);

// PL(i): longest path length out of i; 0 for empty neighborhoods.
std::vector<int> longest_paths(const Network& net);

// max_{j in N(i)} j per agent, 0 for empty neighborhoods.
std::vector<int> expanding_obs_series(const Network& net);

GenerationsSpec make_maximal_spec(int K, int T);
GenerationsSpec make_silo_spec(int K, const std::vector<std::vector<int>>& partition, int T);
GenerationsSpec make_mentorship_spec(int K, int T);
std::vector<std::vector<int>> silo_psi(int K, const std::vector<std::vector<int>>& partition);

// JSON forms. Network: {"n": int, "neighbors": [[...],...], "signal_links": [0|j,...]}
// (signal_links optional). Spec: {"K": int, "psi": [[...],...], "generations": int,
// "kind": "general|maximal|silo|mentorship", "partition": [[...],...]?} with psi
// derivable for maximal/silo/mentorship kinds.
Network network_from_json(const std::string& text);
std::string network_to_json(const Network& net);
GenerationsSpec spec_from_json(const std::string& text);
std::string spec_to_json(const GenerationsSpec& spec);
Network load_network(const std::string& path);
GenerationsSpec load_spec(const std::string& path);

} // namespace aggnet
