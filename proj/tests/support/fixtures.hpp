#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "driftnet/bn/network.hpp"

namespace driftnet::testing {

// The three basic DAG shapes, binary T/F variables X, Y, Z.
// Chain X -> Y -> Z: P(X=T)=0.5, P(Y=T|X)=0.8/0.2, P(Z=T|Y)=0.7/0.3.
bn::Network causal_chain();
// Common cause X <- Y -> Z.
bn::Network common_cause();
// Common effect X -> Z <- Y.
bn::Network common_effect();

bn::Cpt binary_cpt(std::string child, std::vector<std::string> parents,
                   std::vector<double> p_true);

double uniform01(std::mt19937_64& rng);

// Random DAG over up to `max_nodes` binary variables with random CPTs.
// Edges only go from lower to higher index; ids are shuffled so that the
// lexicographic order differs from the topological one.
bn::Network random_network(std::mt19937_64& rng, std::size_t min_nodes, std::size_t max_nodes,
                           double edge_probability = 0.35);

// Random evidence over up to `max_bound` variables, never binding `query`.
bn::Evidence random_evidence(std::mt19937_64& rng, const bn::Network& net,
                             const std::string& query, std::size_t max_bound);

}  // namespace driftnet::testing
