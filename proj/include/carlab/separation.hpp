#pragma once

#include <iosfwd>

#include "carlab/sequence.hpp"

namespace carlab {

enum class Metric { Rho, RhoS };

/// min over pairs of the chosen metric, exact O(n^2) scan. Sequences with
/// fewer than two points return 1 by convention.
double separation_constant(const RandomSequence& seq, Metric metric);

struct PartitionResult {
    int parts_used = 0;
    std::vector<int> assignment; ///< part index per point, generation order
    double threshold = 0.0;      ///< delta defining the closeness graph
};

/// Greedy coloring of the delta-closeness graph (edge iff distance < delta)
/// in generation order. Within every part all pairwise distances are >= delta;
/// the number of parts is an upper bound for the least possible count.
PartitionResult greedy_partition(const RandomSequence& seq, double delta, Metric metric);

/// M+1 or more points of one region whose argument vectors share a dyadic
/// rectangle of side-lengths 2^{-m_i}, on the plain or the half-width shifted
/// grid. Events are maximal per rectangle and deduplicated across grids.
struct CollisionEvent {
    DyadicIndex region;
    std::vector<long> rectangle; ///< per-coordinate rectangle indices
    std::vector<int> members;    ///< point indices, increasing
    bool shifted = false;
};

std::vector<CollisionEvent> rectangle_collisions(const RandomSequence& seq, int M);

/// Number of regions containing a point whose closed pseudo-hyperbolic ball
/// of radius 2^{-l} holds at least M other sequence points.
long cluster_count(const RandomSequence& seq, int M, int l);

/// prod_{j != n} rho(z_j, z_n), evaluated in log space; exactly 0 on duplicates.
double uniform_separation_product(const RandomSequence& seq, int n);

/// min over n of uniform_separation_product.
double uniform_separation_min(const RandomSequence& seq);

/// JSON lines, one event per line.
void write_collisions_jsonl(std::ostream& os, const std::vector<CollisionEvent>& events);
/// JSON lines, one part per line.
void write_partition_jsonl(std::ostream& os, const PartitionResult& partition);

} // namespace carlab
