#pragma once

#include <string>

#include "mqc/protocols.hpp"

// Graph-state preparation using only {ZX, Y} measurements and a single
// reusable ancilla, verified against the standard H-then-CZ procedure.
namespace mqc {

struct Graph {
    int n = 0;                                 // vertices 1..n
    std::vector<std::pair<int, int>> edges;    // unordered, stored (lo, hi)

    int num_edges() const { return static_cast<int>(edges.size()); }
    int degree(int vertex) const;
    bool has_edge(int a, int b) const;

    static Graph parse(std::string_view text);
};

/// Product of CZ over edges after H on every vertex, from |0...0>.
StateVector standard_graph_state(const Graph& g);

/// Whether the residual side effect on a vertex of the given degree and
/// recorded outcome (t_k for even degree, u_k for odd) is sigma_z.
bool needs_sigma_z(int deg, int outcome);

struct VertexRecord {
    int vertex = 0;
    bool even_degree = false;
    int outcome = 0;  // t_k (even) or u_k (odd)
    bool corrected = false;
};

struct GraphPrepTranscript {
    std::vector<VertexRecord> vertices;
    OutcomeTranscript measurements;
};

struct GraphMetrics {
    int size = 0;            // realized measurement count
    int depth = 0;           // greedy qubit-disjoint layering
    double expected_size = 0.0;
};

struct GraphPrepResult {
    StateVector state;                 // n + 1 physical qubits
    std::vector<int> logical_to_phys;  // [vertex-1] -> physical slot
    int free_phys = 0;
    GraphPrepTranscript transcript;
    GraphMetrics metrics;
};

GraphPrepResult prepare_graph_state(const Graph& g, OutcomeSource& source, int max_rounds = 64);
GraphPrepResult prepare_graph_state(const Graph& g, std::mt19937_64& rng, int max_rounds = 64);

/// Size/depth of a measurement transcript. Depth layers greedily: a
/// measurement joins the earliest layer after every earlier measurement it
/// shares a qubit with.
GraphMetrics program_metrics(const OutcomeTranscript& transcript);

/// Overlap magnitude with oracle (x) (free ancilla), after reindexing.
double graph_fidelity(const GraphPrepResult& result, const StateVector& oracle);

/// Analytic expected measurement count for preparing |G>.
double expected_prep_size(const Graph& g);

}  // namespace mqc
