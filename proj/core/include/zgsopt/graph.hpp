#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "zgsopt/errors.hpp"

namespace zgs {

using Mat = Eigen::MatrixXd;
using Vec = Eigen::VectorXd;

struct Edge {
    int i = 0;
    int j = 0;
    double weight = 1.0;
};

/// Weighted undirected communication graph. Immutable after construction;
/// construction rejects self-loops, duplicate edges, nonpositive weights,
/// and disconnected graphs.
class Topology {
public:
    /// Assemble a symmetric weight matrix from an explicit edge list.
    static Topology from_edges(int n_agents, const std::vector<Edge>& edges);

    int size() const { return static_cast<int>(weights_.rows()); }

    double weight(int i, int j) const { return weights_(i, j); }
    const Mat& weights() const { return weights_; }

    /// Adjacency list of (neighbor index, weight) pairs, positive weights only.
    const std::vector<std::pair<int, double>>& neighbors(int i) const { return adj_[i]; }

    /// Smallest positive edge weight (the theorems' underline-a).
    double min_positive_weight() const { return a_min_; }

    /// Number of undirected edges.
    int edge_count() const { return edge_count_; }

private:
    Topology() = default;

    Mat weights_;
    std::vector<std::vector<std::pair<int, double>>> adj_;
    double a_min_ = 0.0;
    int edge_count_ = 0;
};

/// Laplacian of a connected topology together with its extreme nonzero eigenvalues.
struct LaplacianSpectrum {
    Mat laplacian;
    Vec eigenvalues;   // nondecreasing, eigenvalues[0] ~ 0
    double lambda2 = 0.0;
    double lambda_max = 0.0;
};

/// Dense symmetric eigendecomposition of the graph Laplacian.
LaplacianSpectrum spectrum(const Topology& topo);

// Named generators used by scenario configs.
Topology ring_topology(int n, double weight = 1.0);
Topology complete_topology(int n, double weight = 1.0);
Topology path_topology(int n, double weight = 1.0);
Topology star_topology(int n, double weight = 1.0);

/// Erdos-Renyi G(n, edge_prob) with unit weights, redrawn from the seeded
/// engine until connected.
Topology random_connected_topology(int n, double edge_prob, std::uint64_t seed,
                                   double weight = 1.0);

/// Piecewise-constant topology schedule. Right-continuous at switch instants;
/// the last segment extends to infinity.
class SwitchingSchedule {
public:
    struct Segment {
        double start = 0.0;
        Topology topology;
    };

    static SwitchingSchedule single(Topology topo);
    static SwitchingSchedule from_segments(std::vector<Segment> segments);

    const Topology& topology_at(double t) const;

    /// min over segments of lambda2(L); the gain bound for switching runs.
    double lambda2_min() const;

    /// Smallest positive weight over all segments.
    double min_positive_weight() const;

    int n_agents() const { return segments_.front().topology.size(); }
    const std::vector<Segment>& segments() const { return segments_; }
    bool is_static() const { return segments_.size() == 1; }

private:
    SwitchingSchedule() = default;
    std::vector<Segment> segments_;
};

}  // namespace zgs
