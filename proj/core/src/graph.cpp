#include "zgsopt/graph.hpp"

#include <algorithm>
#include <limits>
#include <queue>
#include <random>
#include <sstream>

namespace zgs {

namespace {

bool is_connected(const Mat& weights) {
    const int n = static_cast<int>(weights.rows());
    if (n == 0) return false;
    std::vector<char> seen(n, 0);
    std::queue<int> q;
    q.push(0);
    seen[0] = 1;
    int count = 1;
    while (!q.empty()) {
        int u = q.front();
        q.pop();
        for (int v = 0; v < n; ++v) {
            if (!seen[v] && weights(u, v) > 0.0) {
                seen[v] = 1;
                ++count;
                q.push(v);
            }
        }
    }
    return count == n;
}

}  // namespace

Topology Topology::from_edges(int n_agents, const std::vector<Edge>& edges) {
    if (n_agents <= 0) {
        throw ValidationError("topology: n_agents must be positive, got " +
                              std::to_string(n_agents));
    }
    Mat w = Mat::Zero(n_agents, n_agents);
    for (const Edge& e : edges) {
        if (e.i < 0 || e.i >= n_agents || e.j < 0 || e.j >= n_agents) {
            std::ostringstream os;
            os << "topology: edge (" << e.i << "," << e.j << ") out of range for n="
               << n_agents;
            throw ValidationError(os.str());
        }
        if (e.i == e.j) {
            throw ValidationError("topology: self-loop at node " + std::to_string(e.i));
        }
        if (!(e.weight > 0.0)) {
            std::ostringstream os;
            os << "topology: nonpositive weight " << e.weight << " on edge (" << e.i
               << "," << e.j << ")";
            throw ValidationError(os.str());
        }
        if (w(e.i, e.j) != 0.0) {
            std::ostringstream os;
            os << "topology: duplicate edge (" << e.i << "," << e.j << ")";
            throw ValidationError(os.str());
        }
        w(e.i, e.j) = e.weight;
        w(e.j, e.i) = e.weight;
    }
    if (!is_connected(w)) {
        throw ConnectivityError("topology: graph is not connected");
    }

    Topology t;
    t.weights_ = std::move(w);
    t.adj_.resize(n_agents);
    t.a_min_ = std::numeric_limits<double>::infinity();
    for (int i = 0; i < n_agents; ++i) {
        for (int j = 0; j < n_agents; ++j) {
            double a = t.weights_(i, j);
            if (a > 0.0) {
                t.adj_[i].emplace_back(j, a);
                t.a_min_ = std::min(t.a_min_, a);
                if (i < j) ++t.edge_count_;
            }
        }
    }
    return t;
}

LaplacianSpectrum spectrum(const Topology& topo) {
    const Mat& a = topo.weights();
    Mat lap = Mat(a.rowwise().sum().asDiagonal()) - a;
    Eigen::SelfAdjointEigenSolver<Mat> solver(lap);
    if (solver.info() != Eigen::Success) {
        throw NumericalError("spectrum: eigendecomposition did not converge");
    }
    LaplacianSpectrum out;
    out.laplacian = std::move(lap);
    out.eigenvalues = solver.eigenvalues();
    out.lambda2 = out.eigenvalues(1);
    out.lambda_max = out.eigenvalues(out.eigenvalues.size() - 1);
    return out;
}

Topology ring_topology(int n, double weight) {
    std::vector<Edge> edges;
    for (int i = 0; i < n; ++i) edges.push_back({i, (i + 1) % n, weight});
    if (n == 2) edges.pop_back();  // avoid duplicate 0-1 edge
    return Topology::from_edges(n, edges);
}

Topology complete_topology(int n, double weight) {
    std::vector<Edge> edges;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) edges.push_back({i, j, weight});
    return Topology::from_edges(n, edges);
}

Topology path_topology(int n, double weight) {
    std::vector<Edge> edges;
    for (int i = 0; i + 1 < n; ++i) edges.push_back({i, i + 1, weight});
    return Topology::from_edges(n, edges);
}

Topology star_topology(int n, double weight) {
    std::vector<Edge> edges;
    for (int i = 1; i < n; ++i) edges.push_back({0, i, weight});
    return Topology::from_edges(n, edges);
}

Topology random_connected_topology(int n, double edge_prob, std::uint64_t seed,
                                   double weight) {
    if (edge_prob <= 0.0 || edge_prob > 1.0) {
        throw ValidationError("random_connected_topology: edge_prob must be in (0,1]");
    }
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    for (int attempt = 0; attempt < 1000; ++attempt) {
        Mat w = Mat::Zero(n, n);
        std::vector<Edge> edges;
        for (int i = 0; i < n; ++i) {
            for (int j = i + 1; j < n; ++j) {
                if (unif(rng) < edge_prob) {
                    edges.push_back({i, j, weight});
                    w(i, j) = w(j, i) = weight;
                }
            }
        }
        if (is_connected(w)) return Topology::from_edges(n, edges);
    }
    throw NumericalError("random_connected_topology: no connected draw in 1000 attempts");
}

SwitchingSchedule SwitchingSchedule::single(Topology topo) {
    SwitchingSchedule s;
    s.segments_.push_back({0.0, std::move(topo)});
    return s;
}

SwitchingSchedule SwitchingSchedule::from_segments(std::vector<Segment> segments) {
    if (segments.empty()) {
        throw ValidationError("schedule: at least one segment required");
    }
    if (segments.front().start != 0.0) {
        throw ValidationError("schedule: first segment must start at t = 0");
    }
    for (std::size_t k = 1; k < segments.size(); ++k) {
        if (!(segments[k].start > segments[k - 1].start)) {
            throw ValidationError("schedule: segment start times must be strictly increasing");
        }
        if (segments[k].topology.size() != segments.front().topology.size()) {
            throw ValidationError("schedule: all segments must have the same agent count");
        }
    }
    SwitchingSchedule s;
    s.segments_ = std::move(segments);
    return s;
}

const Topology& SwitchingSchedule::topology_at(double t) const {
    // right-continuous: at a switch instant the new segment is already active
    auto it = std::upper_bound(segments_.begin(), segments_.end(), t,
                               [](double v, const Segment& seg) { return v < seg.start; });
    return std::prev(it)->topology;
}

double SwitchingSchedule::lambda2_min() const {
    double m = std::numeric_limits<double>::infinity();
    for (const Segment& seg : segments_) m = std::min(m, spectrum(seg.topology).lambda2);
    return m;
}

double SwitchingSchedule::min_positive_weight() const {
    double m = std::numeric_limits<double>::infinity();
    for (const Segment& seg : segments_) m = std::min(m, seg.topology.min_positive_weight());
    return m;
}

}  // namespace zgs
