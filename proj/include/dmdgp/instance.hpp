#pragma once

// Instance data model for the discretizable molecular distance geometry
// problem: an ordered weighted graph on vertices 1..n, an embedding dimension
// K and a fixed placement of the first K vertices.

#include "dmdgp/errors.hpp"
#include "dmdgp/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace dmdgp {

using Vertex = int;

/// Unordered vertex pair stored as (min, max).
struct Edge {
    Vertex u = 0;
    Vertex v = 0;

    Edge() = default;
    Edge(Vertex a, Vertex b) : u(std::min(a, b)), v(std::max(a, b)) {}

    [[nodiscard]] int span() const { return v - u; }
    auto operator<=>(const Edge&) const = default;
};

class DgpInstance {
public:
    DgpInstance() = default;

    DgpInstance(int n, int K) : n_(n), K_(K)
    {
        check_dimension(K);
        if (n < K + 1)
            throw InvalidArgument("instance needs n >= K+1 vertices (n=" + std::to_string(n) +
                                  ", K=" + std::to_string(K) + ")");
        initial_.assign(static_cast<std::size_t>(K), Point::Zero(K));
    }

    [[nodiscard]] int n() const { return n_; }
    [[nodiscard]] int K() const { return K_; }

    /// Inserts or overwrites d(u,v). Throws on self-loops, out-of-range vertices or d < 0.
    void set_distance(Vertex a, Vertex b, double d)
    {
        check_vertex(a);
        check_vertex(b);
        if (a == b)
            throw InvalidArgument("self-loop on vertex " + std::to_string(a));
        if (!(d >= 0.0) || !std::isfinite(d))
            throw InvalidArgument("distance must be finite and >= 0");
        edges_[Edge(a, b)] = d;
    }

    void remove_edge(Vertex a, Vertex b) { edges_.erase(Edge(a, b)); }

    [[nodiscard]] bool has_edge(Vertex a, Vertex b) const { return edges_.contains(Edge(a, b)); }

    [[nodiscard]] std::optional<double> distance(Vertex a, Vertex b) const
    {
        auto it = edges_.find(Edge(a, b));
        if (it == edges_.end())
            return std::nullopt;
        return it->second;
    }

    [[nodiscard]] const std::map<Edge, double>& edges() const { return edges_; }

    /// Position x'_v of one of the first K vertices.
    void set_initial(Vertex v, Point p)
    {
        if (v < 1 || v > K_)
            throw InvalidArgument("initial embedding covers vertices 1..K only");
        if (p.size() != K_)
            throw InvalidArgument("initial point has wrong dimension");
        initial_[static_cast<std::size_t>(v - 1)] = std::move(p);
    }

    [[nodiscard]] const Point& initial(Vertex v) const { return initial_[static_cast<std::size_t>(v - 1)]; }
    [[nodiscard]] const std::vector<Point>& initial() const { return initial_; }

    [[nodiscard]] bool is_pruning(const Edge& e) const { return e.span() > K_; }

    bool operator==(const DgpInstance& o) const
    {
        if (n_ != o.n_ || K_ != o.K_ || edges_ != o.edges_)
            return false;
        for (std::size_t i = 0; i < initial_.size(); ++i)
            if (initial_[i] != o.initial_[i])
                return false;
        return true;
    }

private:
    void check_vertex(Vertex v) const
    {
        if (v < 1 || v > n_)
            throw InvalidArgument("vertex " + std::to_string(v) + " outside 1.." + std::to_string(n_));
    }

    int n_ = 0;
    int K_ = 0;
    std::map<Edge, double> edges_;
    std::vector<Point> initial_;
};

/// E_D holds edges spanning at most K positions, E_P the rest.
struct EdgePartition {
    std::vector<Edge> discretization;
    std::vector<Edge> pruning;
};

inline EdgePartition partition_edges(const DgpInstance& inst)
{
    EdgePartition p;
    for (const auto& [e, d] : inst.edges())
        (inst.is_pruning(e) ? p.pruning : p.discretization).push_back(e);
    return p;
}

struct ValidationReport {
    bool discretization_ok = true;
    bool simplex_ok = true;
    bool initial_ok = true;
    /// Pairs with span <= K absent from the edge set.
    std::vector<Edge> missing_edges;
    /// Discretization edges carrying distance 0.
    std::vector<Edge> zero_edges;
    /// Vertices v > K whose predecessor simplex U_v is degenerate or unrealizable.
    std::vector<Vertex> degenerate_vertices;
    /// Edges among 1..K not realized by the initial embedding.
    std::vector<Edge> initial_mismatches;
    double min_simplex_volume = std::numeric_limits<double>::infinity();

    [[nodiscard]] bool ok() const { return discretization_ok && simplex_ok && initial_ok; }

    [[nodiscard]] std::string summary() const
    {
        std::string s;
        auto edge_list = [](const std::vector<Edge>& es) {
            std::string out;
            for (std::size_t i = 0; i < es.size() && i < 8; ++i)
                out += " {" + std::to_string(es[i].u) + "," + std::to_string(es[i].v) + "}";
            if (es.size() > 8)
                out += " ...";
            return out;
        };
        s += std::string("discretization: ") + (discretization_ok ? "ok" : "FAIL");
        if (!missing_edges.empty())
            s += " missing" + edge_list(missing_edges);
        if (!zero_edges.empty())
            s += " zero-length" + edge_list(zero_edges);
        s += std::string("\nsimplex: ") + (simplex_ok ? "ok" : "FAIL");
        if (!degenerate_vertices.empty()) {
            s += " degenerate at";
            for (std::size_t i = 0; i < degenerate_vertices.size() && i < 8; ++i)
                s += " " + std::to_string(degenerate_vertices[i]);
        }
        s += " min_volume=" + std::to_string(min_simplex_volume);
        s += std::string("\ninitial: ") + (initial_ok ? "ok" : "FAIL");
        if (!initial_mismatches.empty())
            s += " mismatched" + edge_list(initial_mismatches);
        return s;
    }
};

/// Checks the discretization and strict-simplex axioms and the initial embedding.
inline ValidationReport validate(const DgpInstance& inst, const ToleranceConfig& tol = {})
{
    ValidationReport r;
    const int n = inst.n();
    const int K = inst.K();

    for (Vertex v = 2; v <= n; ++v)
        for (Vertex u = std::max(1, v - K); u < v; ++u) {
            auto d = inst.distance(u, v);
            if (!d)
                r.missing_edges.emplace_back(u, v);
            else if (*d <= 0.0)
                r.zero_edges.emplace_back(u, v);
        }
    r.discretization_ok = r.missing_edges.empty() && r.zero_edges.empty();

    // Strict simplex inequalities: U_v = {v-K, ..., v-1} spans a (K-1)-simplex.
    for (Vertex v = K + 1; v <= n; ++v) {
        bool complete = true;
        Eigen::MatrixXd dist = Eigen::MatrixXd::Zero(K, K);
        for (int i = 0; i < K && complete; ++i)
            for (int j = i + 1; j < K; ++j) {
                auto d = inst.distance(v - K + i, v - K + j);
                if (!d) {
                    complete = false;
                    break;
                }
                dist(i, j) = dist(j, i) = *d;
            }
        double vol = 0.0;
        if (complete && K == 1) {
            vol = 1.0;
        } else if (complete) {
            try {
                vol = simplex_volume(dist);
            } catch (const NegativeCayleyMenger&) {
                vol = 0.0;
            }
        }
        r.min_simplex_volume = std::min(r.min_simplex_volume, vol);
        if (!(vol > tol.degeneracy))
            r.degenerate_vertices.push_back(v);
    }
    r.simplex_ok = r.degenerate_vertices.empty();

    const auto& init = inst.initial();
    bool finite = init.size() == static_cast<std::size_t>(K);
    for (const auto& p : init)
        finite = finite && p.size() == K && p.allFinite();
    if (!finite) {
        r.initial_ok = false;
        return r;
    }
    for (Vertex u = 1; u <= K; ++u)
        for (Vertex v = u + 1; v <= K; ++v) {
            auto d = inst.distance(u, v);
            if (d && std::abs((inst.initial(u) - inst.initial(v)).norm() - *d) > tol.geometry)
                r.initial_mismatches.emplace_back(u, v);
        }
    r.initial_ok = r.initial_mismatches.empty();
    return r;
}

/// A placement of all n vertices, with an optional chirality vector.
struct Embedding {
    std::vector<Point> points;
    /// Entries in {-1, +1}, one per vertex; empty when not computed.
    std::vector<int> chirality;

    [[nodiscard]] int size() const { return static_cast<int>(points.size()); }
    [[nodiscard]] const Point& at(Vertex v) const { return points[static_cast<std::size_t>(v - 1)]; }
    [[nodiscard]] Point& at(Vertex v) { return points[static_cast<std::size_t>(v - 1)]; }
};

/// Largest per-vertex Euclidean deviation between two embeddings of equal size.
inline double max_deviation(const Embedding& a, const Embedding& b)
{
    if (a.size() != b.size())
        throw InvalidArgument("embeddings differ in vertex count");
    double m = 0.0;
    for (std::size_t i = 0; i < a.points.size(); ++i)
        m = std::max(m, (a.points[i] - b.points[i]).norm());
    return m;
}

/// Largest distance of any point from the first one; used to scale comparisons.
inline double embedding_scale(const Embedding& x)
{
    double s = 0.0;
    for (const auto& p : x.points)
        s = std::max(s, (p - x.points.front()).norm());
    return std::max(s, 1.0);
}

inline std::string chirality_string(const std::vector<int>& chi)
{
    std::string s;
    s.reserve(chi.size());
    for (int c : chi)
        s.push_back(c > 0 ? '+' : '-');
    return s;
}

} // namespace dmdgp
