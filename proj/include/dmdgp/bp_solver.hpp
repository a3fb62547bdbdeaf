#pragma once

// Branch-and-Prune: depth-first search over the (at most two) sphere
// intersection points of each vertex, pruned by the long-range distances.

#include "dmdgp/errors.hpp"
#include "dmdgp/geometry.hpp"
#include "dmdgp/instance.hpp"

#include <array>
#include <atomic>
#include <chrono>
#include <cstdint>
#include <ostream>
#include <span>
#include <thread>
#include <vector>

namespace dmdgp {

struct SearchStats {
    int K = 0;
    /// Indexed by level 0..n; entries below K are unused and nodes[K] == 1 (the root x').
    std::vector<std::uint64_t> nodes;
    std::vector<std::uint64_t> pruned;
    std::uint64_t solutions_found = 0;
    double wall_time = 0.0;

    SearchStats() = default;
    SearchStats(int n, int K_) : K(K_), nodes(static_cast<std::size_t>(n) + 1, 0), pruned(static_cast<std::size_t>(n) + 1, 0) {}

    [[nodiscard]] int n() const { return static_cast<int>(nodes.size()) - 1; }

    void merge(const SearchStats& o)
    {
        for (std::size_t i = 0; i < nodes.size(); ++i) {
            nodes[i] += o.nodes[i];
            pruned[i] += o.pruned[i];
        }
        solutions_found += o.solutions_found;
    }

    /// Largest node count over levels strictly above `level`.
    [[nodiscard]] std::uint64_t max_width_after(int level) const
    {
        std::uint64_t w = 0;
        for (std::size_t v = static_cast<std::size_t>(level) + 1; v < nodes.size(); ++v)
            w = std::max(w, nodes[v]);
        return w;
    }
};

/// CSV `level,nodes,pruned` for levels K..n.
inline void write_stats_csv(std::ostream& out, const SearchStats& s)
{
    out << "level,nodes,pruned\n";
    for (int v = s.K; v <= s.n(); ++v)
        out << v << ',' << s.nodes[static_cast<std::size_t>(v)] << ',' << s.pruned[static_cast<std::size_t>(v)] << '\n';
}

/// Per-level view of the instance used by the search.
class SearchGraph {
public:
    struct Level {
        /// d(v-K+i, v) for i = 0..K-1.
        std::vector<double> radii;
        /// Pruning predecessors (u, d_uv) with u < v-K.
        std::vector<std::pair<Vertex, double>> pruning;
    };

    /// `use_pruning == false` drops E_P (the discretization-only graph G_D).
    explicit SearchGraph(const DgpInstance& inst, bool use_pruning = true)
        : n_(inst.n()), K_(inst.K()), levels_(static_cast<std::size_t>(inst.n()) + 1)
    {
        for (Vertex v = K_ + 1; v <= n_; ++v) {
            auto& lv = levels_[static_cast<std::size_t>(v)];
            lv.radii.resize(static_cast<std::size_t>(K_));
            for (int i = 0; i < K_; ++i) {
                auto d = inst.distance(v - K_ + i, v);
                if (!d)
                    throw InvalidArgument("missing discretization edge {" + std::to_string(v - K_ + i) + "," +
                                          std::to_string(v) + "}");
                lv.radii[static_cast<std::size_t>(i)] = *d;
            }
        }
        if (use_pruning)
            for (const auto& [e, d] : inst.edges())
                if (inst.is_pruning(e))
                    levels_[static_cast<std::size_t>(e.v)].pruning.emplace_back(e.u, d);
    }

    [[nodiscard]] int n() const { return n_; }
    [[nodiscard]] int K() const { return K_; }
    [[nodiscard]] const Level& level(Vertex v) const { return levels_[static_cast<std::size_t>(v)]; }

private:
    int n_;
    int K_;
    std::vector<Level> levels_;
};

/// Surviving positions for one vertex, positive side first.
struct Candidates {
    std::array<Point, 2> points;
    std::array<int, 2> signs{1, -1};
    int count = 0;
};

/// Sphere intersection for vertex v given x_1..x_(v-1), filtered by pruning edges.
/// `x` holds vertex w at index w-1.
inline Candidates expand_level(const SearchGraph& g, Vertex v, std::span<const Point> x, const ToleranceConfig& tol,
                               SearchStats& stats)
{
    const int K = g.K();
    const auto& lv = g.level(v);
    std::array<Point, 2> pts;
    const int found = detail::intersect_k_spheres_into(
        x.subspan(static_cast<std::size_t>(v - K - 1), static_cast<std::size_t>(K)), std::span<const double>(lv.radii),
        tol, pts);
    Candidates c;
    for (std::size_t i = 0; i < static_cast<std::size_t>(found); ++i) {
        bool keep = true;
        for (const auto& [u, d] : lv.pruning)
            if (std::abs((pts[i] - x[static_cast<std::size_t>(u - 1)]).norm() - d) > tol.prune_threshold(d)) {
                keep = false;
                break;
            }
        if (!keep) {
            ++stats.pruned[static_cast<std::size_t>(v)];
            continue;
        }
        c.points[static_cast<std::size_t>(c.count)] = std::move(pts[i]);
        c.signs[static_cast<std::size_t>(c.count)] = i == 0 ? 1 : -1;
        ++c.count;
    }
    stats.nodes[static_cast<std::size_t>(v)] += static_cast<std::uint64_t>(c.count);
    return c;
}

/// Depth-first search below a partial embedding of vertices 1..(from-1).
///
/// `x` and `signs` must have size >= last; entries from-1.. are overwritten.
/// `on_leaf(x, signs)` is called for every valid node at level `last`, in
/// chirality order (+ before -); returning false stops the search.
/// Returns false iff the search was stopped.
template <class OnLeaf>
bool branch_and_prune(const SearchGraph& g, Vertex from, Vertex last, std::vector<Point>& x, std::vector<int>& signs,
                      const ToleranceConfig& tol, SearchStats& stats, OnLeaf&& on_leaf)
{
    struct Frame {
        Vertex level;
        Candidates cand;
        int next = 0;
    };
    if (from > last)
        return on_leaf(x, signs);

    std::vector<Frame> stack;
    stack.reserve(static_cast<std::size_t>(last - from + 1));
    stack.push_back({from, expand_level(g, from, x, tol, stats)});
    while (!stack.empty()) {
        auto& f = stack.back();
        if (f.next == f.cand.count) {
            stack.pop_back();
            continue;
        }
        const auto i = static_cast<std::size_t>(f.next++);
        const Vertex v = f.level;
        x[static_cast<std::size_t>(v - 1)] = f.cand.points[i];
        signs[static_cast<std::size_t>(v - 1)] = f.cand.signs[i];
        if (v == last) {
            if (!on_leaf(x, signs))
                return false;
            continue;
        }
        Candidates next = expand_level(g, v + 1, x, tol, stats);
        stack.push_back({v + 1, std::move(next)});
    }
    return true;
}

enum class SolveMode { first, all, count };

struct SolveOptions {
    SolveMode mode = SolveMode::all;
    ToleranceConfig tol;
    /// Values > 1 explore disjoint subtrees concurrently (modes all and count).
    unsigned threads = 1;
    /// mode=all refuses to hold more solutions than this.
    std::uint64_t max_solutions = std::uint64_t{1} << 24;
};

struct SolveResult {
    /// Empty in count mode. Sorted by chirality, + before -.
    std::vector<Embedding> solutions;
    std::uint64_t count = 0;
    SearchStats stats;
};

namespace detail {

struct LeafCollector {
    SolveMode mode;
    std::uint64_t max_solutions;
    std::vector<Embedding>* out;
    std::uint64_t* count;

    bool operator()(const std::vector<Point>& x, const std::vector<int>& signs) const
    {
        ++*count;
        if (mode == SolveMode::count)
            return true;
        if (*count > max_solutions)
            throw SizeGuard("more than " + std::to_string(max_solutions) +
                            " solutions; use count mode instead of materializing them");
        out->push_back(Embedding{x, signs});
        return mode != SolveMode::first;
    }
};

struct FrontierNode {
    std::vector<Point> x;
    std::vector<int> signs;
};

inline void solve_parallel(const SearchGraph& g, const SolveOptions& opt, std::vector<Point> root_x,
                           std::vector<int> root_signs, SolveResult& res)
{
    const int n = g.n();
    const std::size_t target = 4 * static_cast<std::size_t>(opt.threads);

    // Breadth-first expansion in chirality order until the frontier is wide enough.
    std::vector<FrontierNode> frontier;
    frontier.push_back({std::move(root_x), std::move(root_signs)});
    Vertex level = g.K();
    while (level < n && !frontier.empty() && frontier.size() < target) {
        std::vector<FrontierNode> next;
        for (auto& node : frontier) {
            auto c = expand_level(g, level + 1, node.x, opt.tol, res.stats);
            for (int i = 0; i < c.count; ++i) {
                FrontierNode child = node;
                child.x[static_cast<std::size_t>(level)] = c.points[static_cast<std::size_t>(i)];
                child.signs[static_cast<std::size_t>(level)] = c.signs[static_cast<std::size_t>(i)];
                next.push_back(std::move(child));
            }
        }
        frontier = std::move(next);
        ++level;
    }

    struct Partial {
        SearchStats stats;
        std::vector<Embedding> sols;
        std::uint64_t count = 0;
        std::exception_ptr error;
    };
    std::vector<Partial> parts(frontier.size());
    std::atomic<std::size_t> cursor{0};
    auto worker = [&] {
        for (;;) {
            const std::size_t i = cursor.fetch_add(1);
            if (i >= frontier.size())
                return;
            auto& p = parts[i];
            p.stats = SearchStats(n, g.K());
            try {
                LeafCollector leaf{opt.mode, opt.max_solutions, &p.sols, &p.count};
                branch_and_prune(g, level + 1, n, frontier[i].x, frontier[i].signs, opt.tol, p.stats, leaf);
            } catch (...) {
                p.error = std::current_exception();
            }
        }
    };
    {
        std::vector<std::jthread> pool;
        for (unsigned t = 0; t < opt.threads; ++t)
            pool.emplace_back(worker);
    }
    for (auto& p : parts) {
        if (p.error)
            std::rethrow_exception(p.error);
        res.stats.merge(p.stats);
        res.count += p.count;
        if (opt.mode == SolveMode::all && res.count > opt.max_solutions)
            throw SizeGuard("more than " + std::to_string(opt.max_solutions) + " solutions");
        for (auto& s : p.sols)
            res.solutions.push_back(std::move(s));
    }
}

} // namespace detail

/// Enumerates embeddings extending x' (all, the first one, or just their number).
inline SolveResult solve(const DgpInstance& inst, const SolveOptions& opt = {})
{
    const auto t0 = std::chrono::steady_clock::now();
    const int n = inst.n();
    const int K = inst.K();
    SearchGraph g(inst);

    SolveResult res;
    res.stats = SearchStats(n, K);
    res.stats.nodes[static_cast<std::size_t>(K)] = 1;

    std::vector<Point> x(static_cast<std::size_t>(n), Point::Zero(K));
    std::vector<int> signs(static_cast<std::size_t>(n), 1);
    for (Vertex v = 1; v <= K; ++v)
        x[static_cast<std::size_t>(v - 1)] = inst.initial(v);

    if (opt.threads > 1 && opt.mode != SolveMode::first) {
        detail::solve_parallel(g, opt, std::move(x), std::move(signs), res);
    } else {
        detail::LeafCollector leaf{opt.mode, opt.max_solutions, &res.solutions, &res.count};
        branch_and_prune(g, K + 1, n, x, signs, opt.tol, res.stats, leaf);
    }
    res.stats.solutions_found = res.count;
    res.stats.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return res;
}

struct EdgeResidual {
    Edge edge;
    double distance = 0.0;
    double realized = 0.0;
    [[nodiscard]] double residual() const { return std::abs(realized - distance); }
};

struct VerificationReport {
    /// Edges whose residual exceeds the pruning threshold.
    std::vector<EdgeResidual> violations;
    double max_residual = 0.0;
    std::size_t edges_checked = 0;

    [[nodiscard]] bool feasible() const { return violations.empty(); }
};

/// Checks ||x_u - x_v|| = d_uv on every edge, to the pruning threshold.
inline VerificationReport verify_embedding(const DgpInstance& inst, const Embedding& x, const ToleranceConfig& tol = {})
{
    if (x.size() != inst.n())
        throw InvalidArgument("embedding has " + std::to_string(x.size()) + " points, instance has " +
                              std::to_string(inst.n()));
    for (const auto& p : x.points)
        if (p.size() != inst.K())
            throw InvalidArgument("embedding point dimension does not match K");
    VerificationReport r;
    for (const auto& [e, d] : inst.edges()) {
        EdgeResidual er{e, d, (x.at(e.u) - x.at(e.v)).norm()};
        r.max_residual = std::max(r.max_residual, er.residual());
        ++r.edges_checked;
        if (er.residual() > tol.prune_threshold(d))
            r.violations.push_back(er);
    }
    return r;
}

} // namespace dmdgp
