#pragma once

// Chirality, partial reflections and the groups they generate.
//
// g_v reflects x_v, ..., x_n through the hyperplane of x_(v-K), ..., x_(v-1).
// The g_v (v > K) commute and are involutions, so the discretization group
// is C_2^(n-K); elements are subsets of generators composed by symmetric
// difference. The pruning group keeps the g_w that preserve every
// pruning-edge distance, and its order is the number of solutions.

#include "dmdgp/bp_solver.hpp"
#include "dmdgp/errors.hpp"
#include "dmdgp/geometry.hpp"
#include "dmdgp/instance.hpp"

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace dmdgp {

/// gamma_v: +1 before position v, -1 from v on (length n).
inline std::vector<int> gamma_vector(int n, Vertex v)
{
    std::vector<int> g(static_cast<std::size_t>(n), 1);
    for (Vertex i = v; i <= n; ++i)
        g[static_cast<std::size_t>(i - 1)] = -1;
    return g;
}

inline std::vector<int> componentwise_product(const std::vector<int>& a, const std::vector<int>& b)
{
    if (a.size() != b.size())
        throw InvalidArgument("sign vectors differ in length");
    std::vector<int> out(a.size());
    for (std::size_t i = 0; i < a.size(); ++i)
        out[i] = a[i] * b[i];
    return out;
}

/// chi(x)_i = +1 for i <= K, otherwise the orientation of (x_(i-K), ..., x_i).
inline std::vector<int> chirality(const DgpInstance& inst, const Embedding& x, const ToleranceConfig& tol = {})
{
    const int n = inst.n();
    const int K = inst.K();
    if (x.size() != n)
        throw InvalidArgument("embedding size does not match instance");
    std::vector<int> chi(static_cast<std::size_t>(n), 1);
    for (Vertex i = K + 1; i <= n; ++i) {
        std::span<const Point> simplex(x.points.data() + (i - K - 1), static_cast<std::size_t>(K + 1));
        const int s = signed_simplex_orientation(simplex, tol.degeneracy);
        if (s == 0)
            throw DegenerateChirality("vertex " + std::to_string(i) + " lies on its predecessors' hyperplane");
        chi[static_cast<std::size_t>(i - 1)] = s;
    }
    return chi;
}

/// g_v(x). A stored chirality is carried along as chi(x) * gamma_v.
inline Embedding apply_partial_reflection(const DgpInstance& inst, const Embedding& x, Vertex v,
                                          const ToleranceConfig& tol = {})
{
    const int n = inst.n();
    const int K = inst.K();
    if (v <= K || v > n)
        throw InvalidArgument("partial reflection g_v needs K < v <= n");
    if (x.size() != n)
        throw InvalidArgument("embedding size does not match instance");
    const auto hull = make_hull(std::span<const Point>(x.points.data() + (v - K - 1), static_cast<std::size_t>(K)),
                                tol.degeneracy);
    Embedding y = x;
    for (Vertex w = v; w <= n; ++w)
        y.at(w) = hull.reflect(x.at(w));
    if (!y.chirality.empty())
        for (Vertex w = v; w <= n; ++w)
            y.chirality[static_cast<std::size_t>(w - 1)] *= -1;
    return y;
}

/// Element of the discretization group: the set of generators g_v it contains.
class GroupElement {
public:
    GroupElement() = default;
    explicit GroupElement(int n) : bits_(static_cast<std::size_t>(n) + 1, false) {}

    static GroupElement from_generators(int n, std::span<const Vertex> gens)
    {
        GroupElement g(n);
        for (Vertex v : gens)
            g.toggle(v);
        return g;
    }

    void toggle(Vertex v) { bits_.at(static_cast<std::size_t>(v)) = !bits_.at(static_cast<std::size_t>(v)); }
    [[nodiscard]] bool contains(Vertex v) const { return bits_.at(static_cast<std::size_t>(v)); }
    [[nodiscard]] bool is_identity() const { return std::none_of(bits_.begin(), bits_.end(), [](bool b) { return b; }); }

    /// Group product: symmetric difference of generator sets.
    [[nodiscard]] GroupElement compose(const GroupElement& o) const
    {
        if (bits_.size() != o.bits_.size())
            throw InvalidArgument("group elements of different instances");
        GroupElement r = *this;
        for (std::size_t i = 0; i < bits_.size(); ++i)
            r.bits_[i] = bits_[i] != o.bits_[i];
        return r;
    }

    /// Generators in increasing order.
    [[nodiscard]] std::vector<Vertex> generators() const
    {
        std::vector<Vertex> out;
        for (std::size_t i = 0; i < bits_.size(); ++i)
            if (bits_[i])
                out.push_back(static_cast<Vertex>(i));
        return out;
    }

    bool operator==(const GroupElement&) const = default;

private:
    std::vector<bool> bits_;
};

/// Applies the generators of g in increasing vertex order.
inline Embedding apply_group_element(const DgpInstance& inst, const Embedding& x, const GroupElement& g,
                                     const ToleranceConfig& tol = {})
{
    Embedding y = x;
    for (Vertex v : g.generators())
        y = apply_partial_reflection(inst, y, v, tol);
    return y;
}

enum class PruningWindow {
    /// Exclude g_w for w in [u+K+1, v]: g_(u+K) mirrors through a hyperplane containing x_u.
    corrected,
    /// Exclude w in [u+K, v], as originally stated; undercounts by g_(u+K).
    literal,
};

/// Generators w of the pruning group, in increasing order.
inline std::vector<Vertex> pruning_group_generators(const DgpInstance& inst,
                                                    PruningWindow window = PruningWindow::corrected)
{
    const int n = inst.n();
    const int K = inst.K();
    const int shift = window == PruningWindow::corrected ? 1 : 0;
    // Difference array over the excluded windows.
    std::vector<int> cover(static_cast<std::size_t>(n) + 2, 0);
    for (const auto& [e, d] : inst.edges()) {
        if (!inst.is_pruning(e))
            continue;
        const int lo = e.u + K + shift;
        if (lo > e.v)
            continue;
        ++cover[static_cast<std::size_t>(lo)];
        --cover[static_cast<std::size_t>(e.v) + 1];
    }
    std::vector<Vertex> gens;
    int running = 0;
    for (Vertex w = 1; w <= n; ++w) {
        running += cover[static_cast<std::size_t>(w)];
        if (w > K && running == 0)
            gens.push_back(w);
    }
    return gens;
}

/// Exponent l with |X| = 2^l on a generic YES instance. Meaningless on NO instances.
inline int predicted_solution_exponent(const DgpInstance& inst, PruningWindow window = PruningWindow::corrected)
{
    return static_cast<int>(pruning_group_generators(inst, window).size());
}

namespace detail {

template <class Visit>
void walk_subgroup(const DgpInstance& inst, const Embedding& x, std::span<const Vertex> gens, std::size_t i,
                   GroupElement& g, const ToleranceConfig& tol, Visit& visit)
{
    if (i == gens.size()) {
        visit(x, g);
        return;
    }
    walk_subgroup(inst, x, gens, i + 1, g, tol, visit);
    g.toggle(gens[i]);
    walk_subgroup(inst, apply_partial_reflection(inst, x, gens[i], tol), gens, i + 1, g, tol, visit);
    g.toggle(gens[i]);
}

} // namespace detail

/// Visits (h(x), h) for every h in the subgroup generated by `gens`.
/// Each image is reached through at most |gens| reflections.
template <class Visit>
void for_each_in_subgroup(const DgpInstance& inst, const Embedding& x, std::span<const Vertex> gens, Visit&& visit,
                          const ToleranceConfig& tol = {})
{
    GroupElement g(inst.n());
    detail::walk_subgroup(inst, x, gens, 0, g, tol, visit);
}

/// All 2^|gens| images of x, sorted by chirality (+ before -).
inline std::vector<Embedding> orbit(const DgpInstance& inst, const Embedding& x, std::span<const Vertex> gens,
                                    const ToleranceConfig& tol = {}, std::uint64_t max_size = std::uint64_t{1} << 24)
{
    if (gens.size() >= 63 || (std::uint64_t{1} << gens.size()) > max_size)
        throw SizeGuard("orbit of 2^" + std::to_string(gens.size()) + " elements exceeds the size guard");
    Embedding seed = x;
    if (seed.chirality.empty())
        seed.chirality = chirality(inst, x, tol);
    std::vector<Embedding> out;
    out.reserve(std::size_t{1} << gens.size());
    for_each_in_subgroup(
        inst, seed, gens, [&](const Embedding& y, const GroupElement&) { out.push_back(y); }, tol);
    std::sort(out.begin(), out.end(), [](const Embedding& a, const Embedding& b) {
        return chirality_string(a.chirality) < chirality_string(b.chirality);
    });
    return out;
}

/// Some h in <gens> with h(x) within `tol_dev` of y, if one exists.
inline std::optional<GroupElement> find_group_element(const DgpInstance& inst, const Embedding& x, const Embedding& y,
                                                      std::span<const Vertex> gens, double tol_dev,
                                                      const ToleranceConfig& tol = {})
{
    if (gens.size() > 24)
        throw SizeGuard("subgroup search over more than 2^24 elements");
    std::optional<GroupElement> found;
    for_each_in_subgroup(
        inst, x, gens,
        [&](const Embedding& img, const GroupElement& g) {
            if (!found && max_deviation(img, y) <= tol_dev)
                found = g;
        },
        tol);
    return found;
}

/// Distinct values of ||x_v - x_u|| over all level-v nodes of the
/// discretization-only search tree, with multiplicities.
struct PrefixDistanceSet {
    std::vector<double> values;
    std::vector<std::uint64_t> multiplicity;
    std::uint64_t nodes = 0;
    double cluster_tol = 0.0;

    [[nodiscard]] std::size_t size() const { return values.size(); }
};

inline PrefixDistanceSet prefix_distance_set(const DgpInstance& inst, Vertex u, Vertex v,
                                             const ToleranceConfig& tol = {}, double rel_cluster = 1e-9)
{
    const int K = inst.K();
    if (v <= K || v > inst.n() || u < 1 || u >= v - K)
        throw InvalidArgument("prefix_distance_set needs v > K and 1 <= u < v-K");
    if (v - K > 24)
        throw SizeGuard("prefix_distance_set enumerates 2^(v-K) nodes; v-K must be <= 24");

    SearchGraph g(inst, /*use_pruning=*/false);
    SearchStats stats(inst.n(), K);
    std::vector<Point> x(static_cast<std::size_t>(inst.n()), Point::Zero(K));
    std::vector<int> signs(static_cast<std::size_t>(inst.n()), 1);
    for (Vertex w = 1; w <= K; ++w)
        x[static_cast<std::size_t>(w - 1)] = inst.initial(w);

    std::vector<double> dists;
    double scale = 1.0;
    branch_and_prune(g, K + 1, v, x, signs, tol, stats, [&](const std::vector<Point>& p, const std::vector<int>&) {
        dists.push_back((p[static_cast<std::size_t>(v - 1)] - p[static_cast<std::size_t>(u - 1)]).norm());
        for (Vertex w = 2; w <= v; ++w)
            scale = std::max(scale, (p[static_cast<std::size_t>(w - 1)] - p[0]).norm());
        return true;
    });

    PrefixDistanceSet h;
    h.nodes = dists.size();
    h.cluster_tol = rel_cluster * scale;
    std::sort(dists.begin(), dists.end());
    for (double d : dists) {
        if (!h.values.empty() && d - h.values.back() <= h.cluster_tol) {
            ++h.multiplicity.back();
            continue;
        }
        h.values.push_back(d);
        h.multiplicity.push_back(1);
    }
    return h;
}

} // namespace dmdgp
