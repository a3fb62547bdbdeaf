#pragma once

// Instance generators: the Subset-Sum reduction and random YES instances with
// a ground-truth embedding and a chosen pruning-edge pattern.

#include "dmdgp/errors.hpp"
#include "dmdgp/geometry.hpp"
#include "dmdgp/instance.hpp"

#include <cmath>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

namespace dmdgp {

struct SubsetSumInstance {
    std::vector<long long> a;

    void check() const
    {
        if (a.empty())
            throw InvalidArgument("subset-sum instance needs at least one integer");
        for (auto ai : a)
            if (ai < 1)
                throw InvalidArgument("subset-sum integers must be positive");
    }
};

/// Builds the K-dimensional instance whose embeddings encode the zero-sum
/// sign vectors of `ss`.
///
/// Vertices are 1..KN+1. Step i (from vertex i to i+1) has length a_l with
/// l = floor((i-1)/K) + 1; distances over spans 2..K make every K consecutive
/// steps mutually orthogonal; the single pruning edge {1, KN+1} has length 0,
/// forcing the walk to close. x' walks a_1 along e_1, ..., e_(K-1).
inline DgpInstance reduce_subset_sum(const SubsetSumInstance& ss, int K)
{
    ss.check();
    if (K < 2)
        throw InvalidArgument("reduction requires K >= 2");
    if (ss.a.size() < 2)
        throw InvalidArgument("reduction requires N >= 2 integers");
    const int N = static_cast<int>(ss.a.size());
    const int n = K * N + 1;
    DgpInstance inst(n, K);

    // step[i] = length of the segment from vertex i to i+1, i = 1..KN.
    std::vector<double> step(static_cast<std::size_t>(n), 0.0);
    for (int i = 1; i < n; ++i)
        step[static_cast<std::size_t>(i)] = static_cast<double>(ss.a[static_cast<std::size_t>((i - 1) / K)]);

    for (int i = 1; i < n; ++i) {
        double sumsq = 0.0;
        for (int j = 1; j <= K && i + j <= n; ++j) {
            const double s = step[static_cast<std::size_t>(i + j - 1)];
            sumsq += s * s;
            inst.set_distance(i, i + j, std::sqrt(sumsq));
        }
    }
    inst.set_distance(1, n, 0.0);

    Point p = Point::Zero(K);
    inst.set_initial(1, p);
    for (int j = 1; j < K; ++j) {
        p(j - 1) += static_cast<double>(ss.a[0]);
        inst.set_initial(j + 1, p);
    }
    return inst;
}

/// Which pruning edges a random instance receives.
struct PruningSpec {
    enum class Kind { none, density, prop1, prop2, prop3 };
    Kind kind = Kind::none;
    /// Edge probability for `density`.
    double p = 0.0;
    /// Threshold vertex for the prop* patterns.
    int v0 = 0;

    static PruningSpec none() { return {}; }
    static PruningSpec density(double p) { return {Kind::density, p, 0}; }
    static PruningSpec prop1(int v0) { return {Kind::prop1, 0.0, v0}; }
    static PruningSpec prop2(int v0) { return {Kind::prop2, 0.0, v0}; }
    static PruningSpec prop3(int v0) { return {Kind::prop3, 0.0, v0}; }

    /// Parses "none", "density:<p>", "prop1:<v0>", "prop2:<v0>", "prop3:<v0>".
    static PruningSpec parse(const std::string& s)
    {
        if (s == "none")
            return none();
        const auto colon = s.find(':');
        if (colon == std::string::npos)
            throw InvalidArgument("bad pruning spec '" + s + "'");
        const auto head = s.substr(0, colon);
        const auto arg = s.substr(colon + 1);
        try {
            if (head == "density")
                return density(std::stod(arg));
            if (head == "prop1")
                return prop1(std::stoi(arg));
            if (head == "prop2")
                return prop2(std::stoi(arg));
            if (head == "prop3")
                return prop3(std::stoi(arg));
        } catch (const std::logic_error&) {
        }
        throw InvalidArgument("bad pruning spec '" + s + "'");
    }
};

inline bool is_power_of_two(long v) { return v > 0 && (v & (v - 1)) == 0; }

struct GeneratedInstance {
    DgpInstance instance;
    Embedding truth;
};

namespace detail {

inline double distance_to_affine_hull(std::span<const Point> pts, const Point& p)
{
    if (pts.size() == 1)
        return (p - pts[0]).norm();
    const auto m = static_cast<Eigen::Index>(pts.size());
    Eigen::MatrixXd e(p.size(), m - 1);
    for (Eigen::Index i = 1; i < m; ++i)
        e.col(i - 1) = pts[static_cast<std::size_t>(i)] - pts[0];
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(e);
    const Eigen::MatrixXd q = Eigen::MatrixXd(qr.householderQ()).leftCols(m - 1);
    const Point r = p - pts[0];
    return (r - q * (q.transpose() * r)).norm();
}

// Generic random walk: step lengths uniform in [1,2], directions uniform on
// the sphere, rejected unless the new point stands at least a quarter step
// off the hull of its (up to K) predecessors.
inline std::vector<Point> random_walk(int n, int K, std::mt19937_64& rng)
{
    std::uniform_real_distribution<double> len(1.0, 2.0);
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::vector<Point> x;
    x.reserve(static_cast<std::size_t>(n));
    x.push_back(Point::Zero(K));
    while (static_cast<int>(x.size()) < n) {
        const auto have = x.size();
        const auto first = have > static_cast<std::size_t>(K) ? have - static_cast<std::size_t>(K) : 0;
        std::span<const Point> preds(x.data() + first, have - first);
        for (;;) {
            Point dir(K);
            for (int i = 0; i < K; ++i)
                dir(i) = gauss(rng);
            const double norm = dir.norm();
            if (norm < 1e-12)
                continue;
            const double L = len(rng);
            Point p = x.back() + (L / norm) * dir;
            if (distance_to_affine_hull(preds, p) >= 0.25 * L) {
                x.push_back(std::move(p));
                break;
            }
        }
    }
    return x;
}

} // namespace detail

/// Random YES instance together with the embedding it was derived from.
inline GeneratedInstance generate_random_yes(int n, int K, const PruningSpec& spec, std::uint64_t seed)
{
    check_dimension(K);
    if (n < K + 1)
        throw InvalidArgument("generate: need n >= K+1");
    const int v0 = spec.v0;
    switch (spec.kind) {
    case PruningSpec::Kind::none:
        break;
    case PruningSpec::Kind::density:
        if (!(spec.p >= 0.0 && spec.p <= 1.0))
            throw InvalidArgument("density must be in [0,1]");
        break;
    case PruningSpec::Kind::prop1:
    case PruningSpec::Kind::prop3:
        if (v0 <= K || v0 >= n)
            throw InvalidArgument("pruning spec infeasible: need K < v0 < n");
        if (spec.kind == PruningSpec::Kind::prop3) {
            bool any = false;
            for (int v = v0 + 1; v <= n; ++v)
                any = any || (!is_power_of_two(v) && v - K - 1 >= 1);
            if (!any)
                throw InvalidArgument("pruning spec infeasible: no vertex above v0 can carry a pruning edge");
        }
        break;
    case PruningSpec::Kind::prop2:
        if (v0 < K + 2 || n < v0 + 2)
            throw InvalidArgument("pruning spec infeasible: prop2 needs v0 >= K+2 and n >= v0+2");
        break;
    }

    std::mt19937_64 rng(seed);
    GeneratedInstance g{DgpInstance(n, K), {}};
    g.truth.points = detail::random_walk(n, K, rng);
    auto& inst = g.instance;
    const auto& x = g.truth.points;
    auto dist = [&](int u, int v) { return (x[static_cast<std::size_t>(u - 1)] - x[static_cast<std::size_t>(v - 1)]).norm(); };
    auto add = [&](int u, int v) { inst.set_distance(u, v, dist(u, v)); };

    for (int v = 1; v <= K; ++v)
        inst.set_initial(v, x[static_cast<std::size_t>(v - 1)]);
    for (int v = 2; v <= n; ++v)
        for (int u = std::max(1, v - K); u < v; ++u)
            add(u, v);

    switch (spec.kind) {
    case PruningSpec::Kind::none:
        break;
    case PruningSpec::Kind::density: {
        std::bernoulli_distribution coin(spec.p);
        for (int v = K + 2; v <= n; ++v)
            for (int u = 1; u < v - K; ++u)
                if (coin(rng))
                    add(u, v);
        break;
    }
    case PruningSpec::Kind::prop1:
        // One edge of span K+1 per vertex past v0: the width stays at 2^(v0-K).
        for (int v = v0 + 1; v <= n; ++v)
            add(v - K - 1, v);
        break;
    case PruningSpec::Kind::prop2: {
        // Blocks of [edge vertex][L free vertices]. The edge at the head of a
        // block spans K+1+L and removes the L branchings opened by the
        // previous run, so the free run can never push the width above
        // 2^(v0-K). The last vertex stays free; if it would head a block,
        // an extra edge at n-1 keeps the trailing run short.
        const int L = v0 - K - 1;
        int v = v0 + 1;
        while (v < n) {
            add(v - K - 1 - L, v);
            v += L + 1;
        }
        if (v == n)
            add(n - K - 1 - L, n - 1);
        break;
    }
    case PruningSpec::Kind::prop3:
        // Diagonal edges except at powers of two, where the width doubles.
        for (int v = v0 + 1; v <= n; ++v)
            if (!is_power_of_two(v) && v - K - 1 >= 1)
                add(v - K - 1, v);
        break;
    }

    g.truth.chirality.assign(static_cast<std::size_t>(n), 1);
    for (int v = K + 1; v <= n; ++v) {
        std::span<const Point> simplex(x.data() + (v - K - 1), static_cast<std::size_t>(K + 1));
        g.truth.chirality[static_cast<std::size_t>(v - 1)] = signed_simplex_orientation(simplex) >= 0 ? 1 : -1;
    }
    return g;
}

} // namespace dmdgp
