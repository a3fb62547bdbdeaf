#pragma once

// Search-tree width from the pruning edges alone.
//
// On a generic YES instance the valid nodes at level v are the images of the
// true prefix under the subgroup generated by the g_w (K < w <= v) that no
// pruning edge {u, v'} with v' <= v has ruled out, i.e. w not in
// [u+K+1, v']. The width at level v is therefore 2^|T_v|.

#include "dmdgp/bp_solver.hpp"
#include "dmdgp/generators.hpp"
#include "dmdgp/instance.hpp"
#include "dmdgp/symmetry.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace dmdgp {

struct WidthProfile {
    int n = 0;
    int K = 0;
    /// exponent[v] = log2 of the predicted node count at level v (index = level; used for K..n).
    std::vector<int> exponent;
    /// Measured node counts from a solver run, when attached.
    std::vector<std::optional<std::uint64_t>> measured;

    [[nodiscard]] std::optional<std::uint64_t> predicted(Vertex v) const
    {
        const int e = exponent[static_cast<std::size_t>(v)];
        if (e >= 64)
            return std::nullopt;
        return std::uint64_t{1} << e;
    }

    [[nodiscard]] int max_exponent_after(Vertex level) const
    {
        int m = 0;
        for (Vertex v = level + 1; v <= n; ++v)
            m = std::max(m, exponent[static_cast<std::size_t>(v)]);
        return m;
    }

    void attach(const SearchStats& s)
    {
        measured.assign(static_cast<std::size_t>(n) + 1, std::nullopt);
        for (Vertex v = K; v <= n; ++v)
            measured[static_cast<std::size_t>(v)] = s.nodes[static_cast<std::size_t>(v)];
    }
};

/// CSV `level,predicted,measured` for levels K+1..n. Counts of 2^64 or more
/// print as `2^e`; a missing measurement prints empty.
inline void write_profile_csv(std::ostream& out, const WidthProfile& p)
{
    out << "level,predicted,measured\n";
    for (Vertex v = p.K + 1; v <= p.n; ++v) {
        out << v << ',';
        if (auto c = p.predicted(v))
            out << *c;
        else
            out << "2^" << p.exponent[static_cast<std::size_t>(v)];
        out << ',';
        if (static_cast<std::size_t>(v) < p.measured.size() && p.measured[static_cast<std::size_t>(v)])
            out << *p.measured[static_cast<std::size_t>(v)];
        out << '\n';
    }
}

inline WidthProfile predict_profile(const DgpInstance& inst, PruningWindow window = PruningWindow::corrected)
{
    const int n = inst.n();
    const int K = inst.K();
    const int shift = window == PruningWindow::corrected ? 1 : 0;

    std::vector<Edge> pruning;
    for (const auto& [e, d] : inst.edges())
        if (inst.is_pruning(e))
            pruning.push_back(e);
    std::sort(pruning.begin(), pruning.end(), [](const Edge& a, const Edge& b) { return a.v < b.v; });

    // killed_at[w]: first level at which some pruning edge rules g_w out.
    // next[] skips already-killed w so each w is visited once.
    constexpr int alive = std::numeric_limits<int>::max();
    std::vector<int> killed_at(static_cast<std::size_t>(n) + 2, alive);
    std::vector<int> next(static_cast<std::size_t>(n) + 2);
    std::iota(next.begin(), next.end(), 0);
    auto find = [&](int w) {
        int root = w;
        while (next[static_cast<std::size_t>(root)] != root)
            root = next[static_cast<std::size_t>(root)];
        while (next[static_cast<std::size_t>(w)] != root) {
            const int up = next[static_cast<std::size_t>(w)];
            next[static_cast<std::size_t>(w)] = root;
            w = up;
        }
        return root;
    };
    for (const auto& e : pruning) {
        for (int w = find(e.u + K + shift); w <= e.v; w = find(w)) {
            killed_at[static_cast<std::size_t>(w)] = e.v;
            next[static_cast<std::size_t>(w)] = w + 1;
        }
    }

    std::vector<int> deaths(static_cast<std::size_t>(n) + 2, 0);
    for (int w = K + 1; w <= n; ++w)
        if (killed_at[static_cast<std::size_t>(w)] != alive)
            ++deaths[static_cast<std::size_t>(killed_at[static_cast<std::size_t>(w)])];

    WidthProfile p;
    p.n = n;
    p.K = K;
    p.exponent.assign(static_cast<std::size_t>(n) + 1, 0);
    int count = 0;
    for (Vertex v = K + 1; v <= n; ++v) {
        count += 1 - deaths[static_cast<std::size_t>(v)];
        p.exponent[static_cast<std::size_t>(v)] = count;
    }
    return p;
}

enum class PolyCase { Prop1, Prop2, Prop3, General };

struct CaseClassification {
    PolyCase kind = PolyCase::General;
    int v0 = 0;
    int K = 0;
    int n = 0;

    [[nodiscard]] std::string name() const
    {
        switch (kind) {
        case PolyCase::Prop1: return "Prop1";
        case PolyCase::Prop2: return "Prop2";
        case PolyCase::Prop3: return "Prop3";
        case PolyCase::General: break;
        }
        return "General";
    }

    /// 2^(v0-K) for Prop1/Prop2, 2^v0 * n for Prop3, empty otherwise.
    [[nodiscard]] std::string bound() const
    {
        switch (kind) {
        case PolyCase::Prop1:
        case PolyCase::Prop2: return "2^" + std::to_string(v0 - K);
        case PolyCase::Prop3: return "2^" + std::to_string(v0) + "*n";
        case PolyCase::General: break;
        }
        return "";
    }

    /// Width bound as log2, for Prop1..Prop3.
    [[nodiscard]] double bound_log2() const
    {
        switch (kind) {
        case PolyCase::Prop1:
        case PolyCase::Prop2: return v0 - K;
        case PolyCase::Prop3: return v0 + std::log2(static_cast<double>(n));
        case PolyCase::General: break;
        }
        return std::numeric_limits<double>::infinity();
    }

    [[nodiscard]] std::string runtime_class() const
    {
        switch (kind) {
        case PolyCase::Prop1:
        case PolyCase::Prop2: return "O(n)";
        case PolyCase::Prop3: return "O(n^2)";
        case PolyCase::General: break;
        }
        return "exponential-worst-case";
    }

    [[nodiscard]] std::string summary() const
    {
        if (kind == PolyCase::General)
            return "General runtime=" + runtime_class();
        return name() + " v0=" + std::to_string(v0) + " bound=" + bound() + " runtime=" + runtime_class();
    }
};

/// Tests the three polynomial cases in priority order Prop1 > Prop2 > Prop3,
/// each with its smallest v0 > K. A case needs at least one vertex above v0
/// carrying a pruning edge, so pruning-free instances are General.
///
/// Only pruning edges {u, v} with v as the later endpoint count as "borne" by v.
/// Prop2 runs are maximal runs of vertices > v0 bearing no edge; the vertex
/// preceding a run is the largest edge-bearing vertex below its start. The
/// run condition alone does not bound the width (a single edge {1,5} with
/// K=2, n=8 passes it for v0=4 yet reaches width 16), so Prop2 also requires
/// the predicted width to stay within 2^(v0-K) from the smallest such v0 on.
inline CaseClassification classify(const DgpInstance& inst)
{
    const int n = inst.n();
    const int K = inst.K();
    std::vector<int> count(static_cast<std::size_t>(n) + 1, 0);
    std::vector<int> max_span(static_cast<std::size_t>(n) + 1, 0);
    for (const auto& [e, d] : inst.edges())
        if (inst.is_pruning(e)) {
            ++count[static_cast<std::size_t>(e.v)];
            max_span[static_cast<std::size_t>(e.v)] = std::max(max_span[static_cast<std::size_t>(e.v)], e.span());
        }
    auto bears = [&](Vertex v) { return count[static_cast<std::size_t>(v)] > 0; };
    // last_bearing[v]: largest edge-bearing vertex <= v, or 0.
    std::vector<Vertex> last_bearing(static_cast<std::size_t>(n) + 1, 0);
    for (Vertex v = 1; v <= n; ++v)
        last_bearing[static_cast<std::size_t>(v)] = bears(v) ? v : last_bearing[static_cast<std::size_t>(v - 1)];

    // Smallest v0 for Prop1 and Prop3; both conditions are monotone in v0.
    int prop1_v0 = K + 1;
    int prop3_v0 = K + 1;
    for (Vertex v = K + 1; v <= n; ++v) {
        if (count[static_cast<std::size_t>(v)] != 1)
            prop1_v0 = std::max(prop1_v0, v);
        if (!is_power_of_two(v) && !bears(v))
            prop3_v0 = std::max(prop3_v0, v);
    }
    // Suffix maximum of the predicted exponent.
    const auto profile = predict_profile(inst);
    std::vector<int> max_exp_from(static_cast<std::size_t>(n) + 2, 0);
    for (Vertex v = n; v > K; --v)
        max_exp_from[static_cast<std::size_t>(v)] =
            std::max(max_exp_from[static_cast<std::size_t>(v) + 1], profile.exponent[static_cast<std::size_t>(v)]);

    auto runs_preceded = [&](int v0) {
        Vertex v = v0 + 1;
        while (v <= n) {
            if (bears(v)) {
                ++v;
                continue;
            }
            const Vertex start = v;
            while (v <= n && !bears(v))
                ++v;
            const Vertex vs = last_bearing[static_cast<std::size_t>(start - 1)];
            if (vs == 0 || max_span[static_cast<std::size_t>(vs)] < v - start)
                return false;
        }
        return true;
    };
    auto nontrivial = [&](int v0) { return v0 < n && last_bearing[static_cast<std::size_t>(n)] > v0; };

    CaseClassification c;
    c.K = K;
    c.n = n;
    if (nontrivial(prop1_v0)) {
        c.kind = PolyCase::Prop1;
        c.v0 = prop1_v0;
        return c;
    }
    for (int v0 = K + 1; nontrivial(v0); ++v0) {
        if (!runs_preceded(v0))
            continue;
        if (max_exp_from[static_cast<std::size_t>(v0)] <= v0 - K) {
            c.kind = PolyCase::Prop2;
            c.v0 = v0;
            return c;
        }
        break;
    }
    if (nontrivial(prop3_v0)) {
        c.kind = PolyCase::Prop3;
        c.v0 = prop3_v0;
    }
    return c;
}

struct CrosscheckReport {
    WidthProfile profile;
    std::vector<Vertex> mismatched_levels;
    std::uint64_t solutions = 0;
    /// Measured width collapsed to zero while a positive width was predicted:
    /// the instance is a NO instance and the prediction does not apply.
    bool no_instance_divergence = false;

    [[nodiscard]] bool all_match() const { return mismatched_levels.empty(); }
};

/// Runs the solver in count mode and compares its per-level node counts with the prediction.
inline CrosscheckReport crosscheck(const DgpInstance& inst, const ToleranceConfig& tol = {},
                                   PruningWindow window = PruningWindow::corrected, unsigned threads = 1)
{
    CrosscheckReport r;
    r.profile = predict_profile(inst, window);
    SolveOptions opt;
    opt.mode = SolveMode::count;
    opt.tol = tol;
    opt.threads = threads;
    const auto res = solve(inst, opt);
    r.solutions = res.count;
    r.profile.attach(res.stats);
    for (Vertex v = inst.K() + 1; v <= inst.n(); ++v) {
        const auto pred = r.profile.predicted(v);
        const auto meas = res.stats.nodes[static_cast<std::size_t>(v)];
        if (!pred || *pred != meas)
            r.mismatched_levels.push_back(v);
    }
    r.no_instance_divergence = res.count == 0 && !r.mismatched_levels.empty();
    return r;
}

} // namespace dmdgp
