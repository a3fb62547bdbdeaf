#pragma once

// Brute-force references, kept independent of the search code so tests can
// check the solver against them.

#include "dmdgp/bp_solver.hpp"
#include "dmdgp/errors.hpp"
#include "dmdgp/generators.hpp"
#include "dmdgp/geometry.hpp"
#include "dmdgp/instance.hpp"

#include <cstdint>
#include <span>
#include <vector>

namespace dmdgp {

using SignVector = std::vector<int>;

/// All s in {-1,+1}^N with sum s_l a_l = 0 (s_1 = +1 only, if fix_first).
inline std::vector<SignVector> subset_sum_solutions(const SubsetSumInstance& ss, bool fix_first)
{
    ss.check();
    const auto N = ss.a.size();
    if (N > 24)
        throw SizeGuard("subset_sum_solutions enumerates 2^N sign vectors; N must be <= 24");
    std::vector<SignVector> out;
    for (std::uint32_t mask = 0; mask < (std::uint32_t{1} << N); ++mask) {
        // Bit i set means s_(i+1) = -1; mask order lists + before -.
        SignVector s(N);
        long long sum = 0;
        for (std::size_t i = 0; i < N; ++i) {
            s[i] = (mask >> (N - 1 - i)) & 1u ? -1 : 1;
            sum += s[i] * ss.a[i];
        }
        if (sum == 0 && (!fix_first || s[0] == 1))
            out.push_back(std::move(s));
    }
    return out;
}

/// Number of embeddings of reduce_subset_sum(a, K) extending its x'.
///
/// Steps cycle through the coordinate axes and each axis must sum to zero
/// independently. x' fixes the first step on axes 1..K-1 to +a_1; the first
/// step on axis K is still free. Hence m^(K-1) * 2m, with m the number of
/// zero-sum sign vectors having s_1 = +1.
inline std::uint64_t reduction_count_oracle(const SubsetSumInstance& ss, int K)
{
    ss.check();
    if (ss.a.size() > 14)
        throw SizeGuard("reduction_count_oracle: N must be <= 14");
    if (K < 2)
        throw InvalidArgument("reduction requires K >= 2");
    const std::uint64_t pinned = subset_sum_solutions(ss, true).size();
    const std::uint64_t free = subset_sum_solutions(ss, false).size();
    std::uint64_t count = free;
    for (int j = 1; j < K; ++j)
        count *= pinned;
    return count;
}

/// Tries every chirality vector: builds the embedding by sphere intersection
/// taking the branch each sign asks for, and keeps the feasible ones.
/// Output is sorted by chirality (+ before -).
inline std::vector<Embedding> brute_force_embeddings(const DgpInstance& inst, const ToleranceConfig& tol = {})
{
    const int n = inst.n();
    const int K = inst.K();
    if (n - K > 20)
        throw SizeGuard("brute_force_embeddings enumerates 2^(n-K) sign vectors; n-K must be <= 20");
    const int levels = n - K;

    std::vector<Embedding> out;
    for (std::uint32_t mask = 0; mask < (std::uint32_t{1} << levels); ++mask) {
        Embedding x;
        x.points.reserve(static_cast<std::size_t>(n));
        x.chirality.assign(static_cast<std::size_t>(n), 1);
        for (Vertex v = 1; v <= K; ++v)
            x.points.push_back(inst.initial(v));
        bool built = true;
        for (Vertex v = K + 1; v <= n && built; ++v) {
            const bool negative = (mask >> (levels - 1 - (v - K - 1))) & 1u;
            std::vector<double> radii;
            for (Vertex u = v - K; u < v; ++u) {
                auto d = inst.distance(u, v);
                if (!d)
                    throw InvalidArgument("missing discretization edge");
                radii.push_back(*d);
            }
            auto pts = intersect_k_spheres(std::span<const Point>(x.points.data() + (v - K - 1), static_cast<std::size_t>(K)),
                                           radii, tol);
            // A tangent point is only reachable through the + branch.
            if (pts.empty() || (negative && pts.size() < 2)) {
                built = false;
                break;
            }
            x.points.push_back(negative ? pts[1] : pts[0]);
            x.chirality[static_cast<std::size_t>(v - 1)] = negative ? -1 : 1;
        }
        if (built && verify_embedding(inst, x, tol).feasible())
            out.push_back(std::move(x));
    }
    return out;
}

} // namespace dmdgp
