#pragma once

namespace dmdgp {

/// Numerical thresholds shared by the geometry kernel and the solver.
///
/// The underlying problem is posed over exact reals with "probability 1"
/// genericity; these tolerances are what turns that into something that
/// works in doubles. All of them are absolute except `prune_rel`.
struct ToleranceConfig {
    /// Residual allowed when re-substituting a point into a sphere equation.
    double geometry = 1e-8;
    /// Simplex volumes and orientation determinants at or below this are zero.
    double degeneracy = 1e-10;
    /// Band around a zero discriminant classified as tangency.
    double disc = 1e-10;
    /// Pruning test: keep a candidate iff |dist - d| <= prune_abs + prune_rel * d.
    double prune_abs = 1e-6;
    double prune_rel = 1e-6;

    [[nodiscard]] double prune_threshold(double d) const { return prune_abs + prune_rel * d; }

    [[nodiscard]] bool valid() const
    {
        return geometry >= 0 && degeneracy >= 0 && disc >= 0 && prune_abs >= 0 && prune_rel >= 0;
    }
};

} // namespace dmdgp
