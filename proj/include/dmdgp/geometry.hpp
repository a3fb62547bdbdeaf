#pragma once

// Dimension-generic Euclidean kernel: intersection of K spheres in R^K,
// reflection through the affine hull of K points, simplex volumes and
// orientations. Dimensions are runtime values in [1, kMaxDimension].

#include "dmdgp/errors.hpp"
#include "dmdgp/tolerance.hpp"

#include <Eigen/Dense>

#include <array>
#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace dmdgp {

inline constexpr int kMaxDimension = 16;

/// Point of R^K; storage is inline (no heap allocation) up to kMaxDimension.
using Point = Eigen::Matrix<double, Eigen::Dynamic, 1, 0, kMaxDimension, 1>;
using SmallMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, 0, kMaxDimension, kMaxDimension>;

inline void check_dimension(int K)
{
    if (K < 1 || K > kMaxDimension)
        throw InvalidArgument("dimension K=" + std::to_string(K) + " outside [1, " +
                              std::to_string(kMaxDimension) + "]");
}

inline double factorial(int k)
{
    double f = 1.0;
    for (int i = 2; i <= k; ++i)
        f *= i;
    return f;
}

/// Hyperplane a.x = a0 through K affinely independent points of R^K.
///
/// The normal is oriented so that a point p with a.p > a0 forms a positively
/// oriented simplex with the hull points, i.e. det[h1-h0, ..., h(K-1)-h0, p-h0] > 0.
struct AffineHull {
    Point base;
    Point normal;
    double offset = 0.0;

    [[nodiscard]] double signed_distance(const Point& p) const { return normal.dot(p) - offset; }

    [[nodiscard]] Point reflect(const Point& p) const { return p - 2.0 * signed_distance(p) * normal; }
};

namespace detail {

// Orthonormal frame of the hull of K points: the first K-1 columns of `q`
// span the edge directions, `r` is the (K-1)x(K-1) triangular factor, and
// `normal` is the oriented unit normal.
struct HullFrame {
    Point origin;
    SmallMatrix basis;
    SmallMatrix r;
    Point normal;
    double volume = 1.0;
};

inline HullFrame hull_frame(std::span<const Point> pts, double degeneracy)
{
    const auto K = static_cast<int>(pts.size());
    check_dimension(K);
    for (const auto& p : pts)
        if (p.size() != K)
            throw InvalidArgument("hull point dimension does not match the number of points");

    HullFrame f;
    f.origin = pts[0];
    if (K == 1) {
        f.basis.resize(1, 0);
        f.r.resize(0, 0);
        f.normal = Point::Ones(1);
        return f;
    }

    SmallMatrix edges(K, K - 1);
    for (int i = 1; i < K; ++i)
        edges.col(i - 1) = pts[i] - pts[0];

    Eigen::HouseholderQR<SmallMatrix> qr(edges);
    const SmallMatrix q = qr.householderQ();
    f.r = qr.matrixQR().topRows(K - 1).triangularView<Eigen::Upper>();
    f.basis = q.leftCols(K - 1);
    f.normal = q.col(K - 1);

    double det = 1.0;
    for (int i = 0; i < K - 1; ++i)
        det *= f.r(i, i);
    f.volume = std::abs(det) / factorial(K - 1);
    if (!(f.volume > degeneracy))
        throw DegenerateCenters("affinely dependent points: (K-1)-volume " + std::to_string(f.volume));

    SmallMatrix frame(K, K);
    frame.leftCols(K - 1) = edges;
    frame.col(K - 1) = f.normal;
    if (frame.partialPivLu().determinant() < 0)
        f.normal = -f.normal;
    return f;
}

} // namespace detail

inline AffineHull make_hull(std::span<const Point> pts, double degeneracy = ToleranceConfig{}.degeneracy)
{
    auto f = detail::hull_frame(pts, degeneracy);
    AffineHull h;
    h.offset = f.normal.dot(f.origin);
    h.base = std::move(f.origin);
    h.normal = std::move(f.normal);
    return h;
}

/// K spheres in R^K.
struct SphereSystem {
    std::vector<Point> centers;
    std::vector<double> radii;
};

namespace detail {

// Writes the 0, 1 or 2 intersection points into `out` and returns how many.
inline int intersect_k_spheres_into(std::span<const Point> centers, std::span<const double> radii,
                                    const ToleranceConfig& tol, std::array<Point, 2>& out)
{
    if (centers.size() != radii.size())
        throw InvalidArgument("sphere system needs one radius per center");
    const auto f = hull_frame(centers, tol.degeneracy);
    const auto K = static_cast<int>(centers.size());

    // Differences of sphere equations pin the component inside the hull;
    // the first sphere fixes the height along the normal.
    const double r0sq = radii[0] * radii[0];
    Point z = Point::Zero(K - 1);
    if (K > 1) {
        Point beta(K - 1);
        for (int i = 1; i < K; ++i) {
            const double bsq = (centers[i] - centers[0]).squaredNorm();
            beta(i - 1) = 0.5 * (r0sq - radii[i] * radii[i] + bsq);
        }
        z = f.r.transpose().triangularView<Eigen::Lower>().solve(beta);
    }
    const double disc = r0sq - z.squaredNorm();
    if (disc < -tol.disc)
        return 0;
    const Point foot = f.origin + f.basis * z;
    if (disc <= tol.disc) {
        out[0] = foot;
        return 1;
    }
    const double h = std::sqrt(disc);
    out[0] = foot + h * f.normal;
    out[1] = foot - h * f.normal;
    return 2;
}

} // namespace detail

/// Intersection of K spheres with affinely independent centers.
///
/// Returns 0, 1 (tangency) or 2 points. With two points, the one on the
/// positive side of the centers' hull comes first; the pair are mirror images
/// through that hull.
inline std::vector<Point> intersect_k_spheres(std::span<const Point> centers, std::span<const double> radii,
                                              const ToleranceConfig& tol = {})
{
    std::array<Point, 2> pts;
    const int count = detail::intersect_k_spheres_into(centers, radii, tol, pts);
    return {pts.begin(), pts.begin() + count};
}

inline std::vector<Point> intersect_k_spheres(const SphereSystem& sys, const ToleranceConfig& tol = {})
{
    return intersect_k_spheres(std::span<const Point>(sys.centers), std::span<const double>(sys.radii), tol);
}

/// Mirror image of `target` through the hyperplane spanned by K hull points.
inline Point reflect_through_hull(std::span<const Point> hull, const Point& target,
                                  double degeneracy = ToleranceConfig{}.degeneracy)
{
    return make_hull(hull, degeneracy).reflect(target);
}

/// (m-1)-volume of the simplex on m points (Gram determinant).
inline double simplex_volume(std::span<const Point> pts)
{
    const auto m = static_cast<int>(pts.size());
    if (m < 2)
        throw InvalidArgument("simplex_volume needs at least 2 points");
    const auto dim = pts[0].size();
    if (m > dim + 1)
        throw InvalidArgument("simplex_volume: more than K+1 points");
    const int k = m - 1;
    Eigen::MatrixXd w(k, dim);
    for (int i = 1; i < m; ++i)
        w.row(i - 1) = (pts[i] - pts[0]).transpose();
    const double gram = (w * w.transpose()).determinant();
    return std::sqrt(std::max(gram, 0.0)) / factorial(k);
}

/// Roundoff floor for the signed Cayley-Menger determinant with distances
/// in units of the largest one. Distances rounded to doubles leave a noise of order
/// sqrt(eps) in the volume itself, so anything below this counts as flat.
inline constexpr double kCayleyMengerFloor = 1e-13;

/// (m-1)-volume of a simplex given by its m x m distance matrix (Cayley-Menger).
///
/// Throws NegativeCayleyMenger when the distances cannot be realized in R^(m-1).
inline double simplex_volume(const Eigen::MatrixXd& dist)
{
    const auto m = static_cast<int>(dist.rows());
    if (m < 2 || dist.cols() != m)
        throw InvalidArgument("distance matrix must be square with at least 2 points");
    double scale = 0.0;
    for (int i = 0; i < m; ++i) {
        if (dist(i, i) != 0.0)
            throw InvalidArgument("distance matrix must have a zero diagonal");
        for (int j = 0; j < m; ++j) {
            if (std::abs(dist(i, j) - dist(j, i)) > 1e-12 * std::max(1.0, std::abs(dist(i, j))))
                throw InvalidArgument("distance matrix must be symmetric");
            scale = std::max(scale, std::abs(dist(i, j)));
        }
    }
    const int k = m - 1;
    if (scale == 0.0)
        return 0.0;

    // Normalize by the largest distance so the determinant stays O(1).
    Eigen::MatrixXd cm = Eigen::MatrixXd::Ones(m + 1, m + 1);
    cm(0, 0) = 0.0;
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) {
            const double d = dist(i, j) / scale;
            cm(i + 1, j + 1) = d * d;
        }
    const double det = ((k % 2 == 1) ? 1.0 : -1.0) * cm.partialPivLu().determinant();
    if (det < -kCayleyMengerFloor)
        throw NegativeCayleyMenger("signed Cayley-Menger determinant " + std::to_string(det) +
                                   " (normalized) is negative; distances not realizable");
    if (det <= kCayleyMengerFloor)
        return 0.0;
    const double vol2 = det / (std::pow(2.0, k) * factorial(k) * factorial(k));
    return std::sqrt(vol2) * std::pow(scale, k);
}

/// Sign of det[p1-p0, ..., pK-p0] for K+1 points of R^K; 0 when |det| <= degeneracy.
inline int signed_simplex_orientation(std::span<const Point> pts, double degeneracy = ToleranceConfig{}.degeneracy)
{
    const auto K = static_cast<int>(pts.size()) - 1;
    check_dimension(K);
    SmallMatrix m(K, K);
    for (int i = 1; i <= K; ++i) {
        if (pts[i].size() != K)
            throw InvalidArgument("orientation needs K+1 points of dimension K");
        m.row(i - 1) = (pts[i] - pts[0]).transpose();
    }
    const double det = m.partialPivLu().determinant();
    if (std::abs(det) <= degeneracy)
        return 0;
    return det > 0 ? 1 : -1;
}

} // namespace dmdgp
