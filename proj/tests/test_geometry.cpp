#include "dmdgp/geometry.hpp"

#include "test_helpers.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

using namespace dmdgp;
using dmdgp::testing::random_point;
using dmdgp::testing::random_points;

namespace {

Point pt(std::initializer_list<double> c)
{
    Point p(static_cast<Eigen::Index>(c.size()));
    Eigen::Index i = 0;
    for (double v : c)
        p(i++) = v;
    return p;
}

Eigen::MatrixXd distance_matrix(const std::vector<Point>& pts)
{
    const auto m = static_cast<Eigen::Index>(pts.size());
    Eigen::MatrixXd d(m, m);
    for (Eigen::Index i = 0; i < m; ++i)
        for (Eigen::Index j = 0; j < m; ++j)
            d(i, j) = (pts[static_cast<std::size_t>(i)] - pts[static_cast<std::size_t>(j)]).norm();
    return d;
}

} // namespace

TEST(IntersectKSpheres, SymmetricTwoCircles)
{
    SphereSystem sys{{pt({0, 0}), pt({1, 0})}, {1, 1}};
    auto p = intersect_k_spheres(sys);
    ASSERT_EQ(p.size(), 2u);
    EXPECT_NEAR(p[0](0), 0.5, 1e-12);
    EXPECT_NEAR(p[0](1), std::sqrt(3.0) / 2, 1e-12);
    EXPECT_NEAR(p[1](0), 0.5, 1e-12);
    EXPECT_NEAR(p[1](1), -std::sqrt(3.0) / 2, 1e-12);
}

TEST(IntersectKSpheres, TangentCircles)
{
    SphereSystem sys{{pt({0, 0}), pt({2, 0})}, {1, 1}};
    auto p = intersect_k_spheres(sys);
    ASSERT_EQ(p.size(), 1u);
    EXPECT_NEAR(p[0](0), 1.0, 1e-12);
    EXPECT_NEAR(p[0](1), 0.0, 1e-12);
}

TEST(IntersectKSpheres, DisjointCirclesGiveNothing)
{
    SphereSystem sys{{pt({0, 0}), pt({3, 0})}, {1, 1}};
    EXPECT_TRUE(intersect_k_spheres(sys).empty());
}

TEST(IntersectKSpheres, DegenerateCentersThrow)
{
    SphereSystem sys{{pt({0, 0, 0}), pt({1, 0, 0}), pt({2, 0, 0})}, {1, 1, 1}};
    EXPECT_THROW(intersect_k_spheres(sys), DegenerateCenters);
}

TEST(IntersectKSpheres, OneDimension)
{
    SphereSystem sys{{pt({2.0})}, {0.5}};
    auto p = intersect_k_spheres(sys);
    ASSERT_EQ(p.size(), 2u);
    EXPECT_DOUBLE_EQ(p[0](0), 2.5);
    EXPECT_DOUBLE_EQ(p[1](0), 1.5);
}

TEST(IntersectKSpheres, RecoversGroundTruthK3)
{
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 50; ++trial) {
        auto chain = random_points(4, 3, rng, 2.0);
        SphereSystem sys;
        for (int i = 0; i < 3; ++i) {
            sys.centers.push_back(chain[static_cast<std::size_t>(i)]);
            sys.radii.push_back((chain[3] - chain[static_cast<std::size_t>(i)]).norm());
        }
        auto p = intersect_k_spheres(sys);
        ASSERT_EQ(p.size(), 2u);
        const double best = std::min((p[0] - chain[3]).norm(), (p[1] - chain[3]).norm());
        EXPECT_LT(best, 1e-9);
    }
}

TEST(IntersectKSpheres, ResubstitutionAndMirrorPairOnRandomSystems)
{
    std::mt19937_64 rng(3);
    std::uniform_int_distribution<int> dim(1, 6);
    const ToleranceConfig tol;
    int two_point_systems = 0;
    for (int trial = 0; trial < 1000; ++trial) {
        const int K = dim(rng);
        auto centers = random_points(K, K, rng, 3.0);
        const Point target = random_point(K, rng, 3.0);
        std::vector<double> radii;
        for (const auto& c : centers)
            radii.push_back((target - c).norm());
        std::vector<Point> p;
        try {
            p = intersect_k_spheres(centers, radii, tol);
        } catch (const DegenerateCenters&) {
            continue;
        }
        ASSERT_FALSE(p.empty());
        for (const auto& q : p)
            for (int i = 0; i < K; ++i)
                EXPECT_LE(std::abs((q - centers[static_cast<std::size_t>(i)]).norm() - radii[static_cast<std::size_t>(i)]),
                          tol.geometry);
        if (p.size() == 2) {
            ++two_point_systems;
            EXPECT_LT((reflect_through_hull(centers, p[0]) - p[1]).norm(), tol.geometry);
            // Positive side first.
            std::vector<Point> simplex(centers);
            simplex.push_back(p[0]);
            EXPECT_EQ(signed_simplex_orientation(simplex), 1);
            simplex.back() = p[1];
            EXPECT_EQ(signed_simplex_orientation(simplex), -1);
        }
    }
    EXPECT_GT(two_point_systems, 900);
}

TEST(ReflectThroughHull, AcrossXAxis)
{
    std::vector<Point> hull{pt({0, 0}), pt({1, 0})};
    auto r = reflect_through_hull(hull, pt({0.5, 1}));
    EXPECT_NEAR(r(0), 0.5, 1e-15);
    EXPECT_NEAR(r(1), -1.0, 1e-15);
}

TEST(ReflectThroughHull, PointOnHullIsFixed)
{
    std::vector<Point> hull{pt({0, 0, 0}), pt({1, 0, 0}), pt({0, 1, 0})};
    const Point on = pt({0.3, 0.7, 0});
    EXPECT_LT((reflect_through_hull(hull, on) - on).norm(), 1e-15);
}

TEST(ReflectThroughHull, InvolutionAndIsometry)
{
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 200; ++trial) {
        const int K = 3;
        auto hull = random_points(K, K, rng);
        const Point t = random_point(K, rng, 2.0);
        const Point r = reflect_through_hull(hull, t);
        EXPECT_LT((reflect_through_hull(hull, r) - t).norm(), 1e-10);
        for (const auto& h : hull)
            EXPECT_NEAR((r - h).norm(), (t - h).norm(), 1e-10);
    }
}

TEST(ReflectThroughHull, DegenerateHullThrows)
{
    std::vector<Point> hull{pt({0, 0}), pt({0, 0})};
    EXPECT_THROW(reflect_through_hull(hull, pt({1, 1})), DegenerateCenters);
}

TEST(SimplexVolume, UnitEquilateralTriangle)
{
    Eigen::MatrixXd d(3, 3);
    d << 0, 1, 1, 1, 0, 1, 1, 1, 0;
    EXPECT_NEAR(simplex_volume(d), std::sqrt(3.0) / 4, 1e-12);
}

TEST(SimplexVolume, CollinearIsZero)
{
    Eigen::MatrixXd d(3, 3);
    d << 0, 1, 2, 1, 0, 1, 2, 1, 0;
    EXPECT_EQ(simplex_volume(d), 0.0);
    // Sum rounded to double: still flat up to roundoff.
    d(0, 2) = d(2, 0) = 0.1 + 0.7;
    d(0, 1) = d(1, 0) = 0.1;
    d(1, 2) = d(2, 1) = 0.7;
    EXPECT_EQ(simplex_volume(d), 0.0);
}

TEST(SimplexVolume, TriangleInequalityViolationThrows)
{
    Eigen::MatrixXd d(3, 3);
    d << 0, 1, 3, 1, 0, 1, 3, 1, 0;
    EXPECT_THROW(simplex_volume(d), NegativeCayleyMenger);
}

TEST(SimplexVolume, SegmentLength)
{
    std::vector<Point> seg{pt({1, 2, 3}), pt({4, 6, 3})};
    EXPECT_NEAR(simplex_volume(seg), 5.0, 1e-12);
}

TEST(SimplexVolume, RejectsMalformedMatrices)
{
    Eigen::MatrixXd d(2, 2);
    d << 1, 1, 1, 0;
    EXPECT_THROW(simplex_volume(d), InvalidArgument);
    d << 0, 1, 2, 0;
    EXPECT_THROW(simplex_volume(d), InvalidArgument);
}

TEST(SimplexVolume, TetrahedronCoordinatesMatchDistances)
{
    std::mt19937_64 rng(17);
    for (int trial = 0; trial < 100; ++trial) {
        auto pts = random_points(4, 3, rng, 2.0);
        // Independent route: |triple product| / 6.
        const Point a = pts[1] - pts[0];
        const Point b = pts[2] - pts[0];
        const Point c = pts[3] - pts[0];
        const double triple = std::abs(a(0) * (b(1) * c(2) - b(2) * c(1)) - a(1) * (b(0) * c(2) - b(2) * c(0)) +
                                       a(2) * (b(0) * c(1) - b(1) * c(0))) /
                              6.0;
        const double gram = simplex_volume(pts);
        const double cm = simplex_volume(distance_matrix(pts));
        EXPECT_NEAR(gram, triple, 1e-9);
        EXPECT_NEAR(cm, gram, 1e-9 * std::max(1.0, gram));
    }
}

TEST(SimplexVolume, CoordinatesMatchDistancesAcrossDimensions)
{
    std::mt19937_64 rng(23);
    for (int K = 2; K <= 6; ++K)
        for (int m = 2; m <= K + 1; ++m)
            for (int trial = 0; trial < 20; ++trial) {
                auto pts = random_points(m, K, rng, 2.0);
                const double a = simplex_volume(pts);
                const double b = simplex_volume(distance_matrix(pts));
                EXPECT_NEAR(a, b, 1e-9 * std::max(1.0, a)) << "K=" << K << " m=" << m;
            }
}

TEST(Orientation, PlanarFrames)
{
    std::vector<Point> pos{pt({0, 0}), pt({1, 0}), pt({0, 1})};
    std::vector<Point> neg{pt({0, 0}), pt({1, 0}), pt({0, -1})};
    EXPECT_EQ(signed_simplex_orientation(pos), 1);
    EXPECT_EQ(signed_simplex_orientation(neg), -1);
}

TEST(Orientation, DegenerateIsZero)
{
    std::vector<Point> flat{pt({0, 0}), pt({1, 0}), pt({2, 0})};
    EXPECT_EQ(signed_simplex_orientation(flat), 0);
}

TEST(Orientation, SwapFlipsSign)
{
    std::mt19937_64 rng(29);
    for (int trial = 0; trial < 100; ++trial) {
        auto pts = random_points(4, 3, rng);
        const int s = signed_simplex_orientation(pts);
        ASSERT_NE(s, 0);
        std::swap(pts[2], pts[3]);
        EXPECT_EQ(signed_simplex_orientation(pts), -s);
    }
}

TEST(Dimension, RejectsOutOfRange)
{
    EXPECT_THROW(check_dimension(0), InvalidArgument);
    EXPECT_THROW(check_dimension(17), InvalidArgument);
    EXPECT_NO_THROW(check_dimension(16));
}

TEST(AffineHull, NormalIsUnitAndOriented)
{
    std::mt19937_64 rng(31);
    for (int K = 1; K <= 8; ++K) {
        auto pts = random_points(K, K, rng);
        const auto h = make_hull(pts);
        EXPECT_NEAR(h.normal.norm(), 1.0, 1e-12);
        for (const auto& p : pts)
            EXPECT_NEAR(h.signed_distance(p), 0.0, 1e-12);
        std::vector<Point> simplex(pts);
        simplex.push_back(h.base + h.normal);
        EXPECT_EQ(signed_simplex_orientation(simplex), 1);
    }
}
