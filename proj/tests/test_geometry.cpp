#include "oracles.hpp"

#include <gtest/gtest.h>

using namespace smcr;

namespace
{
    RobotModel arm (std::vector<double> lengths, double width = 0.1, double tool = 0.0)
    {
        return RobotModel (PlanarArm{{0.0, 0.0}, std::move (lengths), width, tool});
    }

    const Vec2 &discCenter (const WorldShape &s) { return std::get<WorldDisc> (s).center; }
} // namespace

TEST (Geometry, WrapAngleIsCanonical)
{
    EXPECT_DOUBLE_EQ (wrapAngle (kPi), kPi);
    EXPECT_DOUBLE_EQ (wrapAngle (-kPi), kPi);
    EXPECT_NEAR (wrapAngle (3.0 * kPi / 2.0), -kPi / 2.0, 1e-15);
    for (double a : {-7.0, -3.2, 0.0, 1.0, 3.14, 9.5})
    {
        const double w = wrapAngle (a);
        EXPECT_GT (w, -kPi);
        EXPECT_LE (w, kPi);
        EXPECT_EQ (wrapAngle (w), w);
    }
}

TEST (Geometry, ForwardKinematicsOneLinkZeroAngle)
{
    const Kinematics k = forwardKinematics (arm ({1.0}), Configuration{0.0});
    EXPECT_DOUBLE_EQ (k.endEffector.x, 1.0);
    EXPECT_DOUBLE_EQ (k.endEffector.y, 0.0);
    EXPECT_DOUBLE_EQ (k.endEffector.theta, 0.0);
}

TEST (Geometry, ForwardKinematicsTwoLink)
{
    const Configuration q{kPi / 2.0, -kPi / 2.0};
    const Kinematics k = forwardKinematics (arm ({1.0, 1.0}), q);
    // Hand chain: first link points up to (0,1), second turns back to +x.
    EXPECT_NEAR (k.endEffector.x, 1.0, 1e-12);
    EXPECT_NEAR (k.endEffector.y, 1.0, 1e-12);
    // Numeric chain of rotations.
    const double x = std::cos (q[0]) + std::cos (q[0] + q[1]);
    const double y = std::sin (q[0]) + std::sin (q[0] + q[1]);
    EXPECT_NEAR (k.endEffector.x, x, 1e-12);
    EXPECT_NEAR (k.endEffector.y, y, 1e-12);
    EXPECT_EQ (k.bodies.size (), 2U);
}

TEST (Geometry, ForwardKinematicsDiscRobot)
{
    const Kinematics k = forwardKinematics (RobotModel (DiscRobot{0.5}), Configuration{3.0, 4.0});
    ASSERT_EQ (k.bodies.size (), 1U);
    EXPECT_EQ (discCenter (k.bodies[0].shape).x, 3.0);
    EXPECT_EQ (discCenter (k.bodies[0].shape).y, 4.0);
}

TEST (Geometry, ForwardKinematicsRejectsDimensionMismatch)
{
    EXPECT_THROW ((void) forwardKinematics (arm ({1.0, 1.0}), Configuration{0.0}), InvalidInput);
    EXPECT_THROW ((void) cDistance (RobotModel (DiscRobot{1.0}), Configuration{0.0}, Configuration{0.0, 0.0}), InvalidInput);
}

TEST (Geometry, ToolSegmentIsGripperBody)
{
    const Kinematics k = forwardKinematics (arm ({2.0, 2.0}, 0.2, 0.5), Configuration{0.0, 0.0});
    ASSERT_EQ (k.bodies.size (), 3U);
    EXPECT_FALSE (k.bodies[0].gripper);
    EXPECT_FALSE (k.bodies[1].gripper);
    EXPECT_TRUE (k.bodies[2].gripper);
}

TEST (Geometry, DiscDiscCollision)
{
    const RobotModel r (DiscRobot{1.0});
    const Configuration q{0.0, 0.0};
    EXPECT_FALSE (collidesAt (r, q, PlacedShape{Shape::disc (1.0), Pose2 (3.0, 0.0, 0.0)}));
    EXPECT_TRUE (collidesAt (r, q, PlacedShape{Shape::disc (1.0), Pose2 (1.5, 0.0, 0.0)}));
    // Touching is not a collision.
    EXPECT_FALSE (collidesAt (r, q, PlacedShape{Shape::disc (1.0), Pose2 (2.0, 0.0, 0.0)}));
}

TEST (Geometry, SquaresOverlapAgreesWithOracle)
{
    const WorldShape a = place (Shape::box (1.0, 1.0), Pose2 (0.0, 0.0, 0.0));
    const WorldShape b = place (Shape::box (1.0, 1.0), Pose2 (0.5, 0.5, 0.0));
    EXPECT_TRUE (intersects (a, b));
    EXPECT_TRUE (oracle::polygonsOverlap (std::get<WorldPolygon> (a).vertices, std::get<WorldPolygon> (b).vertices));
}

TEST (Geometry, RandomPolygonPairsAgreeWithOracle)
{
    Rng rng (42);
    int agree = 0;
    for (int i = 0; i < 2000; ++i)
    {
        const Shape s1 = Shape::box (0.2 + uniform01 (rng), 0.2 + uniform01 (rng));
        const Shape s2 = Shape::box (0.2 + uniform01 (rng), 0.2 + uniform01 (rng));
        const WorldShape a = place (s1, Pose2 (uniformIn (rng, -1, 1), uniformIn (rng, -1, 1), uniformIn (rng, -kPi, kPi)));
        const WorldShape b = place (s2, Pose2 (uniformIn (rng, -1, 1), uniformIn (rng, -1, 1), uniformIn (rng, -kPi, kPi)));
        const bool expected = oracle::polygonsOverlap (std::get<WorldPolygon> (a).vertices, std::get<WorldPolygon> (b).vertices);
        agree += intersects (a, b) == expected;
    }
    EXPECT_EQ (agree, 2000);
}

TEST (Geometry, IntersectionIsSymmetric)
{
    Rng rng (5);
    for (int i = 0; i < 500; ++i)
    {
        auto randomShape = [&] {
            return uniform01 (rng) < 0.5 ? Shape::disc (0.1 + uniform01 (rng)) : Shape::box (0.2 + uniform01 (rng), 0.2 + uniform01 (rng));
        };
        const Shape s1 = randomShape ();
        const Shape s2 = randomShape ();
        const Pose2 p1 (uniformIn (rng, -1, 1), uniformIn (rng, -1, 1), uniformIn (rng, -kPi, kPi));
        const Pose2 p2 (uniformIn (rng, -1, 1), uniformIn (rng, -1, 1), uniformIn (rng, -kPi, kPi));
        EXPECT_EQ (intersects (place (s1, p1), place (s2, p2)), intersects (place (s2, p2), place (s1, p1)));
        if (s1.isDisc ())
        {
            // Disc robot at p1 against s2, versus s1 as the obstacle.
            const RobotModel robot (DiscRobot{std::get<Disc> (s1.variant ()).radius});
            EXPECT_EQ (collidesAt (robot, Configuration{p1.x, p1.y}, PlacedShape{s2, p2}), intersects (place (s2, p2), place (s1, p1)));
        }
    }
}

TEST (Geometry, DegenerateSegmentIsFree)
{
    const RobotModel r (DiscRobot{0.1});
    EXPECT_FALSE (segmentCollides (r, Configuration{0.0, 0.0}, Configuration{0.0, 0.0}, PlacedShape{Shape::disc (0.5), Pose2 (2.0, 0.0, 0.0)},
                                   kDefaultResolution));
}

TEST (Geometry, SweptDiscMatchesCapsuleOracle)
{
    const RobotModel r (DiscRobot{0.1});
    const Configuration a{-2.0, 0.0}, b{2.0, 0.0};
    const PlacedShape near{Shape::disc (0.5), Pose2 (0.0, 0.0, 0.0)};
    const PlacedShape far{Shape::disc (0.5), Pose2 (0.0, 5.0, 0.0)};
    EXPECT_TRUE (segmentCollides (r, a, b, near, kDefaultResolution));
    EXPECT_TRUE (oracle::capsuleHitsDisc ({-2, 0}, {2, 0}, 0.1, {0, 0}, 0.5));
    EXPECT_FALSE (segmentCollides (r, a, b, far, kDefaultResolution));
    EXPECT_FALSE (oracle::capsuleHitsDisc ({-2, 0}, {2, 0}, 0.1, {0, 5}, 0.5));
}

TEST (Geometry, RandomSweepsMatchCapsuleOracleAwayFromGrazing)
{
    const RobotModel r (DiscRobot{0.1});
    Rng rng (11);
    int checked = 0;
    for (int i = 0; i < 1000; ++i)
    {
        const Vec2 a{uniformIn (rng, -2, 2), uniformIn (rng, -2, 2)};
        const Vec2 b{uniformIn (rng, -2, 2), uniformIn (rng, -2, 2)};
        const Vec2 c{uniformIn (rng, -2, 2), uniformIn (rng, -2, 2)};
        const double rc = 0.1 + 0.4 * uniform01 (rng);
        // Sample scallops are shallower than 0.01 at resolution 0.05 for r = 0.1.
        const bool inner = oracle::capsuleHitsDisc (a, b, 0.1 - 0.01, c, rc);
        const bool outer = oracle::capsuleHitsDisc (a, b, 0.1 + 0.01, c, rc);
        if (inner != outer)
            continue;
        ++checked;
        EXPECT_EQ (segmentCollides (r, Configuration{a.x, a.y}, Configuration{b.x, b.y}, PlacedShape{Shape::disc (rc), Pose2 (c.x, c.y, 0.0)},
                                    kDefaultResolution),
                   inner);
    }
    EXPECT_GT (checked, 900);
}

TEST (Geometry, RefinementIsMonotone)
{
    const RobotModel robot = arm ({1.0, 0.8, 0.5}, 0.1, 0.1);
    Rng rng (3);
    int positives = 0;
    for (int i = 0; i < 100; ++i)
    {
        Configuration a{uniformIn (rng, -kPi, kPi), uniformIn (rng, -kPi, kPi), uniformIn (rng, -kPi, kPi)};
        Configuration b{uniformIn (rng, -kPi, kPi), uniformIn (rng, -kPi, kPi), uniformIn (rng, -kPi, kPi)};
        const PlacedShape obs{Shape::box (0.3, 0.3), Pose2 (uniformIn (rng, -2, 2), uniformIn (rng, -2, 2), 0.0)};
        const double res = 0.05 + 0.5 * uniform01 (rng);
        if (!segmentCollides (robot, a, b, obs, res))
            continue;
        ++positives;
        for (double finer : {res, res * 0.9, res / 2.0, res / 3.7, res / 8.0})
            EXPECT_TRUE (segmentCollides (robot, a, b, obs, finer));
    }
    EXPECT_GT (positives, 10);
}

TEST (Geometry, SweepIsDirectionIndependent)
{
    const RobotModel robot = arm ({1.0, 0.8, 0.5}, 0.1, 0.1);
    Rng rng (8);
    for (int i = 0; i < 200; ++i)
    {
        Configuration a{uniformIn (rng, -kPi, kPi), uniformIn (rng, -kPi, kPi), uniformIn (rng, -kPi, kPi)};
        Configuration b{uniformIn (rng, -kPi, kPi), uniformIn (rng, -kPi, kPi), uniformIn (rng, -kPi, kPi)};
        const PlacedShape obs{Shape::disc (0.2), Pose2 (uniformIn (rng, -2, 2), uniformIn (rng, -2, 2), 0.0)};
        EXPECT_EQ (segmentCollides (robot, a, b, obs, 0.1), segmentCollides (robot, b, a, obs, 0.1));
    }
}

TEST (Geometry, DistanceExamples)
{
    EXPECT_EQ (cDistance (RobotModel (DiscRobot{1.0}), Configuration{1.0, 2.0}, Configuration{1.0, 2.0}), 0.0);
    EXPECT_DOUBLE_EQ (cDistance (RobotModel (DiscRobot{1.0}), Configuration{0.0, 0.0}, Configuration{3.0, 4.0}), 5.0);
    EXPECT_NEAR (cDistance (arm ({1.0}), Configuration{kPi - 0.1}, Configuration{-kPi + 0.1}), 0.2, 1e-12);
}

TEST (Geometry, DistanceIsMetric)
{
    const RobotModel robot = arm ({1.0, 1.0, 1.0});
    Rng rng (9);
    auto q = [&] { return Configuration{uniformIn (rng, -kPi, kPi), uniformIn (rng, -kPi, kPi), uniformIn (rng, -kPi, kPi)}; };
    for (int i = 0; i < 1000; ++i)
    {
        const Configuration a = q (), b = q (), c = q ();
        const double ab = cDistance (robot, a, b), bc = cDistance (robot, b, c), ac = cDistance (robot, a, c);
        EXPECT_GE (ab, 0.0);
        EXPECT_EQ (cDistance (robot, a, a), 0.0);
        EXPECT_DOUBLE_EQ (ab, cDistance (robot, b, a));
        EXPECT_LE (ac, ab + bc + 1e-12);
    }
}

TEST (Geometry, ShapeValidation)
{
    EXPECT_THROW ((void) Shape::disc (0.0), InvalidInput);
    EXPECT_THROW ((void) Shape (ConvexPolygon{{{0, 0}, {1, 0}}}), InvalidInput);
    // Clockwise square.
    EXPECT_THROW ((void) Shape (ConvexPolygon{{{0, 0}, {0, 1}, {1, 1}, {1, 0}}}), InvalidInput);
    // Non-convex quadrilateral.
    EXPECT_THROW ((void) Shape (ConvexPolygon{{{0, 0}, {2, 0}, {0.5, 0.5}, {0, 2}}}), InvalidInput);
    EXPECT_THROW ((void) RobotModel (PlanarArm{{0, 0}, {1.0, -1.0}, 0.1, 0.0}), InvalidInput);
}

TEST (Geometry, InverseKinematicsRoundTrip)
{
    const RobotModel robot = arm ({40.0, 30.0, 20.0}, 3.0, 8.0);
    Rng rng (4);
    int solved = 0;
    for (int i = 0; i < 200; ++i)
    {
        const Pose2 target (uniformIn (rng, -70, 70), uniformIn (rng, -70, 70), uniformIn (rng, -kPi, kPi));
        for (const Configuration &q : inverseKinematics (robot, target))
        {
            ++solved;
            const Pose2 ee = forwardKinematics (robot, q).endEffector;
            EXPECT_NEAR (ee.x, target.x, 1e-9);
            EXPECT_NEAR (ee.y, target.y, 1e-9);
            EXPECT_NEAR (rotationDistance (ee, target), 0.0, 1e-9);
        }
    }
    EXPECT_GT (solved, 50);
}
