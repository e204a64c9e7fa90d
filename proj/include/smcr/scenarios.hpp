#pragma once
/**
 * @file    scenarios.hpp
 * @brief   Bundled desk-scale benchmark scenes (length unit: cm).
 *
 * A three-link planar arm based at the origin reaches into a table region
 * in front of it. Each scene places a small target box among movable
 * objects:
 *  - narrow-passage: target between two close boxes
 *  - clutter:        target ringed by objects
 *  - arch:           target just in front of two legs and a crossbar
 */

#include <smcr/errors.hpp>
#include <smcr/geometry.hpp>
#include <smcr/roadmap.hpp>
#include <smcr/scene.hpp>

#include <cmath>
#include <string>
#include <string_view>
#include <vector>

namespace smcr
{
    /// Robot, sampling box, start and grasp model shared by a scene.
    struct Workspace
    {
        RobotModel robot;
        ConfigBounds bounds;
        Configuration start;
        GraspTolerance grasp;
        friend bool operator== (const Workspace &, const Workspace &) = default;
    };

    struct Scenario
    {
        std::string name;
        Workspace workspace;
        GroundTruthScene truth;
    };

    inline constexpr std::string_view kScenarioNames[] = {"narrow-passage", "clutter", "arch"};

    /// Grasp tolerance used by the bundled scenes: 2.5 cm, 30 deg.
    inline constexpr GraspTolerance kDeskGrasp{2.5, degToRad (30.0)};

    [[nodiscard]] inline Workspace deskWorkspace ()
    {
        Workspace w;
        w.robot = RobotModel (PlanarArm{{0.0, 0.0}, {40.0, 30.0, 20.0}, 3.0, 8.0});
        w.bounds = ConfigBounds{{-kPi, -kPi, -kPi}, {kPi, kPi, kPi}};
        w.start = Configuration{-kPi / 2.0, kPi / 2.0, kPi / 2.0};
        w.grasp = kDeskGrasp;
        return w;
    }

    namespace detail
    {
        inline std::vector<PlacedShape> deskStatics ()
        {
            // Wall behind the arm base and a post at the table's far left corner.
            return {PlacedShape{Shape::box (6.0, 200.0), Pose2 (-25.0, 0.0, 0.0)},
                    PlacedShape{Shape::box (8.0, 8.0), Pose2 (20.0, 55.0, 0.0)}};
        }

        /// Target box facing away from the arm base.
        inline ObjectPlacement targetAt (double x, double y, double theta)
        {
            return {0, Shape::box (4.0, 4.0), Pose2 (x, y, theta)};
        }
    } // namespace detail

    [[nodiscard]] inline Scenario narrowPassageScenario ()
    {
        Scenario s{"narrow-passage", deskWorkspace (), {}};
        s.truth.staticObstacles = detail::deskStatics ();
        s.truth.targetId = 0;
        s.truth.placements = {
            detail::targetAt (60.0, 0.0, 0.0),
            {1, Shape::box (8.0, 12.0), Pose2 (60.0, 10.5, 0.0)},
            {2, Shape::box (8.0, 12.0), Pose2 (60.0, -10.5, 0.0)},
            {3, Shape::disc (4.0), Pose2 (44.0, -13.0, 0.0)},
        };
        return s;
    }

    [[nodiscard]] inline Scenario clutterScenario ()
    {
        Scenario s{"clutter", deskWorkspace (), {}};
        s.truth.staticObstacles = detail::deskStatics ();
        s.truth.targetId = 0;
        const double tx = 55.0, ty = 20.0;
        s.truth.placements.push_back (detail::targetAt (tx, ty, std::atan2 (ty, tx)));
        const double ring = 10.0;
        int id = 1;
        for (double deg : {0.0, 70.0, 140.0, 245.0, 300.0})
        {
            const double a = degToRad (deg);
            Shape shape = (id % 2) ? Shape::disc (3.5) : Shape::box (6.0, 6.0);
            s.truth.placements.push_back ({id++, shape, Pose2 (tx + ring * std::cos (a), ty + ring * std::sin (a), a)});
        }
        return s;
    }

    [[nodiscard]] inline Scenario archScenario ()
    {
        Scenario s{"arch", deskWorkspace (), {}};
        s.truth.staticObstacles = detail::deskStatics ();
        s.truth.targetId = 0;
        s.truth.placements = {
            detail::targetAt (56.0, -20.0, 0.0),
            {1, Shape::box (5.0, 5.0), Pose2 (63.0, -26.0, 0.0)},
            {2, Shape::box (5.0, 5.0), Pose2 (63.0, -14.0, 0.0)},
            {3, Shape::box (4.0, 18.0), Pose2 (67.5, -20.0, 0.0)},
        };
        return s;
    }

    [[nodiscard]] inline Scenario scenarioByName (std::string_view name)
    {
        if (name == "narrow-passage")
            return narrowPassageScenario ();
        if (name == "clutter")
            return clutterScenario ();
        if (name == "arch")
            return archScenario ();
        throw InvalidInput ("unknown scenario '" + std::string (name) + "'");
    }
} // namespace smcr
