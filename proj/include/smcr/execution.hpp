#pragma once
/**
 * @file    execution.hpp
 * @brief   Executing a path in a ground-truth world and Monte-Carlo
 *          estimation of its success probability.
 */

#include <smcr/errors.hpp>
#include <smcr/geometry.hpp>
#include <smcr/planner.hpp>
#include <smcr/random.hpp>
#include <smcr/roadmap.hpp>
#include <smcr/scene.hpp>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <set>
#include <span>
#include <vector>

namespace smcr
{
    struct ExecutionOutcome
    {
        std::vector<int> collidedObjects; ///< sorted ids
        std::size_t numCollided{0};
        bool reachedTarget{false};
        bool success{false};
        double pathCost{0.0};
    };

    struct ExecutionOptions
    {
        double resolution{kDefaultResolution};
        GraspTolerance tolerance;
        /// Count contact with the target object itself as a collision.
        bool countTargetCollisions{true};
    };

    [[nodiscard]] inline std::vector<Configuration> pathConfigurations (const Roadmap &rm, std::span<const std::size_t> path)
    {
        std::vector<Configuration> out;
        out.reserve (path.size ());
        for (std::size_t n : path)
            out.push_back (rm.nodes ().at (n));
        return out;
    }

    namespace detail
    {
        inline std::vector<SweptMotion> sweepPath (const RobotModel &robot, std::span<const Configuration> path, double resolution)
        {
            std::vector<SweptMotion> out;
            if (path.size () == 1)
                out.emplace_back (robot, path[0], path[0], resolution);
            for (std::size_t i = 0; i + 1 < path.size (); ++i)
                out.emplace_back (robot, path[i], path[i + 1], resolution);
            return out;
        }

        inline bool sweepHits (std::span<const SweptMotion> sweep, const WorldShape &obstacle, ContactMode mode)
        {
            const Aabb box = bounds (obstacle);
            return std::any_of (sweep.begin (), sweep.end (), [&] (const SweptMotion &m) { return m.hits (obstacle, box, mode); });
        }
    } // namespace detail

    /**
     * @brief Sweeps every segment of @p path against every truly present
     * object and checks whether the final end effector can pick the true
     * target. Success requires a pick and zero collisions.
     */
    [[nodiscard]] inline ExecutionOutcome executePath (const RobotModel &robot, std::span<const Configuration> path,
                                                       const GroundTruthScene &gt, const ExecutionOptions &options = {})
    {
        if (path.empty ())
            throw InvalidInput ("executePath: empty path");
        ExecutionOutcome out;
        for (std::size_t i = 0; i + 1 < path.size (); ++i)
            out.pathCost += cDistance (robot, path[i], path[i + 1]);
        const auto sweep = detail::sweepPath (robot, path, options.resolution);
        for (const ObjectPlacement &p : gt.placements)
        {
            const bool isTarget = p.id == gt.targetId;
            if (isTarget && !options.countTargetCollisions)
                continue;
            if (detail::sweepHits (sweep, place (p.shape, p.pose), isTarget ? ContactMode::Target : ContactMode::Obstacle))
                out.collidedObjects.push_back (p.id);
        }
        std::sort (out.collidedObjects.begin (), out.collidedObjects.end ());
        out.numCollided = out.collidedObjects.size ();
        const Pose2 ee = forwardKinematics (robot, path.back ()).endEffector;
        out.reachedTarget = withinGrasp (robot, ee, gt.target ().pose, options.tolerance);
        out.success = out.reachedTarget && out.numCollided == 0;
        return out;
    }

    /**
     * @brief Executes one fixed path in worlds drawn from a belief.
     *
     * Worlds drawn from a belief only place objects at hypothesis poses, so
     * the sweep outcome against each (object, hypothesis) pair is computed
     * once and reused across draws.
     */
    class BeliefExecutor
    {
      public:
        BeliefExecutor (const RobotModel &robot, std::span<const Configuration> path, const BeliefScene &scene,
                        const ExecutionOptions &options = {})
            : scene_ (scene)
        {
            if (path.empty ())
                throw InvalidInput ("BeliefExecutor: empty path");
            for (std::size_t i = 0; i + 1 < path.size (); ++i)
                cost_ += cDistance (robot, path[i], path[i + 1]);
            const auto sweep = detail::sweepPath (robot, path, options.resolution);
            const Pose2 ee = forwardKinematics (robot, path.back ()).endEffector;
            for (const ObjectBelief &o : scene.objects)
            {
                const bool isTarget = o.id == scene.targetId;
                std::vector<char> hit, reach;
                for (const PoseHypothesis &h : o.hypotheses)
                {
                    const bool counts = !isTarget || options.countTargetCollisions;
                    hit.push_back (counts && detail::sweepHits (sweep, place (o.shape, h.pose), isTarget ? ContactMode::Target : ContactMode::Obstacle));
                    reach.push_back (isTarget && withinGrasp (robot, ee, h.pose, options.tolerance));
                }
                hits_.push_back (std::move (hit));
                reaches_.push_back (std::move (reach));
            }
        }

        /// Outcome in the world given by sampleHypothesisIndices().
        [[nodiscard]] ExecutionOutcome execute (std::span<const int> indices) const
        {
            ExecutionOutcome out;
            out.pathCost = cost_;
            for (std::size_t i = 0; i < scene_.objects.size (); ++i)
            {
                if (indices[i] == kAbsent)
                    continue;
                const auto j = static_cast<std::size_t> (indices[i]);
                if (hits_[i][j])
                    out.collidedObjects.push_back (scene_.objects[i].id);
                if (scene_.objects[i].id == scene_.targetId)
                    out.reachedTarget = reaches_[i][j];
            }
            std::sort (out.collidedObjects.begin (), out.collidedObjects.end ());
            out.numCollided = out.collidedObjects.size ();
            out.success = out.reachedTarget && out.numCollided == 0;
            return out;
        }

      private:
        const BeliefScene &scene_;
        double cost_{0.0};
        std::vector<std::vector<char>> hits_;
        std::vector<std::vector<char>> reaches_;
    };

    /// Two-sided 99% normal quantile.
    inline constexpr double kZ99 = 2.5758293035489004;

    struct Interval
    {
        double lo{0.0};
        double hi{1.0};
        [[nodiscard]] bool contains (double x) const noexcept { return lo <= x && x <= hi; }
    };

    /// Wilson score interval for @p successes out of @p trials.
    [[nodiscard]] inline Interval wilsonInterval (std::size_t successes, std::size_t trials, double z = kZ99)
    {
        if (trials == 0)
            return {0.0, 1.0};
        const double n = static_cast<double> (trials);
        const double p = static_cast<double> (successes) / n;
        const double z2 = z * z;
        const double centre = (p + z2 / (2.0 * n)) / (1.0 + z2 / n);
        const double half = z * std::sqrt (p * (1.0 - p) / n + z2 / (4.0 * n * n)) / (1.0 + z2 / n);
        return {std::max (0.0, centre - half), std::min (1.0, centre + half)};
    }

    struct MonteCarloReport
    {
        std::size_t trials{0};
        std::size_t successes{0};
        double empirical{0.0};
        Interval ci;
    };

    /// Empirical success rate of @p path over worlds sampled from @p scene.
    [[nodiscard]] inline MonteCarloReport monteCarloSuccess (const RobotModel &robot, std::span<const Configuration> path,
                                                             const BeliefScene &scene, std::size_t trials, std::uint64_t seed,
                                                             const ExecutionOptions &options = {})
    {
        if (trials < 1)
            throw InvalidInput ("monteCarloSuccess: need at least one trial");
        const BeliefExecutor exec (robot, path, scene, options);
        Rng rng (splitSeed (seed, {hashTag ("monte-carlo")}));
        MonteCarloReport r;
        r.trials = trials;
        for (std::size_t t = 0; t < trials; ++t)
        {
            const auto idx = sampleHypothesisIndices (scene, rng);
            if (exec.execute (idx).success)
                ++r.successes;
        }
        r.empirical = static_cast<double> (r.successes) / static_cast<double> (trials);
        r.ci = wilsonInterval (r.successes, trials);
        return r;
    }
} // namespace smcr
