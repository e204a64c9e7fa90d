#pragma once
/**
 * @file    roadmap.hpp
 * @brief   PRM*-style roadmap construction, hypothesis edge labeling and
 *          goal-set bookkeeping.
 *
 * Static obstacles are certain: nodes and edges touching them are removed.
 * Movable-object hypotheses only ever become edge labels.
 */

#include <smcr/errors.hpp>
#include <smcr/geometry.hpp>
#include <smcr/label_set.hpp>
#include <smcr/random.hpp>
#include <smcr/scene.hpp>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <exception>
#include <mutex>
#include <numbers>
#include <optional>
#include <set>
#include <span>
#include <thread>
#include <utility>
#include <vector>

namespace smcr
{
    inline constexpr double kDefaultResolution = 0.05;

    /// ceil(e * (1 + 1/d) * ln n): neighbours per node for PRM* connectivity.
    [[nodiscard]] inline std::size_t prmStarNeighbors (std::size_t n, std::size_t d)
    {
        if (n < 2 || d < 1)
            throw InvalidInput ("prmStarNeighbors: need n >= 2 and d >= 1");
        const double k = std::numbers::e * (1.0 + 1.0 / static_cast<double> (d)) * std::log (static_cast<double> (n));
        return static_cast<std::size_t> (std::ceil (k));
    }

    /// Axis-aligned sampling box in configuration space.
    struct ConfigBounds
    {
        std::vector<double> lo;
        std::vector<double> hi;
        friend bool operator== (const ConfigBounds &, const ConfigBounds &) = default;
    };

    struct GraspTolerance
    {
        double position{0.1};
        double orientation{degToRad (30.0)};
        friend bool operator== (const GraspTolerance &, const GraspTolerance &) = default;
    };

    /// True if the end-effector frame @p ee can pick an object at @p objectPose.
    [[nodiscard]] inline bool withinGrasp (const RobotModel &robot, const Pose2 &ee, const Pose2 &objectPose, const GraspTolerance &tol)
    {
        if (translationDistance (ee, objectPose) > tol.position)
            return false;
        return !robot.hasOrientation () || rotationDistance (ee, objectPose) <= tol.orientation;
    }

    struct Edge
    {
        std::size_t u{0};
        std::size_t v{0};
        double length{0.0};
        LabelSet labels;

        [[nodiscard]] std::size_t other (std::size_t n) const noexcept { return n == u ? v : u; }
    };

    /// A goal node with the (0-based) target hypotheses it can pick.
    struct GoalSpec
    {
        std::size_t node{0};
        std::vector<int> targets;
        friend bool operator== (const GoalSpec &, const GoalSpec &) = default;
    };

    struct Adjacent
    {
        std::size_t node;
        std::size_t edge;
    };

    /**
     * @brief Labeled roadmap G(V, E) with a start node and goal table.
     *
     * Edges are undirected and stored once with u < v.
     */
    class Roadmap
    {
      public:
        Roadmap () = default;
        explicit Roadmap (RobotModel robot) : robot_ (std::move (robot)) {}

        [[nodiscard]] const RobotModel &robot () const noexcept { return robot_; }
        [[nodiscard]] const std::vector<Configuration> &nodes () const noexcept { return nodes_; }
        [[nodiscard]] const std::vector<Edge> &edges () const noexcept { return edges_; }
        [[nodiscard]] std::span<const Adjacent> neighbors (std::size_t n) const { return adjacency_.at (n); }
        [[nodiscard]] std::size_t start () const noexcept { return start_; }
        [[nodiscard]] const std::vector<GoalSpec> &goals () const noexcept { return goals_; }
        [[nodiscard]] const LabelUniverse &universe () const noexcept { return universe_; }
        [[nodiscard]] std::size_t size () const noexcept { return nodes_.size (); }

        /// Goal entry for node @p n, or nullptr.
        [[nodiscard]] const GoalSpec *goalAt (std::size_t n) const noexcept
        {
            auto it = std::lower_bound (goals_.begin (), goals_.end (), n, [] (const GoalSpec &g, std::size_t v) { return g.node < v; });
            return it != goals_.end () && it->node == n ? &*it : nullptr;
        }

        std::size_t addNode (Configuration q)
        {
            nodes_.push_back (robot_.normalize (std::move (q)));
            adjacency_.emplace_back ();
            return nodes_.size () - 1;
        }

        /// Adds an undirected edge; length is the configuration distance.
        std::size_t addEdge (std::size_t a, std::size_t b, LabelSet labels = {})
        {
            if (a == b || a >= nodes_.size () || b >= nodes_.size ())
                throw InvalidInput ("addEdge: invalid endpoints");
            const std::size_t u = std::min (a, b), v = std::max (a, b);
            edges_.push_back ({u, v, cDistance (robot_, nodes_[u], nodes_[v]), std::move (labels)});
            adjacency_[u].push_back ({v, edges_.size () - 1});
            adjacency_[v].push_back ({u, edges_.size () - 1});
            return edges_.size () - 1;
        }

        /// Adds an edge with an explicit length (abstract graphs, fixtures).
        std::size_t addEdgeWithLength (std::size_t a, std::size_t b, double length, LabelSet labels = {})
        {
            const std::size_t e = addEdge (a, b, std::move (labels));
            edges_[e].length = length;
            return e;
        }

        void setStart (std::size_t s)
        {
            if (s >= nodes_.size ())
                throw InvalidInput ("start node out of range");
            start_ = s;
        }

        void setGoals (std::vector<GoalSpec> goals)
        {
            std::sort (goals.begin (), goals.end (), [] (const GoalSpec &a, const GoalSpec &b) { return a.node < b.node; });
            for (std::size_t i = 0; i < goals.size (); ++i)
            {
                if (goals[i].node >= nodes_.size ())
                    throw InvalidInput ("goal node out of range");
                if (goals[i].targets.empty ())
                    throw InvalidInput ("goal has an empty target set");
                if (i > 0 && goals[i].node == goals[i - 1].node)
                    throw InvalidInput ("duplicate goal node");
                std::sort (goals[i].targets.begin (), goals[i].targets.end ());
            }
            goals_ = std::move (goals);
        }

        void setUniverse (LabelUniverse u) { universe_ = std::move (u); }
        void setEdgeLabels (std::size_t e, LabelSet labels) { edges_.at (e).labels = std::move (labels); }

        /// Target hypotheses that no goal node can pick.
        [[nodiscard]] const std::vector<int> &unreachableTargets () const noexcept { return unreachable_; }
        void setUnreachableTargets (std::vector<int> u) { unreachable_ = std::move (u); }

        /// Edge joining @p a and @p b, if any.
        [[nodiscard]] std::optional<std::size_t> findEdge (std::size_t a, std::size_t b) const
        {
            for (const Adjacent &adj : adjacency_.at (a))
                if (adj.node == b)
                    return adj.edge;
            return std::nullopt;
        }

      private:
        RobotModel robot_;
        std::vector<Configuration> nodes_;
        std::vector<Edge> edges_;
        std::vector<std::vector<Adjacent>> adjacency_;
        std::size_t start_{0};
        std::vector<GoalSpec> goals_;
        LabelUniverse universe_;
        std::vector<int> unreachable_;
    };

    struct RoadmapOptions
    {
        double resolution{kDefaultResolution};
        /// Rejection-sampling attempts allowed per node.
        std::size_t maxAttemptsPerSample{10000};
        /// Optional start configuration; inserted as node 0.
        std::optional<Configuration> start;
        /// Worker threads for edge validation and labeling (0 = 1).
        std::size_t jobs{1};
    };

    namespace detail
    {
        template <typename F> void parallelFor (std::size_t count, std::size_t jobs, F &&f)
        {
            jobs = std::max<std::size_t> (1, std::min (jobs, count));
            if (jobs == 1)
            {
                for (std::size_t i = 0; i < count; ++i)
                    f (i);
                return;
            }
            std::exception_ptr error;
            std::mutex errorMutex;
            {
                std::vector<std::jthread> workers;
                for (std::size_t w = 0; w < jobs; ++w)
                    workers.emplace_back ([&, w] {
                        try
                        {
                            for (std::size_t i = w; i < count; i += jobs)
                                f (i);
                        }
                        catch (...)
                        {
                            std::lock_guard lock (errorMutex);
                            if (!error)
                                error = std::current_exception ();
                        }
                    });
            }
            if (error)
                std::rethrow_exception (error);
        }

        inline bool staticFree (const RobotModel &robot, const Configuration &q, std::span<const WorldShape> obstacles)
        {
            const Kinematics k = forwardKinematics (robot, q);
            return std::none_of (obstacles.begin (), obstacles.end (),
                                 [&] (const WorldShape &o) { return bodiesHit (k.bodies, o, ContactMode::Obstacle); });
        }

        inline bool staticFreeMotion (const RobotModel &robot, const Configuration &a, const Configuration &b,
                                      std::span<const WorldShape> obstacles, double resolution)
        {
            if (obstacles.empty ())
                return true;
            const SweptMotion m (robot, a, b, resolution);
            return std::none_of (obstacles.begin (), obstacles.end (), [&] (const WorldShape &o) { return m.hits (o); });
        }

        inline std::vector<WorldShape> worldShapes (std::span<const PlacedShape> shapes)
        {
            std::vector<WorldShape> out;
            for (const auto &s : shapes)
                out.push_back (s.world ());
            return out;
        }

        /// Indices of the @p k nearest nodes to @p q (ties by index), skipping @p self.
        inline std::vector<std::size_t> nearest (const RobotModel &robot, std::span<const Configuration> nodes, const Configuration &q,
                                                 std::size_t k, std::size_t self)
        {
            std::vector<std::pair<double, std::size_t>> d;
            d.reserve (nodes.size ());
            for (std::size_t i = 0; i < nodes.size (); ++i)
                if (i != self)
                    d.emplace_back (cDistance (robot, q, nodes[i]), i);
            k = std::min (k, d.size ());
            std::partial_sort (d.begin (), d.begin () + static_cast<std::ptrdiff_t> (k), d.end ());
            std::vector<std::size_t> out;
            for (std::size_t i = 0; i < k; ++i)
                out.push_back (d[i].second);
            return out;
        }
    } // namespace detail

    /**
     * @brief Samples a roadmap skeleton (no labels, no goals).
     *
     * Draws n collision-free configurations (the optional start counts as
     * one of them), links each to its prmStarNeighbors(n, dof) nearest
     * neighbours and keeps the links whose motion avoids static obstacles.
     */
    [[nodiscard]] inline Roadmap buildRoadmap (const RobotModel &robot, std::span<const PlacedShape> staticObstacles,
                                               const ConfigBounds &bounds, std::size_t n, std::uint64_t seed,
                                               const RoadmapOptions &options = {})
    {
        if (n < 2)
            throw InvalidInput ("buildRoadmap: n must be at least 2");
        if (bounds.lo.size () != robot.dof () || bounds.hi.size () != robot.dof ())
            throw InvalidInput ("buildRoadmap: bounds dimension mismatch");
        for (std::size_t i = 0; i < robot.dof (); ++i)
            if (!(bounds.lo[i] <= bounds.hi[i]))
                throw InvalidInput ("buildRoadmap: empty bounds");

        const std::vector<WorldShape> obstacles = detail::worldShapes (staticObstacles);
        Roadmap rm (robot);
        if (options.start)
        {
            if (!detail::staticFree (robot, *options.start, obstacles))
                throw InvalidInput ("buildRoadmap: start configuration hits a static obstacle");
            rm.setStart (rm.addNode (*options.start));
        }

        Rng rng (splitSeed (seed, {hashTag ("roadmap-samples")}));
        while (rm.size () < n)
        {
            bool placed = false;
            for (std::size_t attempt = 0; attempt < options.maxAttemptsPerSample && !placed; ++attempt)
            {
                std::vector<double> v (robot.dof ());
                for (std::size_t i = 0; i < v.size (); ++i)
                    v[i] = uniformIn (rng, bounds.lo[i], bounds.hi[i]);
                Configuration q = robot.normalize (Configuration (std::move (v)));
                if (detail::staticFree (robot, q, obstacles))
                {
                    rm.addNode (std::move (q));
                    placed = true;
                }
            }
            if (!placed)
                throw SamplingFailure ("buildRoadmap: no collision-free sample after " + std::to_string (options.maxAttemptsPerSample) +
                                       " attempts (" + std::to_string (rm.size ()) + " of " + std::to_string (n) + " placed)");
        }

        const std::size_t k = prmStarNeighbors (n, robot.dof ());
        std::set<std::pair<std::size_t, std::size_t>> candidates;
        for (std::size_t i = 0; i < rm.size (); ++i)
            for (std::size_t j : detail::nearest (robot, rm.nodes (), rm.nodes ()[i], k, i))
                candidates.emplace (std::min (i, j), std::max (i, j));

        const std::vector<std::pair<std::size_t, std::size_t>> list (candidates.begin (), candidates.end ());
        std::vector<char> keep (list.size (), 0);
        detail::parallelFor (list.size (), options.jobs, [&] (std::size_t e) {
            keep[e] = detail::staticFreeMotion (robot, rm.nodes ()[list[e].first], rm.nodes ()[list[e].second], obstacles,
                                                options.resolution);
        });
        for (std::size_t e = 0; e < list.size (); ++e)
            if (keep[e])
                rm.addEdge (list[e].first, list[e].second);
        return rm;
    }

    /**
     * @brief Appends @p q and links it to its k nearest existing nodes
     * through statically free motions. Returns the new node index, or
     * nullopt if @p q itself touches a static obstacle.
     */
    inline std::optional<std::size_t> connectNode (Roadmap &rm, const Configuration &q, std::span<const PlacedShape> staticObstacles,
                                                   std::size_t k, double resolution)
    {
        const std::vector<WorldShape> obstacles = detail::worldShapes (staticObstacles);
        if (!detail::staticFree (rm.robot (), q, obstacles))
            return std::nullopt;
        const std::size_t existing = rm.size ();
        const std::size_t id = rm.addNode (q);
        for (std::size_t j : detail::nearest (rm.robot (), std::span (rm.nodes ()).first (existing), rm.nodes ()[id], k, existing))
            if (detail::staticFreeMotion (rm.robot (), rm.nodes ()[j], rm.nodes ()[id], obstacles, resolution))
                rm.addEdge (j, id);
        return id;
    }

    /**
     * @brief Injects exact grasp configurations for every target hypothesis
     * (all inverse-kinematics branches that avoid static obstacles).
     * Returns the indices of the injected nodes.
     */
    inline std::vector<std::size_t> injectGraspGoals (Roadmap &rm, const BeliefScene &scene, double resolution)
    {
        std::vector<std::size_t> added;
        const std::size_t k = prmStarNeighbors (std::max<std::size_t> (rm.size (), 2), rm.robot ().dof ());
        for (const PoseHypothesis &h : scene.target ().hypotheses)
            for (const Configuration &q : inverseKinematics (rm.robot (), h.pose))
                if (auto id = connectNode (rm, q, scene.staticObstacles, k, resolution))
                    added.push_back (*id);
        return added;
    }

    /**
     * @brief Attaches label l_i^j to every edge whose motion hits hypothesis
     * p_i^j. Target hypotheses are checked with ContactMode::Target.
     * Replaces the roadmap's label universe with the scene's.
     */
    inline void labelEdges (Roadmap &rm, const BeliefScene &scene, double resolution = kDefaultResolution, std::size_t jobs = 1)
    {
        const LabelUniverse universe = LabelUniverse::fromScene (scene);
        struct Hyp
        {
            WorldShape shape;
            Aabb box;
            ContactMode mode;
        };
        std::vector<Hyp> hyps;
        hyps.reserve (universe.size ());
        for (const LabelId &id : universe.labels ())
        {
            const ObjectBelief &o = *scene.find (id.object);
            WorldShape s = place (o.shape, o.hypotheses[static_cast<std::size_t> (id.hypothesis)].pose);
            const Aabb box = bounds (s);
            hyps.push_back ({std::move (s), box, id.object == scene.targetId ? ContactMode::Target : ContactMode::Obstacle});
        }

        Aabb all;
        for (const Hyp &h : hyps)
            all.expand (h.box);

        std::vector<LabelSet> labels (rm.edges ().size (), LabelSet (universe.size ()));
        detail::parallelFor (rm.edges ().size (), jobs, [&] (std::size_t e) {
            const Edge &edge = rm.edges ()[e];
            const SweptMotion motion (rm.robot (), rm.nodes ()[edge.u], rm.nodes ()[edge.v], resolution);
            if (!motion.bounds ().overlaps (all))
                return;
            for (std::size_t b = 0; b < hyps.size (); ++b)
                if (motion.hits (hyps[b].shape, hyps[b].box, hyps[b].mode))
                    labels[e].insert (b);
        });
        for (std::size_t e = 0; e < labels.size (); ++e)
            rm.setEdgeLabels (e, std::move (labels[e]));
        rm.setUniverse (universe);
    }

    /**
     * @brief Marks every node (except the start) whose end effector lies
     * within grasp tolerance of some target hypothesis as a goal.
     *
     * @throws UnsolvableInstance if no node can pick any hypothesis.
     */
    inline void computeGoals (Roadmap &rm, const BeliefScene &scene, const GraspTolerance &tolerance)
    {
        const ObjectBelief &target = scene.target ();
        if (target.hypotheses.empty ())
            throw InvalidInput ("computeGoals: target has no hypotheses");
        std::vector<GoalSpec> goals;
        std::vector<bool> covered (target.hypotheses.size (), false);
        for (std::size_t n = 0; n < rm.size (); ++n)
        {
            if (n == rm.start ())
                continue;
            const Pose2 ee = forwardKinematics (rm.robot (), rm.nodes ()[n]).endEffector;
            GoalSpec g{n, {}};
            for (std::size_t j = 0; j < target.hypotheses.size (); ++j)
                if (withinGrasp (rm.robot (), ee, target.hypotheses[j].pose, tolerance))
                {
                    g.targets.push_back (static_cast<int> (j));
                    covered[j] = true;
                }
            if (!g.targets.empty ())
                goals.push_back (std::move (g));
        }
        if (goals.empty ())
            throw UnsolvableInstance ("unsolvable instance: no roadmap node can pick any target hypothesis");
        std::vector<int> unreachable;
        for (std::size_t j = 0; j < covered.size (); ++j)
            if (!covered[j])
                unreachable.push_back (static_cast<int> (j));
        rm.setGoals (std::move (goals));
        rm.setUnreachableTargets (std::move (unreachable));
    }
} // namespace smcr
