#pragma once
/**
 * @file    reduction.hpp
 * @brief   Encoding of a deterministic minimum-constraint-removal instance as
 *          a stochastic one, and an equivalence check between the two.
 *
 * Every constraint object gets one pose of probability xi. The target gets
 * one pose, also of probability xi, which the goal node picks. A path
 * crossing m constraints and avoiding the target pose then succeeds with
 * probability (1 - xi)^m * xi, so maximizing success minimizes m.
 */

#include <smcr/errors.hpp>
#include <smcr/io.hpp>
#include <smcr/label_set.hpp>
#include <smcr/planner.hpp>
#include <smcr/probability.hpp>
#include <smcr/random.hpp>
#include <smcr/roadmap.hpp>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <vector>

namespace smcr
{
    struct McrEdge
    {
        std::size_t u{0};
        std::size_t v{0};
        std::vector<int> objects; ///< constraint ids in [1, objectCount]
        bool target{false};       ///< edge crosses the target pose
    };

    struct McrInstance
    {
        std::size_t nodeCount{0};
        std::size_t objectCount{0};
        std::size_t start{0};
        std::size_t goal{0};
        std::vector<McrEdge> edges;

        void validate () const
        {
            if (nodeCount < 2)
                throw InvalidInput ("MCR instance needs at least two nodes");
            if (start >= nodeCount || goal >= nodeCount || start == goal)
                throw InvalidInput ("MCR instance: start and goal must be distinct nodes");
            for (const McrEdge &e : edges)
            {
                if (e.u >= nodeCount || e.v >= nodeCount || e.u == e.v)
                    throw InvalidInput ("MCR instance: invalid edge endpoints");
                for (int o : e.objects)
                    if (o < 1 || static_cast<std::size_t> (o) > objectCount)
                        throw InvalidInput ("MCR instance: object id out of range");
            }
        }
    };

    /// Object id used for the target in the stochastic encoding.
    inline constexpr int kReductionTargetId = 0;

    struct StochasticInstance
    {
        Roadmap roadmap;
        ProbabilityModel model;
    };

    /**
     * @brief Stochastic instance of an MCR instance: labels (i, 0) of weight
     * xi per object, a target label (0, 0) of weight xi on target edges, and
     * the goal node picking target pose 0. Edge lengths are 1.
     */
    [[nodiscard]] inline StochasticInstance toStochastic (const McrInstance &inst, double xi)
    {
        inst.validate ();
        if (!(xi > 0.0 && xi < 1.0))
            throw InvalidInput ("xi must lie in (0,1)");
        std::vector<LabelId> ids{{kReductionTargetId, 0}};
        for (std::size_t i = 1; i <= inst.objectCount; ++i)
            ids.push_back ({static_cast<int> (i), 0});
        LabelUniverse universe (ids, kReductionTargetId);

        StochasticInstance out{Roadmap (RobotModel (DiscRobot{1.0})), {}};
        Roadmap &rm = out.roadmap;
        for (std::size_t n = 0; n < inst.nodeCount; ++n)
            rm.addNode (Configuration{static_cast<double> (n), 0.0});
        rm.setUniverse (universe);
        for (const McrEdge &e : inst.edges)
        {
            LabelSet l (universe.size ());
            for (int o : e.objects)
                l.insert (universe.bitOf ({o, 0}));
            if (e.target)
                l.insert (universe.bitOf ({kReductionTargetId, 0}));
            rm.addEdgeWithLength (e.u, e.v, 1.0, std::move (l));
        }
        rm.setStart (inst.start);
        rm.setGoals ({{inst.goal, {0}}});
        out.model = ProbabilityModel (universe, std::vector<double> (universe.size (), xi), {xi});
        return out;
    }

    /// Brute-force MCR minimum over simple start-goal paths avoiding target edges.
    [[nodiscard]] inline std::optional<std::size_t> bruteForceMcr (const McrInstance &inst)
    {
        inst.validate ();
        std::vector<std::vector<std::pair<std::size_t, const McrEdge *>>> adj (inst.nodeCount);
        for (const McrEdge &e : inst.edges)
            if (!e.target)
            {
                adj[e.u].push_back ({e.v, &e});
                adj[e.v].push_back ({e.u, &e});
            }
        std::optional<std::size_t> best;
        std::vector<char> onPath (inst.nodeCount, 0);
        std::vector<int> count (inst.objectCount + 1, 0);
        std::size_t distinct = 0;
        auto dfs = [&] (auto &&self, std::size_t n) -> void {
            if (n == inst.goal)
            {
                if (!best || distinct < *best)
                    best = distinct;
                return;
            }
            onPath[n] = 1;
            for (const auto &[m, e] : adj[n])
            {
                if (onPath[m])
                    continue;
                for (int o : e->objects)
                    if (count[static_cast<std::size_t> (o)]++ == 0)
                        ++distinct;
                self (self, m);
                for (int o : e->objects)
                    if (--count[static_cast<std::size_t> (o)] == 0)
                        --distinct;
            }
            onPath[n] = 0;
        };
        dfs (dfs, inst.start);
        return best;
    }

    struct ReductionReport
    {
        double xi{0.0};
        bool solvableBruteForce{false};
        bool solvableStochastic{false};
        bool solvableMcrExact{false};
        std::size_t mBruteForce{0};
        std::size_t mStochastic{0}; ///< constraint labels on the max-success path
        std::size_t mMcrExact{0};
        double success{0.0};
        double expectedSuccess{0.0};
        std::vector<std::size_t> path;

        /// Same solvability everywhere; on solvable instances every m agrees
        /// and succ matches (1 - xi)^m * xi within @p tol.
        [[nodiscard]] bool consistent (double tol = 1e-12) const
        {
            if (solvableBruteForce != solvableStochastic || solvableBruteForce != solvableMcrExact)
                return false;
            if (!solvableBruteForce)
                return true;
            return mStochastic == mBruteForce && mMcrExact == mBruteForce && std::abs (success - expectedSuccess) <= tol;
        }
    };

    [[nodiscard]] inline ReductionReport checkReduction (const McrInstance &inst, double xi)
    {
        ReductionReport rep;
        rep.xi = xi;
        const auto brute = bruteForceMcr (inst);
        rep.solvableBruteForce = brute.has_value ();
        rep.mBruteForce = brute.value_or (0);

        const StochasticInstance s = toStochastic (inst, xi);
        try
        {
            const PlanResult r = maxSuccessExact (s.roadmap, s.model);
            rep.solvableStochastic = true;
            rep.path = r.path;
            rep.success = r.success;
            const std::size_t targetBit = s.roadmap.universe ().bitOf ({kReductionTargetId, 0});
            rep.mStochastic = r.labels.count () - (r.labels.contains (targetBit) ? 1 : 0);
        }
        catch (const NoSolution &)
        {
            rep.solvableStochastic = false;
        }

        // Plain MCR on the instance with target edges removed.
        McrInstance pruned = inst;
        std::erase_if (pruned.edges, [] (const McrEdge &e) { return e.target; });
        const StochasticInstance p = toStochastic (pruned, xi);
        try
        {
            const PlanResult r = mcrExact (p.roadmap, p.model);
            rep.solvableMcrExact = true;
            rep.mMcrExact = r.labels.count ();
        }
        catch (const NoSolution &)
        {
            rep.solvableMcrExact = false;
        }
        const std::size_t m = rep.solvableBruteForce ? rep.mBruteForce : rep.mStochastic;
        rep.expectedSuccess = rep.solvableBruteForce ? std::pow (1.0 - xi, static_cast<double> (m)) * xi : 0.0;
        return rep;
    }

    /**
     * @brief Random MCR instance: each node pair is an edge with probability
     * @p edgeProb; each edge carries each constraint with probability
     * @p objectProb and crosses the target with probability @p targetProb.
     */
    [[nodiscard]] inline McrInstance randomMcrInstance (std::uint64_t seed, std::size_t nodes = 10, std::size_t objects = 5,
                                                        double edgeProb = 0.35, double objectProb = 0.25, double targetProb = 0.15)
    {
        Rng rng (splitSeed (seed, {hashTag ("mcr-instance")}));
        McrInstance inst;
        inst.nodeCount = nodes;
        inst.objectCount = objects;
        inst.start = 0;
        inst.goal = nodes - 1;
        for (std::size_t u = 0; u < nodes; ++u)
            for (std::size_t v = u + 1; v < nodes; ++v)
            {
                if (uniform01 (rng) >= edgeProb)
                    continue;
                McrEdge e{u, v, {}, false};
                for (std::size_t o = 1; o <= objects; ++o)
                    if (uniform01 (rng) < objectProb)
                        e.objects.push_back (static_cast<int> (o));
                e.target = uniform01 (rng) < targetProb;
                inst.edges.push_back (std::move (e));
            }
        inst.validate ();
        return inst;
    }

    [[nodiscard]] inline Json toJson (const McrInstance &inst)
    {
        Json edges = Json::array ();
        for (const McrEdge &e : inst.edges)
            edges.push_back ({{"u", e.u}, {"v", e.v}, {"objects", e.objects}, {"target", e.target}});
        return {{"format", "smcr-mcr-instance"}, {"nodes", inst.nodeCount}, {"objects", inst.objectCount},
                {"start", inst.start},            {"goal", inst.goal},       {"edges", edges}};
    }

    [[nodiscard]] inline McrInstance mcrInstanceFromJson (const Json &j)
    {
        detail::expectFormat (j, "smcr-mcr-instance");
        McrInstance inst;
        inst.nodeCount = detail::get<std::size_t> (j, "nodes");
        inst.objectCount = detail::get<std::size_t> (j, "objects");
        inst.start = detail::get<std::size_t> (j, "start");
        inst.goal = detail::get<std::size_t> (j, "goal");
        for (const Json &e : detail::field (j, "edges"))
            inst.edges.push_back ({detail::get<std::size_t> (e, "u"), detail::get<std::size_t> (e, "v"),
                                   e.value ("objects", std::vector<int>{}), e.value ("target", false)});
        inst.validate ();
        return inst;
    }

    [[nodiscard]] inline Json toJson (const ReductionReport &r)
    {
        return {{"xi", r.xi},
                {"solvable", {{"brute_force", r.solvableBruteForce}, {"max_success_exact", r.solvableStochastic}, {"mcr_exact", r.solvableMcrExact}}},
                {"m", {{"brute_force", r.mBruteForce}, {"max_success_exact", r.mStochastic}, {"mcr_exact", r.mMcrExact}}},
                {"succ", r.success},
                {"expected_succ", r.expectedSuccess},
                {"path", r.path},
                {"consistent", r.consistent ()}};
    }
} // namespace smcr
