#pragma once
/**
 * @file    planner.hpp
 * @brief   Label-set searches over a labeled roadmap.
 *
 * Planners:
 *  - max-success-exact   best-first on succ, per-node antichain of label sets
 *  - max-success-greedy  best-first on succ, one record per (node, goal flag)
 *  - mcr-exact           minimum number of hit poses, ties by path cost
 *  - mcr-greedy          as above, one record per node
 *  - mcr-mlc             mcr-exact restricted to each object's most likely pose
 *  - osp                 shortest path ignoring every label
 *
 * Every planner reports the returned path evaluated against the full
 * probability model, so results are directly comparable.
 */

#include <smcr/errors.hpp>
#include <smcr/label_set.hpp>
#include <smcr/probability.hpp>
#include <smcr/roadmap.hpp>

#include <algorithm>
#include <array>
#include <chrono>
#include <cstddef>
#include <functional>
#include <limits>
#include <optional>
#include <queue>
#include <string>
#include <string_view>
#include <vector>

namespace smcr
{
    enum class PlannerKind
    {
        MaxSuccessExact,
        MaxSuccessGreedy,
        McrExact,
        McrGreedy,
        McrMlc,
        Osp,
    };

    inline constexpr std::array<PlannerKind, 6> kAllPlanners{PlannerKind::MaxSuccessExact, PlannerKind::MaxSuccessGreedy, PlannerKind::McrExact,
                                                             PlannerKind::McrGreedy,       PlannerKind::McrMlc,           PlannerKind::Osp};

    [[nodiscard]] constexpr std::string_view plannerName (PlannerKind k) noexcept
    {
        switch (k)
        {
        case PlannerKind::MaxSuccessExact: return "max-success-exact";
        case PlannerKind::MaxSuccessGreedy: return "max-success-greedy";
        case PlannerKind::McrExact: return "mcr-exact";
        case PlannerKind::McrGreedy: return "mcr-greedy";
        case PlannerKind::McrMlc: return "mcr-mlc";
        case PlannerKind::Osp: return "osp";
        }
        return "unknown";
    }

    [[nodiscard]] inline PlannerKind parsePlanner (std::string_view name)
    {
        for (PlannerKind k : kAllPlanners)
            if (plannerName (k) == name)
                return k;
        throw InvalidInput ("unknown planner '" + std::string (name) + "'");
    }

    struct SearchStats
    {
        std::size_t expansions{0};
        std::size_t recordsStored{0};
        double wallTimeSeconds{0.0};
    };

    struct PlanResult
    {
        PlannerKind planner{PlannerKind::MaxSuccessExact};
        std::vector<std::size_t> path;
        LabelSet labels;
        double survivability{0.0};
        double reach{0.0};
        double success{0.0};
        double cost{0.0};
        SearchStats stats;
    };

    /// One stored path prefix of a label search.
    struct SearchRecord
    {
        static constexpr std::size_t npos = std::numeric_limits<std::size_t>::max ();

        std::size_t node{0};
        LabelSet labels;
        std::size_t parent{npos};
        double survivability{1.0};
        LabelSet remainingTargets;
        double reach{0.0};
        double success{0.0};
        double cost{0.0};
        std::size_t labelCount{0};
        bool isGoal{false};
        bool alive{true};
        std::size_t twin{npos}; ///< goal record sharing this record's label set
    };

    struct SearchOptions
    {
        /// Discard label sets that are supersets of one already stored at a node.
        /// When off, the search enumerates simple paths only (nodes are not
        /// revisited along a path), which keeps it finite.
        bool pruneDominated{true};
        /// Drop records whose success probability is zero.
        bool dropZeroSuccess{true};
        /// Optional sink receiving every record created by the search.
        std::vector<SearchRecord> *trace{nullptr};
    };

    /// Evaluates an explicit node path against @p model.
    [[nodiscard]] inline PlanResult evaluatePath (const Roadmap &rm, const ProbabilityModel &model, std::vector<std::size_t> path,
                                                  PlannerKind planner)
    {
        if (path.empty ())
            throw InvalidInput ("evaluatePath: empty path");
        PlanResult r;
        r.planner = planner;
        r.labels = LabelSet (rm.universe ().size ());
        for (std::size_t i = 0; i + 1 < path.size (); ++i)
        {
            auto e = rm.findEdge (path[i], path[i + 1]);
            if (!e)
                throw InvalidInput ("evaluatePath: nodes " + std::to_string (path[i]) + " and " + std::to_string (path[i + 1]) +
                                    " are not adjacent");
            r.labels |= rm.edges ()[*e].labels;
            r.cost += rm.edges ()[*e].length;
        }
        r.survivability = model.survivability (r.labels);
        const GoalSpec *g = rm.goalAt (path.back ());
        r.reach = g ? model.reach (r.labels, *g) : 0.0;
        r.success = r.survivability * r.reach;
        r.path = std::move (path);
        return r;
    }

    namespace detail
    {
        enum class Objective
        {
            Success,
            ConstraintCount,
        };

        enum class Storage
        {
            Antichain,
            Single,
        };

        inline constexpr double kMonotoneSlack = 1e-12;

        class LabelSearch
        {
          public:
            LabelSearch (const Roadmap &rm, const ProbabilityModel &model, Objective objective, Storage storage, SearchOptions options)
                : rm_ (rm), model_ (model), objective_ (objective), storage_ (storage), options_ (options),
                  stored_ (rm.size ()), bestGoal_ (rm.size (), SearchRecord::npos)
            {
                if (rm.goals ().empty ())
                    throw NoSolution ("no solution: roadmap has no goal configurations");
                if (objective_ == Objective::Success && model_.universe () != rm_.universe ())
                    throw InvalidInput ("probability model and roadmap use different label universes");
            }

            /// Returns the index of the goal record popped first.
            std::size_t run (SearchStats &stats)
            {
                SearchRecord root;
                root.node = rm_.start ();
                root.labels = LabelSet (rm_.universe ().size ());
                fill (root);
                if (objective_ == Objective::Success && root.success <= 0.0 && options_.dropZeroSuccess)
                    throw NoSolution ("no solution: target has no probability mass");
                stored_[rm_.start ()].push_back (store (std::move (root)));

                while (!frontier_.empty ())
                {
                    const std::size_t idx = frontier_.top ();
                    frontier_.pop ();
                    if (!records_[idx].alive)
                        continue;
                    if (records_[idx].isGoal)
                    {
                        stats.recordsStored = records_.size ();
                        return idx;
                    }
                    ++stats.expansions;
                    expand (idx);
                }
                stats.recordsStored = records_.size ();
                throw NoSolution ();
            }

            [[nodiscard]] const std::vector<SearchRecord> &records () const noexcept { return records_; }

            [[nodiscard]] std::vector<std::size_t> pathTo (std::size_t idx) const
            {
                std::vector<std::size_t> path;
                for (std::size_t r = idx; r != SearchRecord::npos; r = records_[r].parent)
                    path.push_back (records_[r].node);
                std::reverse (path.begin (), path.end ());
                return path;
            }

          private:
            /// Strict weak "pops first" order for the frontier.
            [[nodiscard]] bool before (const SearchRecord &a, const SearchRecord &b) const noexcept
            {
                if (objective_ == Objective::Success && a.success != b.success)
                    return a.success > b.success;
                if (a.labelCount != b.labelCount)
                    return a.labelCount < b.labelCount;
                if (a.cost != b.cost)
                    return a.cost < b.cost;
                if (a.node != b.node)
                    return a.node < b.node;
                return a.isGoal && !b.isGoal;
            }

            struct Cmp
            {
                const LabelSearch *self;
                bool operator() (std::size_t a, std::size_t b) const
                {
                    const auto &ra = self->records_[a];
                    const auto &rb = self->records_[b];
                    if (self->before (ra, rb))
                        return false;
                    if (self->before (rb, ra))
                        return true;
                    return a > b; // FIFO among equals
                }
            };

            void fill (SearchRecord &r) const
            {
                r.labelCount = r.labels.count ();
                if (objective_ != Objective::Success)
                    return;
                r.survivability = model_.survivability (r.labels);
                r.remainingTargets = model_.remainingTargets (r.labels);
                r.reach = model_.reach (r.labels);
                r.success = r.survivability * r.reach;
            }

            std::size_t store (SearchRecord r)
            {
                records_.push_back (std::move (r));
                const std::size_t idx = records_.size () - 1;
                if (options_.trace)
                    options_.trace->push_back (records_.back ());
                frontier_.push (idx);
                return idx;
            }

            /// Whether stored record @p s makes candidate @p c redundant.
            [[nodiscard]] bool dominates (const SearchRecord &s, const SearchRecord &c) const
            {
                if (storage_ == Storage::Single)
                    return !before (c, s);
                if (!s.labels.isSubsetOf (c.labels))
                    return false;
                return objective_ == Objective::Success || s.cost <= c.cost;
            }

            void kill (std::size_t idx)
            {
                records_[idx].alive = false;
                if (records_[idx].twin != SearchRecord::npos)
                    records_[records_[idx].twin].alive = false;
            }

            void expand (std::size_t idx)
            {
                const std::size_t node = records_[idx].node;
                for (const Adjacent &adj : rm_.neighbors (node))
                {
                    if (!options_.pruneDominated && onPath (idx, adj.node))
                        continue;
                    const SearchRecord &parent = records_[idx];
                    const Edge &edge = rm_.edges ()[adj.edge];
                    SearchRecord child;
                    child.node = adj.node;
                    child.labels = parent.labels | edge.labels;
                    child.parent = idx;
                    child.cost = parent.cost + edge.length;
                    fill (child);

                    if (objective_ == Objective::Success)
                    {
                        if (child.success > parent.success + kMonotoneSlack || child.survivability > parent.survivability + kMonotoneSlack)
                            throw InvariantViolation ("success probability increased along a path extension");
                        if (options_.dropZeroSuccess && child.success <= 0.0)
                            continue;
                    }

                    const GoalSpec *goal = rm_.goalAt (adj.node);
                    std::optional<SearchRecord> goalRecord;
                    if (goal)
                    {
                        SearchRecord g = child;
                        g.isGoal = true;
                        if (objective_ == Objective::Success)
                        {
                            g.reach = model_.reach (g.labels, *goal);
                            g.success = g.survivability * g.reach;
                            if (g.reach > 0.0 && g.success > 0.0)
                                goalRecord = std::move (g);
                        }
                        else
                            goalRecord = std::move (g);
                    }

                    if (storage_ == Storage::Antichain)
                        admitAntichain (std::move (child), std::move (goalRecord));
                    else
                        admitSingle (std::move (child), std::move (goalRecord));
                }
            }

            [[nodiscard]] bool onPath (std::size_t idx, std::size_t node) const
            {
                for (std::size_t r = idx; r != SearchRecord::npos; r = records_[r].parent)
                    if (records_[r].node == node)
                        return true;
                return false;
            }

            void admitAntichain (SearchRecord child, std::optional<SearchRecord> goalRecord)
            {
                auto &slot = stored_[child.node];
                if (options_.pruneDominated)
                {
                    for (std::size_t s : slot)
                        if (records_[s].alive && dominates (records_[s], child))
                            return;
                    std::erase_if (slot, [&] (std::size_t s) {
                        if (!records_[s].alive)
                            return true;
                        if (dominates (child, records_[s]))
                        {
                            kill (s);
                            return true;
                        }
                        return false;
                    });
                }
                const std::size_t nodeIdx = child.node;
                const std::size_t id = store (std::move (child));
                stored_[nodeIdx].push_back (id);
                if (goalRecord)
                    records_[id].twin = store (std::move (*goalRecord));
            }

            void admitSingle (SearchRecord child, std::optional<SearchRecord> goalRecord)
            {
                const std::size_t nodeIdx = child.node;
                auto &slot = stored_[nodeIdx];
                const bool keepChild = slot.empty () || !records_[slot.front ()].alive || !dominates (records_[slot.front ()], child);
                if (keepChild)
                {
                    if (!slot.empty ())
                        records_[slot.front ()].alive = false;
                    slot.assign (1, store (std::move (child)));
                }
                if (goalRecord)
                {
                    std::size_t &best = bestGoal_[nodeIdx];
                    if (best == SearchRecord::npos || !records_[best].alive || !dominates (records_[best], *goalRecord))
                    {
                        if (best != SearchRecord::npos)
                            records_[best].alive = false;
                        best = store (std::move (*goalRecord));
                    }
                }
            }

            const Roadmap &rm_;
            const ProbabilityModel &model_;
            Objective objective_;
            Storage storage_;
            SearchOptions options_;
            std::vector<SearchRecord> records_;
            std::vector<std::vector<std::size_t>> stored_;
            std::vector<std::size_t> bestGoal_;
            std::priority_queue<std::size_t, std::vector<std::size_t>, Cmp> frontier_{Cmp{this}};
        };

        inline PlanResult runLabelSearch (const Roadmap &rm, const ProbabilityModel &model, Objective objective, Storage storage,
                                          PlannerKind kind, const SearchOptions &options, const ProbabilityModel &reportModel)
        {
            const auto t0 = std::chrono::steady_clock::now ();
            LabelSearch search (rm, model, objective, storage, options);
            SearchStats stats;
            const std::size_t goal = search.run (stats);
            PlanResult r = evaluatePath (rm, reportModel, search.pathTo (goal), kind);
            stats.wallTimeSeconds = std::chrono::duration<double> (std::chrono::steady_clock::now () - t0).count ();
            r.stats = stats;
            return r;
        }
    } // namespace detail

    /// Exact maximum-success search with label-set dominance pruning.
    [[nodiscard]] inline PlanResult maxSuccessExact (const Roadmap &rm, const ProbabilityModel &model, const SearchOptions &options = {})
    {
        return detail::runLabelSearch (rm, model, detail::Objective::Success, detail::Storage::Antichain, PlannerKind::MaxSuccessExact,
                                       options, model);
    }

    /// Keeps only the best record per (node, goal flag); no optimality guarantee.
    [[nodiscard]] inline PlanResult maxSuccessGreedy (const Roadmap &rm, const ProbabilityModel &model, const SearchOptions &options = {})
    {
        return detail::runLabelSearch (rm, model, detail::Objective::Success, detail::Storage::Single, PlannerKind::MaxSuccessGreedy,
                                       options, model);
    }

    /// Minimum number of distinct hit poses (target poses included), ties by cost.
    [[nodiscard]] inline PlanResult mcrExact (const Roadmap &rm, const ProbabilityModel &model, const SearchOptions &options = {})
    {
        return detail::runLabelSearch (rm, model, detail::Objective::ConstraintCount, detail::Storage::Antichain, PlannerKind::McrExact,
                                       options, model);
    }

    [[nodiscard]] inline PlanResult mcrGreedy (const Roadmap &rm, const ProbabilityModel &model, const SearchOptions &options = {})
    {
        return detail::runLabelSearch (rm, model, detail::Objective::ConstraintCount, detail::Storage::Single, PlannerKind::McrGreedy,
                                       options, model);
    }

    /// Label bits of each object's most likely hypothesis (ties: lowest index).
    [[nodiscard]] inline LabelSet mostLikelyLabels (const ProbabilityModel &model)
    {
        const LabelUniverse &u = model.universe ();
        LabelSet keep (u.size ());
        std::size_t b = 0;
        while (b < u.size ())
        {
            std::size_t best = b;
            std::size_t e = b;
            for (; e < u.size () && u[e].object == u[b].object; ++e)
                if (model.weight (e) > model.weight (best))
                    best = e;
            keep.insert (best);
            b = e;
        }
        return keep;
    }

    /**
     * @brief Copy of @p rm that only knows each object's most likely pose:
     * other labels are erased and only goals able to pick the most likely
     * target pose remain (with that pose as their sole target).
     */
    [[nodiscard]] inline Roadmap mostLikelyRoadmap (const Roadmap &rm, const ProbabilityModel &model)
    {
        const LabelSet keep = mostLikelyLabels (model);
        Roadmap out = rm;
        for (std::size_t e = 0; e < out.edges ().size (); ++e)
        {
            LabelSet l = out.edges ()[e].labels;
            l &= keep;
            out.setEdgeLabels (e, std::move (l));
        }
        const auto &tp = model.targetProbabilities ();
        int best = 0;
        for (std::size_t j = 1; j < tp.size (); ++j)
            if (tp[j] > tp[static_cast<std::size_t> (best)])
                best = static_cast<int> (j);
        std::vector<GoalSpec> goals;
        for (const GoalSpec &g : rm.goals ())
            if (std::find (g.targets.begin (), g.targets.end (), best) != g.targets.end ())
                goals.push_back ({g.node, {best}});
        out.setGoals (std::move (goals));
        return out;
    }

    [[nodiscard]] inline PlanResult mcrMlc (const Roadmap &rm, const ProbabilityModel &model, const SearchOptions &options = {})
    {
        const auto t0 = std::chrono::steady_clock::now ();
        const Roadmap filtered = mostLikelyRoadmap (rm, model);
        detail::LabelSearch search (filtered, model, detail::Objective::ConstraintCount, detail::Storage::Antichain, options);
        SearchStats stats;
        const std::size_t goal = search.run (stats);
        PlanResult r = evaluatePath (rm, model, search.pathTo (goal), PlannerKind::McrMlc);
        stats.wallTimeSeconds = std::chrono::duration<double> (std::chrono::steady_clock::now () - t0).count ();
        r.stats = stats;
        return r;
    }

    /// Shortest path by edge length to the nearest goal node, ignoring labels.
    [[nodiscard]] inline PlanResult osp (const Roadmap &rm, const ProbabilityModel &model)
    {
        const auto t0 = std::chrono::steady_clock::now ();
        constexpr double inf = std::numeric_limits<double>::infinity ();
        std::vector<double> dist (rm.size (), inf);
        std::vector<std::size_t> prev (rm.size (), SearchRecord::npos);
        using Item = std::pair<double, std::size_t>;
        std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
        dist[rm.start ()] = 0.0;
        pq.emplace (0.0, rm.start ());
        SearchStats stats;
        std::optional<std::size_t> found;
        while (!pq.empty ())
        {
            const auto [d, n] = pq.top ();
            pq.pop ();
            if (d > dist[n])
                continue;
            if (n != rm.start () && rm.goalAt (n))
            {
                found = n;
                break;
            }
            ++stats.expansions;
            for (const Adjacent &adj : rm.neighbors (n))
            {
                const double nd = d + rm.edges ()[adj.edge].length;
                if (nd < dist[adj.node])
                {
                    dist[adj.node] = nd;
                    prev[adj.node] = n;
                    pq.emplace (nd, adj.node);
                    ++stats.recordsStored;
                }
            }
        }
        if (!found)
            throw NoSolution ("no solution: no goal reachable from the start");
        std::vector<std::size_t> path;
        for (std::size_t n = *found; n != SearchRecord::npos; n = prev[n])
            path.push_back (n);
        std::reverse (path.begin (), path.end ());
        PlanResult r = evaluatePath (rm, model, std::move (path), PlannerKind::Osp);
        stats.wallTimeSeconds = std::chrono::duration<double> (std::chrono::steady_clock::now () - t0).count ();
        r.stats = stats;
        return r;
    }

    [[nodiscard]] inline PlanResult plan (PlannerKind kind, const Roadmap &rm, const ProbabilityModel &model, const SearchOptions &options = {})
    {
        switch (kind)
        {
        case PlannerKind::MaxSuccessExact: return maxSuccessExact (rm, model, options);
        case PlannerKind::MaxSuccessGreedy: return maxSuccessGreedy (rm, model, options);
        case PlannerKind::McrExact: return mcrExact (rm, model, options);
        case PlannerKind::McrGreedy: return mcrGreedy (rm, model, options);
        case PlannerKind::McrMlc: return mcrMlc (rm, model, options);
        case PlannerKind::Osp: return osp (rm, model);
        }
        throw InvalidInput ("unknown planner");
    }
} // namespace smcr
