#pragma once
/**
 * @file    scene.hpp
 * @brief   Discrete pose-hypothesis beliefs, greedy pose clustering and
 *          simulated hypothesis generation around a ground truth.
 */

#include <smcr/errors.hpp>
#include <smcr/geometry.hpp>
#include <smcr/random.hpp>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

namespace smcr
{
    /// Tolerance on sum_j Pr(p_i^j) == X_i.
    inline constexpr double kNormalizationTolerance = 1e-9;

    /// Objects whose detection confidence does not exceed this are dropped.
    inline constexpr double kDefaultExistenceThreshold = 0.3;

    struct PoseHypothesis
    {
        Pose2 pose;
        double prob{0.0};
        friend bool operator== (const PoseHypothesis &, const PoseHypothesis &) = default;
    };

    struct ObjectBelief
    {
        int id{0};
        Shape shape;
        double existence{1.0};
        std::vector<PoseHypothesis> hypotheses;

        [[nodiscard]] double probabilitySum () const noexcept
        {
            double s = 0.0;
            for (const auto &h : hypotheses)
                s += h.prob;
            return s;
        }

        /// Index of the most likely hypothesis; ties go to the lowest index.
        [[nodiscard]] std::size_t mostLikely () const
        {
            if (hypotheses.empty ())
                throw InvalidInput ("object " + std::to_string (id) + " has no hypotheses");
            std::size_t best = 0;
            for (std::size_t j = 1; j < hypotheses.size (); ++j)
                if (hypotheses[j].prob > hypotheses[best].prob)
                    best = j;
            return best;
        }

        void validate () const
        {
            if (existence < 0.0 || existence > 1.0)
                throw InvalidInput ("object " + std::to_string (id) + ": existence probability outside [0,1]");
            for (const auto &h : hypotheses)
                if (!(h.prob > 0.0))
                    throw InvalidInput ("object " + std::to_string (id) + ": hypothesis probabilities must be positive");
            if (std::abs (probabilitySum () - existence) > kNormalizationTolerance)
                throw InvalidInput ("object " + std::to_string (id) + ": hypothesis probabilities do not sum to the existence probability");
        }

        friend bool operator== (const ObjectBelief &, const ObjectBelief &) = default;
    };

    struct BeliefScene
    {
        std::vector<PlacedShape> staticObstacles;
        std::vector<ObjectBelief> objects;
        int targetId{0};

        [[nodiscard]] const ObjectBelief *find (int id) const noexcept
        {
            for (const auto &o : objects)
                if (o.id == id)
                    return &o;
            return nullptr;
        }

        [[nodiscard]] const ObjectBelief &target () const
        {
            const ObjectBelief *t = find (targetId);
            if (!t)
                throw InvalidInput ("target object " + std::to_string (targetId) + " missing from scene");
            return *t;
        }

        void validate () const
        {
            std::set<int> ids;
            for (const auto &o : objects)
            {
                if (!ids.insert (o.id).second)
                    throw InvalidInput ("duplicate object id " + std::to_string (o.id));
                o.validate ();
            }
            const ObjectBelief &t = target ();
            if (t.existence != 1.0)
                throw InvalidInput ("target existence probability must be 1");
            if (t.hypotheses.empty ())
                throw InvalidInput ("target has no pose hypotheses");
        }

        friend bool operator== (const BeliefScene &, const BeliefScene &) = default;
    };

    struct ObjectPlacement
    {
        int id{0};
        Shape shape;
        Pose2 pose;
        friend bool operator== (const ObjectPlacement &, const ObjectPlacement &) = default;
    };

    struct GroundTruthScene
    {
        std::vector<PlacedShape> staticObstacles;
        std::vector<ObjectPlacement> placements;
        int targetId{0};

        [[nodiscard]] const ObjectPlacement *find (int id) const noexcept
        {
            for (const auto &p : placements)
                if (p.id == id)
                    return &p;
            return nullptr;
        }

        [[nodiscard]] const ObjectPlacement &target () const
        {
            const ObjectPlacement *t = find (targetId);
            if (!t)
                throw InvalidInput ("ground truth lacks the target object");
            return *t;
        }

        void validate () const
        {
            std::set<int> ids;
            for (const auto &p : placements)
                if (!ids.insert (p.id).second)
                    throw InvalidInput ("duplicate object id " + std::to_string (p.id));
            (void) target ();
        }

        friend bool operator== (const GroundTruthScene &, const GroundTruthScene &) = default;
    };

    // ------------------------------------------------------------------
    // Clustering of scored hypotheses
    // ------------------------------------------------------------------

    struct ScoredHypothesis
    {
        int objectId{0};
        Pose2 pose;
        double score{0.0};
    };

    struct ClusterThresholds
    {
        double translation{2.5};
        double rotation{degToRad (15.0)};
    };

    /**
     * @brief Greedy score-ordered clustering of raw pose hypotheses.
     *
     * Hypotheses are visited by (score desc, input index asc). One within both
     * thresholds of an already retained representative is folded into the
     * first such representative, adding its score. The top @p k
     * representatives by cluster score are kept and rescaled to sum to
     * @p existence.
     */
    [[nodiscard]] inline ObjectBelief clusterHypotheses (std::span<const ScoredHypothesis> raw, const Shape &shape, std::size_t k,
                                                         double existence, ClusterThresholds thresholds = {})
    {
        if (raw.empty ())
            throw InvalidInput ("clusterHypotheses: no hypotheses");
        if (k < 1)
            throw InvalidInput ("clusterHypotheses: K must be at least 1");
        if (!(thresholds.translation > 0.0) || !(thresholds.rotation > 0.0))
            throw InvalidInput ("clusterHypotheses: thresholds must be positive");
        if (existence < 0.0 || existence > 1.0)
            throw InvalidInput ("clusterHypotheses: existence outside [0,1]");
        for (const auto &h : raw)
            if (h.score < 0.0)
                throw InvalidInput ("clusterHypotheses: negative score");

        std::vector<std::size_t> order (raw.size ());
        std::iota (order.begin (), order.end (), std::size_t{0});
        std::stable_sort (order.begin (), order.end (), [&] (std::size_t a, std::size_t b) { return raw[a].score > raw[b].score; });

        struct Cluster
        {
            Pose2 pose;
            double score;
        };
        std::vector<Cluster> clusters;
        for (std::size_t idx : order)
        {
            const ScoredHypothesis &h = raw[idx];
            auto it = std::find_if (clusters.begin (), clusters.end (), [&] (const Cluster &c) {
                return translationDistance (c.pose, h.pose) <= thresholds.translation &&
                       rotationDistance (c.pose, h.pose) <= thresholds.rotation;
            });
            if (it != clusters.end ())
                it->score += h.score;
            else
                clusters.push_back ({h.pose, h.score});
        }

        std::stable_sort (clusters.begin (), clusters.end (), [] (const Cluster &a, const Cluster &b) { return a.score > b.score; });
        if (clusters.size () > k)
            clusters.resize (k);

        double total = 0.0;
        for (const auto &c : clusters)
            total += c.score;

        ObjectBelief out;
        out.id = raw.front ().objectId;
        out.shape = shape;
        out.existence = existence;
        if (existence == 0.0)
            return out;
        for (const auto &c : clusters)
        {
            const double p = total > 0.0 ? existence * c.score / total : existence / static_cast<double> (clusters.size ());
            if (p > 0.0)
                out.hypotheses.push_back ({c.pose, p});
        }
        return out;
    }

    /// Raw detector output for one object.
    struct Detection
    {
        int objectId{0};
        Shape shape;
        double existence{0.0};
        std::vector<ScoredHypothesis> hypotheses;
    };

    /**
     * @brief Builds a belief scene from detector output.
     *
     * Objects with existence at or below @p existenceThreshold are dropped.
     * The target is always kept with existence 1.
     */
    [[nodiscard]] inline BeliefScene ingestDetections (std::vector<PlacedShape> staticObstacles, std::span<const Detection> detections,
                                                       int targetId, std::size_t k, ClusterThresholds thresholds = {},
                                                       double existenceThreshold = kDefaultExistenceThreshold)
    {
        BeliefScene scene;
        scene.staticObstacles = std::move (staticObstacles);
        scene.targetId = targetId;
        for (const Detection &d : detections)
        {
            const bool isTarget = d.objectId == targetId;
            if (!isTarget && !(d.existence > existenceThreshold))
                continue;
            if (d.hypotheses.empty ())
            {
                if (isTarget)
                    throw InvalidInput ("target detection has no pose hypotheses");
                continue;
            }
            std::vector<ScoredHypothesis> raw = d.hypotheses;
            for (auto &h : raw)
                h.objectId = d.objectId;
            scene.objects.push_back (clusterHypotheses (raw, d.shape, k, isTarget ? 1.0 : d.existence, thresholds));
        }
        scene.validate ();
        return scene;
    }

    // ------------------------------------------------------------------
    // Simulated hypotheses
    // ------------------------------------------------------------------

    struct LevelBounds
    {
        double translation{0.0}; ///< per-axis bound, length units
        double rotation{0.0};    ///< radians
    };

    inline constexpr int kMinLevel = 1;
    inline constexpr int kMaxLevel = 7;

    /// Noise box of an uncertainty level: 0.5 units / 5 deg at level 1,
    /// 3.5 units / 35 deg at level 7, linear in between.
    [[nodiscard]] inline LevelBounds levelBounds (int level)
    {
        if (level < kMinLevel || level > kMaxLevel)
            throw InvalidInput ("uncertainty level must be in [1,7]");
        const double f = static_cast<double> (level - kMinLevel) / static_cast<double> (kMaxLevel - kMinLevel);
        return {0.5 + f * (3.5 - 0.5), degToRad (5.0 + f * (35.0 - 5.0))};
    }

    enum class PoseSampling
    {
        Uniform,        ///< uniform inside the level box
        CenterWeighted, ///< triangular per axis, denser near the truth
    };

    struct HypothesisOptions
    {
        double nonTargetExistence{1.0};
        PoseSampling sampling{PoseSampling::Uniform};
    };

    /// Bound-normalized pose error: max of per-axis translation and rotation
    /// errors divided by their level bounds.
    [[nodiscard]] inline double normalizedPoseError (const Pose2 &truth, const Pose2 &p, const LevelBounds &b)
    {
        return std::max ({std::abs (p.x - truth.x) / b.translation, std::abs (p.y - truth.y) / b.translation,
                          rotationDistance (truth, p) / b.rotation});
    }

    namespace detail
    {
        inline double sampleOffset (Rng &rng, double bound, PoseSampling mode)
        {
            if (mode == PoseSampling::Uniform)
                return uniformIn (rng, -bound, bound);
            return bound * (uniform01 (rng) - uniform01 (rng));
        }
    } // namespace detail

    /**
     * @brief Simulates perception output around a ground truth.
     *
     * Each present object receives @p k poses sampled inside the level box
     * around its true pose, weighted by 1 / (1 + normalized error) and
     * rescaled to its existence probability (1 for the target).
     */
    [[nodiscard]] inline BeliefScene generateHypotheses (const GroundTruthScene &gt, std::size_t k, int level, std::uint64_t seed,
                                                         HypothesisOptions options = {})
    {
        if (k < 1)
            throw InvalidInput ("generateHypotheses: K must be at least 1");
        const LevelBounds b = levelBounds (level);
        if (options.nonTargetExistence <= 0.0 || options.nonTargetExistence > 1.0)
            throw InvalidInput ("generateHypotheses: non-target existence must be in (0,1]");
        gt.validate ();

        BeliefScene scene;
        scene.staticObstacles = gt.staticObstacles;
        scene.targetId = gt.targetId;
        for (const ObjectPlacement &p : gt.placements)
        {
            Rng rng (splitSeed (seed, {hashTag ("hypotheses"), static_cast<std::uint64_t> (static_cast<std::int64_t> (p.id))}));
            ObjectBelief o;
            o.id = p.id;
            o.shape = p.shape;
            o.existence = p.id == gt.targetId ? 1.0 : options.nonTargetExistence;
            std::vector<double> weights;
            for (std::size_t j = 0; j < k; ++j)
            {
                const double dx = detail::sampleOffset (rng, b.translation, options.sampling);
                const double dy = detail::sampleOffset (rng, b.translation, options.sampling);
                const double dt = detail::sampleOffset (rng, b.rotation, options.sampling);
                const Pose2 pose (p.pose.x + dx, p.pose.y + dy, p.pose.theta + dt);
                weights.push_back (1.0 / (1.0 + normalizedPoseError (p.pose, pose, b)));
                o.hypotheses.push_back ({pose, 0.0});
            }
            const double total = std::accumulate (weights.begin (), weights.end (), 0.0);
            for (std::size_t j = 0; j < k; ++j)
                o.hypotheses[j].prob = o.existence * weights[j] / total;
            scene.objects.push_back (std::move (o));
        }
        scene.validate ();
        return scene;
    }

    // ------------------------------------------------------------------
    // Ground-truth sampling
    // ------------------------------------------------------------------

    /// Absent marker in a sampled world.
    inline constexpr int kAbsent = -1;

    /**
     * @brief Draws one world from the belief: for each object (in scene
     * order) the hypothesis index it occupies, or kAbsent.
     */
    [[nodiscard]] inline std::vector<int> sampleHypothesisIndices (const BeliefScene &scene, Rng &rng)
    {
        std::vector<int> out;
        out.reserve (scene.objects.size ());
        for (const ObjectBelief &o : scene.objects)
        {
            // A single draw over [0,1): the first X_i of mass picks a pose.
            const double u = uniform01 (rng);
            double acc = 0.0;
            int chosen = kAbsent;
            for (std::size_t j = 0; j < o.hypotheses.size (); ++j)
            {
                acc += o.hypotheses[j].prob;
                if (u < acc)
                {
                    chosen = static_cast<int> (j);
                    break;
                }
            }
            if (o.id == scene.targetId && chosen == kAbsent && !o.hypotheses.empty ())
                chosen = static_cast<int> (o.hypotheses.size ()) - 1; // rounding slack, X_t = 1
            out.push_back (chosen);
        }
        return out;
    }

    [[nodiscard]] inline GroundTruthScene realize (const BeliefScene &scene, std::span<const int> indices)
    {
        GroundTruthScene gt;
        gt.staticObstacles = scene.staticObstacles;
        gt.targetId = scene.targetId;
        for (std::size_t i = 0; i < scene.objects.size (); ++i)
            if (indices[i] != kAbsent)
            {
                const ObjectBelief &o = scene.objects[i];
                gt.placements.push_back ({o.id, o.shape, o.hypotheses[static_cast<std::size_t> (indices[i])].pose});
            }
        return gt;
    }

    [[nodiscard]] inline GroundTruthScene sampleGroundTruth (const BeliefScene &scene, std::uint64_t seed)
    {
        Rng rng (splitSeed (seed, {hashTag ("ground-truth")}));
        const auto idx = sampleHypothesisIndices (scene, rng);
        return realize (scene, idx);
    }
} // namespace smcr
