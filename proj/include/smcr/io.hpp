#pragma once
/**
 * @file    io.hpp
 * @brief   JSON documents for scenes, ground truths, roadmaps, plans and
 *          execution reports.
 *
 * Doubles are written in shortest round-trip form, so every document reads
 * back to a value equal to the one written.
 */

#include <smcr/errors.hpp>
#include <smcr/execution.hpp>
#include <smcr/geometry.hpp>
#include <smcr/label_set.hpp>
#include <smcr/planner.hpp>
#include <smcr/roadmap.hpp>
#include <smcr/scenarios.hpp>
#include <smcr/scene.hpp>

#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace smcr
{
    using Json = nlohmann::json;

    // ------------------------------------------------------------------
    // Files
    // ------------------------------------------------------------------

    [[nodiscard]] inline Json readJsonFile (const std::filesystem::path &path)
    {
        std::ifstream in (path);
        if (!in)
            throw InvalidInput ("cannot open '" + path.string () + "'");
        try
        {
            return Json::parse (in);
        }
        catch (const Json::exception &e)
        {
            throw InvalidInput ("'" + path.string () + "': " + e.what ());
        }
    }

    inline void writeTextFile (const std::filesystem::path &path, const std::string &text)
    {
        if (path.has_parent_path ())
            std::filesystem::create_directories (path.parent_path ());
        std::ofstream out (path, std::ios::binary);
        if (!out)
            throw InvalidInput ("cannot write '" + path.string () + "'");
        out << text;
        if (!out)
            throw InvalidInput ("write to '" + path.string () + "' failed");
    }

    inline void writeJsonFile (const std::filesystem::path &path, const Json &j) { writeTextFile (path, j.dump (2) + "\n"); }

    namespace detail
    {
        /// Field access with a readable error instead of a json exception.
        inline const Json &field (const Json &j, const char *key)
        {
            if (!j.is_object () || !j.contains (key))
                throw InvalidInput (std::string ("missing field '") + key + "'");
            return j.at (key);
        }

        template <typename T> T get (const Json &j, const char *key)
        {
            try
            {
                return field (j, key).get<T> ();
            }
            catch (const Json::exception &e)
            {
                throw InvalidInput (std::string ("field '") + key + "': " + e.what ());
            }
        }

        inline void expectFormat (const Json &j, const char *format)
        {
            if (get<std::string> (j, "format") != format)
                throw InvalidInput (std::string ("expected a '") + format + "' document");
        }
    } // namespace detail

    // ------------------------------------------------------------------
    // Geometry
    // ------------------------------------------------------------------

    [[nodiscard]] inline Json toJson (Vec2 v) { return Json::array ({v.x, v.y}); }

    [[nodiscard]] inline Vec2 vec2FromJson (const Json &j)
    {
        if (!j.is_array () || j.size () != 2)
            throw InvalidInput ("expected a 2D point [x, y]");
        return {j[0].get<double> (), j[1].get<double> ()};
    }

    [[nodiscard]] inline Json toJson (const Pose2 &p) { return {{"x", p.x}, {"y", p.y}, {"theta", p.theta}}; }

    [[nodiscard]] inline Pose2 pose2FromJson (const Json &j)
    {
        return Pose2 (detail::get<double> (j, "x"), detail::get<double> (j, "y"), detail::get<double> (j, "theta"));
    }

    [[nodiscard]] inline Json toJson (const Shape &s)
    {
        if (const auto *d = std::get_if<Disc> (&s.variant ()))
            return {{"type", "disc"}, {"radius", d->radius}};
        Json verts = Json::array ();
        for (const Vec2 &v : std::get<ConvexPolygon> (s.variant ()).vertices)
            verts.push_back (toJson (v));
        return {{"type", "polygon"}, {"vertices", verts}};
    }

    [[nodiscard]] inline Shape shapeFromJson (const Json &j)
    {
        const auto type = detail::get<std::string> (j, "type");
        if (type == "disc")
            return Shape::disc (detail::get<double> (j, "radius"));
        if (type == "polygon")
        {
            ConvexPolygon p;
            for (const Json &v : detail::field (j, "vertices"))
                p.vertices.push_back (vec2FromJson (v));
            return Shape (std::move (p));
        }
        throw InvalidInput ("unknown shape type '" + type + "'");
    }

    [[nodiscard]] inline Json toJson (const PlacedShape &p) { return {{"shape", toJson (p.shape)}, {"pose", toJson (p.pose)}}; }

    [[nodiscard]] inline PlacedShape placedShapeFromJson (const Json &j)
    {
        return {shapeFromJson (detail::field (j, "shape")), pose2FromJson (detail::field (j, "pose"))};
    }

    [[nodiscard]] inline Json toJson (const RobotModel &r)
    {
        if (const auto *d = std::get_if<DiscRobot> (&r.variant ()))
            return {{"type", "disc"}, {"radius", d->radius}};
        const auto &a = std::get<PlanarArm> (r.variant ());
        return {{"type", "planar-arm"},
                {"base", toJson (a.base)},
                {"link_lengths", a.linkLengths},
                {"link_width", a.linkWidth},
                {"tool_length", a.toolLength}};
    }

    [[nodiscard]] inline RobotModel robotFromJson (const Json &j)
    {
        const auto type = detail::get<std::string> (j, "type");
        if (type == "disc")
            return RobotModel (DiscRobot{detail::get<double> (j, "radius")});
        if (type == "planar-arm")
            return RobotModel (PlanarArm{vec2FromJson (detail::field (j, "base")), detail::get<std::vector<double>> (j, "link_lengths"),
                                         detail::get<double> (j, "link_width"), j.value ("tool_length", 0.0)});
        throw InvalidInput ("unknown robot type '" + type + "'");
    }

    [[nodiscard]] inline Json toJson (const Configuration &q) { return q.values (); }

    [[nodiscard]] inline Configuration configurationFromJson (const Json &j)
    {
        if (!j.is_array ())
            throw InvalidInput ("configuration must be an array of numbers");
        return Configuration (j.get<std::vector<double>> ());
    }

    [[nodiscard]] inline Json toJson (const Workspace &w)
    {
        return {{"robot", toJson (w.robot)},
                {"bounds", {{"lo", w.bounds.lo}, {"hi", w.bounds.hi}}},
                {"start", toJson (w.start)},
                {"grasp", {{"position", w.grasp.position}, {"orientation", w.grasp.orientation}}}};
    }

    [[nodiscard]] inline Workspace workspaceFromJson (const Json &j)
    {
        Workspace w;
        w.robot = robotFromJson (detail::field (j, "robot"));
        const Json &b = detail::field (j, "bounds");
        w.bounds = {detail::get<std::vector<double>> (b, "lo"), detail::get<std::vector<double>> (b, "hi")};
        w.start = w.robot.normalize (configurationFromJson (detail::field (j, "start")));
        const Json &g = detail::field (j, "grasp");
        w.grasp = {detail::get<double> (g, "position"), detail::get<double> (g, "orientation")};
        if (w.bounds.lo.size () != w.robot.dof () || w.bounds.hi.size () != w.robot.dof ())
            throw InvalidInput ("workspace bounds do not match the robot's degrees of freedom");
        return w;
    }

    // ------------------------------------------------------------------
    // Scenes
    // ------------------------------------------------------------------

    namespace detail
    {
        inline Json staticsToJson (const std::vector<PlacedShape> &s)
        {
            Json out = Json::array ();
            for (const auto &p : s)
                out.push_back (toJson (p));
            return out;
        }

        inline std::vector<PlacedShape> staticsFromJson (const Json &j)
        {
            std::vector<PlacedShape> out;
            if (j.contains ("static_obstacles"))
                for (const Json &p : j.at ("static_obstacles"))
                    out.push_back (placedShapeFromJson (p));
            return out;
        }
    } // namespace detail

    /// A scene document: the belief plus the workspace it lives in, if known.
    struct SceneDocument
    {
        std::optional<Workspace> workspace;
        BeliefScene scene;
    };

    [[nodiscard]] inline Json toJson (const BeliefScene &scene, const std::optional<Workspace> &workspace = std::nullopt)
    {
        Json objects = Json::array ();
        for (const ObjectBelief &o : scene.objects)
        {
            Json hyps = Json::array ();
            for (const PoseHypothesis &h : o.hypotheses)
                hyps.push_back ({{"x", h.pose.x}, {"y", h.pose.y}, {"theta", h.pose.theta}, {"prob", h.prob}});
            objects.push_back ({{"id", o.id}, {"shape", toJson (o.shape)}, {"existence", o.existence}, {"hypotheses", hyps}});
        }
        Json j = {{"format", "smcr-scene"}, {"static_obstacles", detail::staticsToJson (scene.staticObstacles)}, {"objects", objects},
                  {"target_id", scene.targetId}};
        if (workspace)
            j["workspace"] = toJson (*workspace);
        return j;
    }

    [[nodiscard]] inline SceneDocument sceneFromJson (const Json &j)
    {
        detail::expectFormat (j, "smcr-scene");
        SceneDocument d;
        if (j.contains ("workspace"))
            d.workspace = workspaceFromJson (j.at ("workspace"));
        d.scene.staticObstacles = detail::staticsFromJson (j);
        d.scene.targetId = detail::get<int> (j, "target_id");
        for (const Json &o : detail::field (j, "objects"))
        {
            ObjectBelief b;
            b.id = detail::get<int> (o, "id");
            b.shape = shapeFromJson (detail::field (o, "shape"));
            b.existence = detail::get<double> (o, "existence");
            for (const Json &h : detail::field (o, "hypotheses"))
                b.hypotheses.push_back ({pose2FromJson (h), detail::get<double> (h, "prob")});
            d.scene.objects.push_back (std::move (b));
        }
        d.scene.validate ();
        return d;
    }

    struct GroundTruthDocument
    {
        std::optional<Workspace> workspace;
        GroundTruthScene truth;
    };

    [[nodiscard]] inline Json toJson (const GroundTruthScene &gt, const std::optional<Workspace> &workspace = std::nullopt)
    {
        Json placements = Json::array ();
        for (const ObjectPlacement &p : gt.placements)
            placements.push_back ({{"id", p.id}, {"shape", toJson (p.shape)}, {"x", p.pose.x}, {"y", p.pose.y}, {"theta", p.pose.theta}});
        Json j = {{"format", "smcr-ground-truth"}, {"static_obstacles", detail::staticsToJson (gt.staticObstacles)}, {"placements", placements},
                  {"target_id", gt.targetId}};
        if (workspace)
            j["workspace"] = toJson (*workspace);
        return j;
    }

    [[nodiscard]] inline GroundTruthDocument groundTruthFromJson (const Json &j)
    {
        detail::expectFormat (j, "smcr-ground-truth");
        GroundTruthDocument d;
        if (j.contains ("workspace"))
            d.workspace = workspaceFromJson (j.at ("workspace"));
        d.truth.staticObstacles = detail::staticsFromJson (j);
        d.truth.targetId = detail::get<int> (j, "target_id");
        for (const Json &p : detail::field (j, "placements"))
            d.truth.placements.push_back ({detail::get<int> (p, "id"), shapeFromJson (detail::field (p, "shape")), pose2FromJson (p)});
        d.truth.validate ();
        return d;
    }

    // ------------------------------------------------------------------
    // Roadmaps
    // ------------------------------------------------------------------

    namespace detail
    {
        inline Json labelIdsToJson (const std::vector<LabelId> &ids)
        {
            Json out = Json::array ();
            for (const LabelId &l : ids)
                out.push_back (Json::array ({l.object, l.hypothesis}));
            return out;
        }

        inline std::vector<LabelId> labelIdsFromJson (const Json &j)
        {
            std::vector<LabelId> out;
            for (const Json &l : j)
            {
                if (!l.is_array () || l.size () != 2)
                    throw InvalidInput ("label must be an [object, hypothesis] pair");
                out.push_back ({l[0].get<int> (), l[1].get<int> ()});
            }
            return out;
        }
    } // namespace detail

    [[nodiscard]] inline Json toJson (const Roadmap &rm)
    {
        const LabelUniverse &u = rm.universe ();
        Json nodes = Json::array ();
        for (std::size_t i = 0; i < rm.size (); ++i)
            nodes.push_back ({{"id", i}, {"q", toJson (rm.nodes ()[i])}});
        Json edges = Json::array ();
        for (const Edge &e : rm.edges ())
            edges.push_back ({{"u", e.u}, {"v", e.v}, {"length", e.length}, {"labels", detail::labelIdsToJson (u.decode (e.labels))}});
        Json goals = Json::array ();
        for (const GoalSpec &g : rm.goals ())
            goals.push_back ({{"node", g.node}, {"J", g.targets}});
        return {{"format", "smcr-roadmap"},
                {"robot", toJson (rm.robot ())},
                {"universe", {{"target_id", u.targetId ()}, {"labels", detail::labelIdsToJson (u.labels ())}}},
                {"nodes", nodes},
                {"edges", edges},
                {"start", rm.start ()},
                {"goals", goals},
                {"unreachable_targets", rm.unreachableTargets ()}};
    }

    [[nodiscard]] inline Roadmap roadmapFromJson (const Json &j)
    {
        detail::expectFormat (j, "smcr-roadmap");
        Roadmap rm (robotFromJson (detail::field (j, "robot")));
        const Json &uj = detail::field (j, "universe");
        rm.setUniverse (LabelUniverse (detail::labelIdsFromJson (detail::field (uj, "labels")), detail::get<int> (uj, "target_id")));
        const Json &nodes = detail::field (j, "nodes");
        for (std::size_t i = 0; i < nodes.size (); ++i)
        {
            if (detail::get<std::size_t> (nodes[i], "id") != i)
                throw InvalidInput ("roadmap node ids must be 0..n-1 in order");
            rm.addNode (configurationFromJson (detail::field (nodes[i], "q")));
        }
        for (const Json &e : detail::field (j, "edges"))
        {
            LabelSet labels (rm.universe ().size ());
            for (const LabelId &l : detail::labelIdsFromJson (detail::field (e, "labels")))
                labels.insert (rm.universe ().bitOf (l));
            const double length = detail::get<double> (e, "length");
            if (length < 0.0)
                throw InvalidInput ("edge length must be non-negative");
            rm.addEdgeWithLength (detail::get<std::size_t> (e, "u"), detail::get<std::size_t> (e, "v"), length, std::move (labels));
        }
        rm.setStart (detail::get<std::size_t> (j, "start"));
        std::vector<GoalSpec> goals;
        for (const Json &g : detail::field (j, "goals"))
            goals.push_back ({detail::get<std::size_t> (g, "node"), detail::get<std::vector<int>> (g, "J")});
        rm.setGoals (std::move (goals));
        rm.setUnreachableTargets (j.value ("unreachable_targets", std::vector<int>{}));
        return rm;
    }

    // ------------------------------------------------------------------
    // Plans and reports
    // ------------------------------------------------------------------

    /// A plan as written to disk: enough to execute it without the roadmap.
    struct PlanDocument
    {
        PlannerKind planner{PlannerKind::MaxSuccessExact};
        RobotModel robot;
        std::vector<std::size_t> path;
        std::vector<Configuration> configurations;
        std::vector<LabelId> labels;
        double survivability{0.0};
        double reach{0.0};
        double success{0.0};
        double cost{0.0};
        SearchStats stats;
    };

    [[nodiscard]] inline PlanDocument makePlanDocument (const Roadmap &rm, const PlanResult &r)
    {
        return {r.planner, rm.robot (), r.path, pathConfigurations (rm, r.path), rm.universe ().decode (r.labels),
                r.survivability, r.reach, r.success, r.cost, r.stats};
    }

    [[nodiscard]] inline Json toJson (const PlanDocument &p)
    {
        Json configs = Json::array ();
        for (const auto &q : p.configurations)
            configs.push_back (toJson (q));
        return {{"format", "smcr-plan"},
                {"planner", std::string (plannerName (p.planner))},
                {"robot", toJson (p.robot)},
                {"path", p.path},
                {"configurations", configs},
                {"labels", detail::labelIdsToJson (p.labels)},
                {"survivability", p.survivability},
                {"reach", p.reach},
                {"success", p.success},
                {"cost", p.cost},
                {"stats",
                 {{"expansions", p.stats.expansions}, {"records_stored", p.stats.recordsStored}, {"wall_time_s", p.stats.wallTimeSeconds}}}};
    }

    [[nodiscard]] inline PlanDocument planFromJson (const Json &j)
    {
        detail::expectFormat (j, "smcr-plan");
        PlanDocument p;
        p.planner = parsePlanner (detail::get<std::string> (j, "planner"));
        p.robot = robotFromJson (detail::field (j, "robot"));
        p.path = detail::get<std::vector<std::size_t>> (j, "path");
        for (const Json &q : detail::field (j, "configurations"))
            p.configurations.push_back (p.robot.normalize (configurationFromJson (q)));
        if (p.configurations.empty () || p.configurations.size () != p.path.size ())
            throw InvalidInput ("plan needs one configuration per path node");
        p.labels = detail::labelIdsFromJson (detail::field (j, "labels"));
        p.survivability = detail::get<double> (j, "survivability");
        p.reach = detail::get<double> (j, "reach");
        p.success = detail::get<double> (j, "success");
        p.cost = detail::get<double> (j, "cost");
        const Json &s = detail::field (j, "stats");
        p.stats = {detail::get<std::size_t> (s, "expansions"), detail::get<std::size_t> (s, "records_stored"),
                   detail::get<double> (s, "wall_time_s")};
        return p;
    }

    [[nodiscard]] inline Json toJson (const ExecutionOutcome &o)
    {
        return {{"format", "smcr-outcome"},
                {"collided_objects", o.collidedObjects},
                {"num_collided", o.numCollided},
                {"reached_target", o.reachedTarget},
                {"success", o.success},
                {"path_cost", o.pathCost}};
    }

    [[nodiscard]] inline ExecutionOutcome outcomeFromJson (const Json &j)
    {
        detail::expectFormat (j, "smcr-outcome");
        ExecutionOutcome o;
        o.collidedObjects = detail::get<std::vector<int>> (j, "collided_objects");
        o.numCollided = detail::get<std::size_t> (j, "num_collided");
        o.reachedTarget = detail::get<bool> (j, "reached_target");
        o.success = detail::get<bool> (j, "success");
        o.pathCost = detail::get<double> (j, "path_cost");
        return o;
    }

    [[nodiscard]] inline Json toJson (const MonteCarloReport &r, double analytic)
    {
        return {{"format", "smcr-validation"},
                {"trials", r.trials},
                {"successes", r.successes},
                {"empirical", r.empirical},
                {"ci99", {r.ci.lo, r.ci.hi}},
                {"analytic", analytic},
                {"analytic_inside_ci", r.ci.contains (analytic)}};
    }
} // namespace smcr
