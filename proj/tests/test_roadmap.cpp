#include "oracles.hpp"

#include <gtest/gtest.h>

using namespace smcr;

namespace
{
    const RobotModel kDisc (DiscRobot{0.1});

    /// Two nodes joined by one straight edge along the x axis.
    Roadmap segment (Vec2 a, Vec2 b)
    {
        Roadmap rm (kDisc);
        rm.addNode (Configuration{a.x, a.y});
        rm.addNode (Configuration{b.x, b.y});
        rm.addEdge (0, 1);
        return rm;
    }

    BeliefScene sceneWithTargetAt (Vec2 p)
    {
        BeliefScene s;
        s.targetId = 0;
        s.objects.push_back ({0, Shape::disc (0.2), 1.0, {{Pose2 (p.x, p.y, 0.0), 1.0}}});
        return s;
    }
} // namespace

TEST (Roadmap, PrmStarNeighbourCounts)
{
    // ceil(e * (1 + 1/d) * ln n)
    EXPECT_EQ (prmStarNeighbors (5000, 7), 27U);
    EXPECT_EQ (prmStarNeighbors (100, 2), 19U);
    EXPECT_EQ (prmStarNeighbors (1000, 3), 26U);
    EXPECT_THROW ((void) prmStarNeighbors (1, 2), InvalidInput);
}

TEST (Roadmap, EmptyWorldKeepsEverySample)
{
    const ConfigBounds b{{-1.0, -1.0}, {1.0, 1.0}};
    const Roadmap rm = buildRoadmap (kDisc, {}, b, 100, 5);
    EXPECT_EQ (rm.size (), 100U);
    for (const Edge &e : rm.edges ())
    {
        EXPECT_LT (e.u, e.v);
        EXPECT_DOUBLE_EQ (e.length, cDistance (kDisc, rm.nodes ()[e.u], rm.nodes ()[e.v]));
        EXPECT_TRUE (rm.findEdge (e.u, e.v).has_value ());
        EXPECT_TRUE (rm.findEdge (e.v, e.u).has_value ());
    }
    // Every node links to at least its k nearest.
    for (std::size_t n = 0; n < rm.size (); ++n)
        EXPECT_GE (rm.neighbors (n).size (), prmStarNeighbors (100, 2));
}

TEST (Roadmap, StaticObstaclesPruneNodesAndEdges)
{
    const std::vector<PlacedShape> statics{{Shape::box (0.4, 3.0), Pose2 (0.0, 0.0, 0.0)}};
    const ConfigBounds b{{-1.0, -1.0}, {1.0, 1.0}};
    const Roadmap rm = buildRoadmap (kDisc, statics, b, 200, 8);
    EXPECT_LE (rm.size (), 200U);
    for (const Configuration &q : rm.nodes ())
        EXPECT_FALSE (collidesAt (kDisc, q, statics[0]));
    for (const Edge &e : rm.edges ())
        EXPECT_FALSE (segmentCollides (kDisc, rm.nodes ()[e.u], rm.nodes ()[e.v], statics[0], kDefaultResolution));
}

TEST (Roadmap, DeterministicUnderSeed)
{
    const Scenario sc = narrowPassageScenario ();
    RoadmapOptions o;
    o.start = sc.workspace.start;
    const Roadmap a = buildRoadmap (sc.workspace.robot, sc.truth.staticObstacles, sc.workspace.bounds, 150, 3, o);
    o.jobs = 3;
    const Roadmap b = buildRoadmap (sc.workspace.robot, sc.truth.staticObstacles, sc.workspace.bounds, 150, 3, o);
    EXPECT_EQ (a.nodes (), b.nodes ());
    ASSERT_EQ (a.edges ().size (), b.edges ().size ());
    for (std::size_t e = 0; e < a.edges ().size (); ++e)
        EXPECT_EQ (std::pair (a.edges ()[e].u, a.edges ()[e].v), std::pair (b.edges ()[e].u, b.edges ()[e].v));
    EXPECT_EQ (a.nodes ()[0], sc.workspace.start);
}

TEST (Roadmap, SamplingFailureIsReported)
{
    const std::vector<PlacedShape> statics{{Shape::box (10.0, 10.0), Pose2 (0.0, 0.0, 0.0)}};
    RoadmapOptions o;
    o.maxAttemptsPerSample = 50;
    EXPECT_THROW ((void) buildRoadmap (kDisc, statics, ConfigBounds{{-1, -1}, {1, 1}}, 10, 1, o), SamplingFailure);
}

TEST (Labels, NoObjectsMeansNoLabels)
{
    Roadmap rm = buildRoadmap (kDisc, {}, ConfigBounds{{-1, -1}, {1, 1}}, 50, 2);
    BeliefScene s = sceneWithTargetAt ({50.0, 50.0});
    labelEdges (rm, s);
    for (const Edge &e : rm.edges ())
        EXPECT_TRUE (e.labels.empty ());
}

TEST (Labels, EdgeThroughOnlyHypothesis)
{
    Roadmap rm = segment ({-2, 0}, {2, 0});
    BeliefScene s = sceneWithTargetAt ({0.0, 10.0});
    s.objects.push_back ({1, Shape::disc (0.5), 0.5, {{Pose2 (0.0, 0.0, 0.0), 0.5}}});
    labelEdges (rm, s);
    const auto ids = rm.universe ().decode (rm.edges ()[0].labels);
    ASSERT_EQ (ids.size (), 1U);
    EXPECT_EQ (ids[0], (LabelId{1, 0}));
    const ProbabilityModel m = ProbabilityModel::fromScene (s, rm.universe ());
    EXPECT_DOUBLE_EQ (m.weight (rm.universe ().bitOf ({1, 0})), 0.5);
}

TEST (Labels, TwoHypothesesOfOneObject)
{
    Roadmap rm = segment ({-2, 0}, {2, 0});
    BeliefScene s = sceneWithTargetAt ({0.0, 10.0});
    s.objects.push_back ({1, Shape::disc (0.3), 1.0, {{Pose2 (-1.0, 0.0, 0.0), 0.4}, {Pose2 (1.0, 0.1, 0.0), 0.4}, {Pose2 (0, 5, 0), 0.2}}});
    labelEdges (rm, s);
    EXPECT_EQ (rm.universe ().decode (rm.edges ()[0].labels), (std::vector<LabelId>{{1, 0}, {1, 1}}));
}

TEST (Labels, IndependentOfObjectOrder)
{
    const Scenario sc = clutterScenario ();
    const BeliefScene s = generateHypotheses (sc.truth, 3, 5, 12);
    BeliefScene permuted = s;
    std::reverse (permuted.objects.begin (), permuted.objects.end ());
    RoadmapOptions o;
    o.start = sc.workspace.start;
    const Roadmap skeleton = buildRoadmap (sc.workspace.robot, sc.truth.staticObstacles, sc.workspace.bounds, 200, 4, o);
    Roadmap a = skeleton, b = skeleton;
    labelEdges (a, s);
    labelEdges (b, permuted, kDefaultResolution, 2);
    for (std::size_t e = 0; e < a.edges ().size (); ++e)
        EXPECT_EQ (a.universe ().decode (a.edges ()[e].labels), b.universe ().decode (b.edges ()[e].labels));
}

TEST (Labels, ResolveToSceneHypotheses)
{
    const Scenario sc = narrowPassageScenario ();
    const BeliefScene s = generateHypotheses (sc.truth, 4, 4, 5);
    RoadmapOptions o;
    o.start = sc.workspace.start;
    Roadmap rm = buildRoadmap (sc.workspace.robot, sc.truth.staticObstacles, sc.workspace.bounds, 300, 4, o);
    labelEdges (rm, s);
    const ProbabilityModel m = ProbabilityModel::fromScene (s, rm.universe ());
    std::size_t labelled = 0;
    for (const Edge &e : rm.edges ())
        for (const LabelId &l : rm.universe ().decode (e.labels))
        {
            ++labelled;
            const ObjectBelief *ob = s.find (l.object);
            ASSERT_NE (ob, nullptr);
            ASSERT_LT (static_cast<std::size_t> (l.hypothesis), ob->hypotheses.size ());
            EXPECT_EQ (m.weight (rm.universe ().bitOf (l)), ob->hypotheses[static_cast<std::size_t> (l.hypothesis)].prob);
        }
    EXPECT_GT (labelled, 0U);
}

TEST (Goals, ExactNodeGetsItsHypothesis)
{
    Roadmap rm = segment ({-2, 0}, {1, 1});
    const BeliefScene s = sceneWithTargetAt ({1.0, 1.0});
    labelEdges (rm, s);
    computeGoals (rm, s, GraspTolerance{});
    ASSERT_EQ (rm.goals ().size (), 1U);
    EXPECT_EQ (rm.goals ()[0], (GoalSpec{1, {0}}));
}

TEST (Goals, NodeCoversSubsetOfHypotheses)
{
    Roadmap rm (kDisc);
    rm.addNode (Configuration{-5.0, 0.0});
    rm.addNode (Configuration{0.0, 0.0});
    rm.addEdge (0, 1);
    BeliefScene s;
    s.targetId = 0;
    s.objects.push_back ({0, Shape::disc (0.2), 1.0, {{Pose2 (0.05, 0, 0), 0.5}, {Pose2 (3, 0, 0), 0.3}, {Pose2 (0, -0.05, 0), 0.2}}});
    labelEdges (rm, s);
    computeGoals (rm, s, GraspTolerance{0.1, degToRad (30.0)});
    ASSERT_EQ (rm.goals ().size (), 1U);
    EXPECT_EQ (rm.goals ()[0].targets, (std::vector<int>{0, 2}));
    EXPECT_EQ (rm.unreachableTargets (), (std::vector<int>{1}));
}

TEST (Goals, ZeroToleranceWithoutExactNodeIsUnsolvable)
{
    Roadmap rm = segment ({-2, 0}, {1, 1});
    const BeliefScene s = sceneWithTargetAt ({1.0, 1.05});
    labelEdges (rm, s);
    EXPECT_THROW (computeGoals (rm, s, GraspTolerance{0.0, 0.0}), UnsolvableInstance);
}

TEST (Goals, StartIsNeverAGoal)
{
    Roadmap rm = segment ({1, 1}, {-2, 0});
    const BeliefScene s = sceneWithTargetAt ({1.0, 1.0});
    labelEdges (rm, s);
    EXPECT_THROW (computeGoals (rm, s, GraspTolerance{}), UnsolvableInstance);
}

TEST (Goals, ArmOrientationMatters)
{
    const Scenario sc = narrowPassageScenario ();
    const Pose2 t = sc.truth.target ().pose;
    const auto ik = inverseKinematics (sc.workspace.robot, t);
    ASSERT_FALSE (ik.empty ());
    const Pose2 ee = forwardKinematics (sc.workspace.robot, ik[0]).endEffector;
    EXPECT_TRUE (withinGrasp (sc.workspace.robot, ee, t, kDeskGrasp));
    const Pose2 turned (t.x, t.y, t.theta + degToRad (40.0));
    EXPECT_FALSE (withinGrasp (sc.workspace.robot, ee, turned, kDeskGrasp));
}

TEST (Goals, InjectedGraspNodesBecomeGoals)
{
    for (std::string_view name : kScenarioNames)
    {
        const Scenario sc = scenarioByName (name);
        const BeliefScene s = generateHypotheses (sc.truth, 3, 4, 1);
        RoadmapOptions o;
        o.start = sc.workspace.start;
        Roadmap rm = buildRoadmap (sc.workspace.robot, sc.truth.staticObstacles, sc.workspace.bounds, 200, 1, o);
        const auto added = injectGraspGoals (rm, s, kDefaultResolution);
        EXPECT_FALSE (added.empty ()) << name;
        labelEdges (rm, s);
        computeGoals (rm, s, sc.workspace.grasp);
        for (std::size_t n : added)
            EXPECT_NE (rm.goalAt (n), nullptr) << name;
    }
}
