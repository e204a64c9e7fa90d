#pragma once
// Hand-encoded graphs shared by the unit and acceptance tests.
//
// Both counterexample graphs use nodes s=0, a=1, b=2, m=3, g=4 with edges
// s-a, s-b, a-m, b-m, m-g of unit length. The target (id 0) has one pose of
// probability 1, picked at g.

#include "oracles.hpp"

#include <vector>

namespace fixtures
{
    using namespace smcr;

    inline constexpr std::size_t S = 0, A = 1, B = 2, M = 3, G = 4;

    struct EdgeSpec
    {
        std::size_t u, v;
        std::vector<LabelId> labels;
    };

    inline oracle::Instance fromEdges (BeliefScene scene, const std::vector<EdgeSpec> &edges, std::size_t nodes, std::size_t start,
                                       std::vector<GoalSpec> goals)
    {
        oracle::Instance inst;
        scene.validate ();
        const LabelUniverse u = LabelUniverse::fromScene (scene);
        Roadmap rm (RobotModel (DiscRobot{1.0}));
        for (std::size_t i = 0; i < nodes; ++i)
            rm.addNode (Configuration{static_cast<double> (i), 0.0});
        rm.setUniverse (u);
        for (const EdgeSpec &e : edges)
        {
            LabelSet l (u.size ());
            for (const LabelId &id : e.labels)
                l.insert (u.bitOf (id));
            rm.addEdgeWithLength (e.u, e.v, 1.0, std::move (l));
        }
        rm.setStart (start);
        rm.setGoals (std::move (goals));
        inst.model = ProbabilityModel::fromScene (scene, u);
        inst.scene = std::move (scene);
        inst.roadmap = std::move (rm);
        return inst;
    }

    inline ObjectBelief certainTarget () { return {0, Shape::disc (1.0), 1.0, {{Pose2 (0, 0, 0), 1.0}}}; }

    inline ObjectBelief object (int id, std::vector<double> probs)
    {
        ObjectBelief o{id, Shape::disc (1.0), 0.0, {}};
        for (double p : probs)
        {
            o.hypotheses.push_back ({Pose2 (static_cast<double> (o.hypotheses.size ()), 0, 0), p});
            o.existence += p;
        }
        return o;
    }

    /// The b route repeats one label on two edges. Two objects: p1 = (1,0)
    /// with 0.3 on a-m, p2 = (2,0) with 0.4 on b-m and m-g. With @p oneObject
    /// both poses belong to object 1.
    inline oracle::Instance repeatedLabelGraph (bool oneObject = false)
    {
        BeliefScene s;
        s.targetId = 0;
        s.objects.push_back (certainTarget ());
        LabelId p1{1, 0}, p2{2, 0};
        if (oneObject)
        {
            s.objects.push_back (object (1, {0.3, 0.4}));
            p2 = {1, 1};
        }
        else
        {
            s.objects.push_back (object (1, {0.3}));
            s.objects.push_back (object (2, {0.4}));
        }
        return fromEdges (s, {{S, A, {}}, {S, B, {}}, {A, M, {p1}}, {B, M, {p2}}, {M, G, {p2}}}, 5, S, {{G, {0}}});
    }

    /// The a route hits two poses of one object: (1,0) 0.3 on a-m,
    /// (2,0) 0.4 on b-m, (1,1) 0.3 on m-g.
    inline oracle::Instance sameObjectGraph ()
    {
        BeliefScene s;
        s.targetId = 0;
        s.objects.push_back (certainTarget ());
        s.objects.push_back (object (1, {0.3, 0.3}));
        s.objects.push_back (object (2, {0.4}));
        return fromEdges (s, {{S, A, {}}, {S, B, {}}, {A, M, {{1, 0}}}, {B, M, {{2, 0}}}, {M, G, {{1, 1}}}}, 5, S, {{G, {0}}});
    }
} // namespace fixtures
