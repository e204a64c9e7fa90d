// smcr: scene generation, roadmap construction, planning, execution,
// Monte-Carlo validation, benchmarks and reduction checks.
//
// Exit status: 0 success, 1 no solution (or a failed check), 2 input error.

#include <smcr/smcr.hpp>

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

using namespace smcr;

namespace
{
    constexpr int kExitOk = 0;
    constexpr int kExitNoSolution = 1;
    constexpr int kExitInput = 2;

    struct Args
    {
        std::string scenario;
        std::string scene;
        std::string gt;
        std::string roadmap;
        std::string plan;
        std::string planner{"max-success-exact"};
        std::string config;
        std::string instance;
        std::string out;
        std::string truthOut;
        std::string instanceOut;
        std::string sampling{"uniform"};
        int k{4};
        int level{4};
        std::uint64_t seed{1};
        std::size_t samples{1000};
        std::size_t trials{100000};
        std::size_t jobs{1};
        double resolution{kDefaultResolution};
        double existence{1.0};
        double xi{0.5};
        std::optional<double> graspPosition;
        std::optional<double> graspOrientationDeg;
        bool ignoreTargetCollisions{false};
        bool audit{false};
    };

    std::string fmt (const char *f, auto... args)
    {
        char buf[256];
        std::snprintf (buf, sizeof buf, f, args...);
        return buf;
    }

    void requireOut (const Args &a)
    {
        if (a.out.empty ())
            throw InvalidInput ("--out is required");
    }

    GraspTolerance graspFrom (const Args &a, GraspTolerance base)
    {
        if (a.graspPosition)
            base.position = *a.graspPosition;
        if (a.graspOrientationDeg)
            base.orientation = degToRad (*a.graspOrientationDeg);
        if (base.position < 0.0 || base.orientation < 0.0)
            throw InvalidInput ("grasp tolerances must be non-negative");
        return base;
    }

    std::string labelList (const std::vector<LabelId> &labels)
    {
        std::string s;
        for (const LabelId &l : labels)
            s += (s.empty () ? "" : " ") + fmt ("(%d,%d)", l.object, l.hypothesis);
        return s.empty () ? "none" : s;
    }

    // ------------------------------------------------------------------

    int genScene (const Args &a)
    {
        requireOut (a);
        Scenario sc;
        if (!a.gt.empty ())
        {
            const GroundTruthDocument d = groundTruthFromJson (readJsonFile (a.gt));
            if (!d.workspace)
                throw InvalidInput ("ground truth file has no workspace");
            sc = {"custom", *d.workspace, d.truth};
        }
        else if (!a.scenario.empty ())
            sc = scenarioByName (a.scenario);
        else
            throw InvalidInput ("gen-scene needs --scenario or --gt");
        HypothesisOptions ho;
        ho.nonTargetExistence = a.existence;
        if (a.sampling == "uniform")
            ho.sampling = PoseSampling::Uniform;
        else if (a.sampling == "center-weighted")
            ho.sampling = PoseSampling::CenterWeighted;
        else
            throw InvalidInput ("unknown sampling '" + a.sampling + "'");
        if (a.k < 1)
            throw InvalidInput ("--k must be at least 1");
        sc.workspace.grasp = graspFrom (a, sc.workspace.grasp);
        const BeliefScene belief =
            generateHypotheses (sc.truth, static_cast<std::size_t> (a.k), a.level, splitSeed (a.seed, {hashTag ("belief")}), ho);
        writeJsonFile (a.out, toJson (belief, sc.workspace));
        if (!a.truthOut.empty ())
            writeJsonFile (a.truthOut, toJson (sc.truth, sc.workspace));
        std::size_t hyps = 0;
        for (const ObjectBelief &o : belief.objects)
            hyps += o.hypotheses.size ();
        std::cout << "scene: " << belief.objects.size () << " objects, " << hyps << " pose hypotheses -> " << a.out << "\n";
        return kExitOk;
    }

    int buildRoadmapCmd (const Args &a)
    {
        requireOut (a);
        if (a.scene.empty ())
            throw InvalidInput ("build-roadmap needs --scene");
        const SceneDocument d = sceneFromJson (readJsonFile (a.scene));
        if (!d.workspace)
            throw InvalidInput ("scene file has no workspace");
        const Workspace &w = *d.workspace;
        RoadmapOptions ro;
        ro.resolution = a.resolution;
        ro.start = w.start;
        Roadmap rm = buildRoadmap (w.robot, d.scene.staticObstacles, w.bounds, a.samples, splitSeed (a.seed, {hashTag ("roadmap")}), ro);
        const auto injected = injectGraspGoals (rm, d.scene, a.resolution);
        labelEdges (rm, d.scene, a.resolution);
        computeGoals (rm, d.scene, graspFrom (a, w.grasp));
        writeJsonFile (a.out, toJson (rm));
        std::cout << "roadmap: " << rm.size () << " nodes (" << injected.size () << " grasp nodes), " << rm.edges ().size () << " edges, "
                  << rm.goals ().size () << " goals -> " << a.out << "\n";
        return kExitOk;
    }

    int planCmd (const Args &a)
    {
        if (a.roadmap.empty () || a.scene.empty ())
            throw InvalidInput ("plan needs --roadmap and --scene");
        const PlannerKind kind = parsePlanner (a.planner);
        const Roadmap rm = roadmapFromJson (readJsonFile (a.roadmap));
        const SceneDocument d = sceneFromJson (readJsonFile (a.scene));
        const ProbabilityModel model = ProbabilityModel::fromScene (d.scene, rm.universe ());
        const PlanResult r = plan (kind, rm, model);
        const PlanDocument doc = makePlanDocument (rm, r);
        if (!a.out.empty ())
            writeJsonFile (a.out, toJson (doc));
        std::cout << "planner: " << plannerName (kind) << "\n"
                  << fmt ("S: %.6f\nreach: %.6f\nsucc: %.6f\ncost: %.6f\n", r.survivability, r.reach, r.success, r.cost)
                  << "labels: " << labelList (doc.labels) << "\n"
                  << "path: " << r.path.size () << " nodes\n";
        return kExitOk;
    }

    int execCmd (const Args &a)
    {
        if (a.plan.empty () || a.gt.empty ())
            throw InvalidInput ("exec needs --plan and --gt");
        const PlanDocument p = planFromJson (readJsonFile (a.plan));
        const GroundTruthDocument g = groundTruthFromJson (readJsonFile (a.gt));
        ExecutionOptions eo;
        eo.resolution = a.resolution;
        eo.tolerance = graspFrom (a, g.workspace ? g.workspace->grasp : GraspTolerance{});
        eo.countTargetCollisions = !a.ignoreTargetCollisions;
        const ExecutionOutcome o = executePath (p.robot, p.configurations, g.truth, eo);
        if (!a.out.empty ())
            writeJsonFile (a.out, toJson (o));
        std::cout << "collided: " << o.numCollided << "\nreached target: " << (o.reachedTarget ? "yes" : "no")
                  << "\nsuccess: " << (o.success ? "yes" : "no") << fmt ("\ncost: %.6f\n", o.pathCost);
        return kExitOk;
    }

    int validateCmd (const Args &a)
    {
        if (a.plan.empty () || a.scene.empty ())
            throw InvalidInput ("validate needs --plan and --scene");
        const PlanDocument p = planFromJson (readJsonFile (a.plan));
        const SceneDocument d = sceneFromJson (readJsonFile (a.scene));
        ExecutionOptions eo;
        eo.resolution = a.resolution;
        eo.tolerance = graspFrom (a, d.workspace ? d.workspace->grasp : GraspTolerance{});
        eo.countTargetCollisions = !a.ignoreTargetCollisions;
        const MonteCarloReport r = monteCarloSuccess (p.robot, p.configurations, d.scene, a.trials, a.seed, eo);
        if (!a.out.empty ())
            writeJsonFile (a.out, toJson (r, p.success));
        std::cout << fmt ("analytic succ: %.6f\nempirical: %.6f (%zu/%zu)\n99%% CI: [%.6f, %.6f]\n", p.success, r.empirical, r.successes, r.trials,
                          r.ci.lo, r.ci.hi)
                  << "analytic inside CI: " << (r.ci.contains (p.success) ? "yes" : "no") << "\n";
        return kExitOk;
    }

    int benchCmd (const Args &a, bool seedGiven, bool jobsGiven)
    {
        requireOut (a);
        if (a.config.empty ())
            throw InvalidInput ("bench needs --config");
        std::ifstream in (a.config);
        if (!in)
            throw InvalidInput ("cannot open '" + a.config + "'");
        std::stringstream text;
        text << in.rdbuf ();
        BenchmarkConfig cfg = parseBenchmarkConfig (text.str ());
        if (seedGiven)
            cfg.seed = a.seed;
        if (jobsGiven)
            cfg.jobs = a.jobs;
        const BenchmarkResult res = runBenchmark (cfg, {a.audit});
        const std::filesystem::path dir (a.out);
        writeTextFile (dir / "metrics.csv", metricsCsv (res.rows));
        writeJsonFile (dir / "raw.json", rawReport (res));
        std::cout << "bench: " << res.rows.size () << " rows, " << res.trials.size () << " planner runs -> " << (dir / "metrics.csv").string ()
                  << "\n";
        return kExitOk;
    }

    int reduceCheckCmd (const Args &a)
    {
        McrInstance inst = a.instance.empty () ? randomMcrInstance (a.seed) : mcrInstanceFromJson (readJsonFile (a.instance));
        if (!a.instanceOut.empty ())
            writeJsonFile (a.instanceOut, toJson (inst));
        const ReductionReport r = checkReduction (inst, a.xi);
        if (!a.out.empty ())
            writeJsonFile (a.out, toJson (r));
        if (r.solvableBruteForce)
            std::cout << "m: brute force " << r.mBruteForce << ", max-success-exact " << r.mStochastic << ", mcr-exact " << r.mMcrExact << "\n"
                      << fmt ("succ: %.15g (expected %.15g)\n", r.success, r.expectedSuccess);
        else
            std::cout << "unsolvable: brute force " << r.solvableBruteForce << ", max-success-exact " << r.solvableStochastic << ", mcr-exact "
                      << r.solvableMcrExact << "\n";
        std::cout << (r.consistent () ? "consistent" : "INCONSISTENT") << "\n";
        return r.consistent () ? kExitOk : kExitNoSolution;
    }
} // namespace

int main (int argc, char **argv)
{
    CLI::App app{"Risk-aware picking under discrete pose uncertainty"};
    app.require_subcommand (1);
    Args a;
    auto grasp = [&] (CLI::App *s) {
        s->add_option ("--grasp-position", a.graspPosition, "Grasp position tolerance");
        s->add_option ("--grasp-orientation-deg", a.graspOrientationDeg, "Grasp orientation tolerance in degrees");
    };

    CLI::App *gen = app.add_subcommand ("gen-scene", "Ground truth -> belief scene file");
    gen->add_option ("--scenario", a.scenario, "Bundled scenario (narrow-passage, clutter, arch)");
    gen->add_option ("--gt", a.gt, "Ground-truth file with a workspace");
    gen->add_option ("--k", a.k, "Hypotheses per object");
    gen->add_option ("--level", a.level, "Uncertainty level 1-7");
    gen->add_option ("--seed", a.seed, "Root seed");
    gen->add_option ("--existence", a.existence, "Existence probability of non-target objects");
    gen->add_option ("--sampling", a.sampling, "uniform or center-weighted");
    gen->add_option ("--truth-out", a.truthOut, "Also write the ground truth here");
    gen->add_option ("--out", a.out, "Scene file to write");
    grasp (gen);

    CLI::App *build = app.add_subcommand ("build-roadmap", "Scene -> labelled roadmap file");
    build->add_option ("--scene", a.scene, "Scene file");
    build->add_option ("--samples", a.samples, "Roadmap samples");
    build->add_option ("--seed", a.seed, "Root seed");
    build->add_option ("--resolution", a.resolution, "Swept-check resolution");
    build->add_option ("--out", a.out, "Roadmap file to write");
    grasp (build);

    CLI::App *planApp = app.add_subcommand ("plan", "Roadmap + scene -> plan file");
    planApp->add_option ("--roadmap", a.roadmap, "Roadmap file");
    planApp->add_option ("--scene", a.scene, "Scene file");
    planApp->add_option ("--planner", a.planner,
                         "max-success-exact, max-success-greedy, mcr-exact, mcr-greedy, mcr-mlc or osp");
    planApp->add_option ("--out", a.out, "Plan file to write");

    CLI::App *exec = app.add_subcommand ("exec", "Plan + ground truth -> outcome");
    exec->add_option ("--plan", a.plan, "Plan file");
    exec->add_option ("--gt", a.gt, "Ground-truth file");
    exec->add_option ("--resolution", a.resolution, "Swept-check resolution");
    exec->add_flag ("--ignore-target-collisions", a.ignoreTargetCollisions, "Do not count contact with the target");
    exec->add_option ("--out", a.out, "Outcome file to write");
    grasp (exec);

    CLI::App *validate = app.add_subcommand ("validate", "Plan + scene -> Monte-Carlo report");
    validate->add_option ("--plan", a.plan, "Plan file");
    validate->add_option ("--scene", a.scene, "Scene file");
    validate->add_option ("--trials", a.trials, "Sampled worlds");
    validate->add_option ("--seed", a.seed, "Root seed");
    validate->add_option ("--resolution", a.resolution, "Swept-check resolution");
    validate->add_flag ("--ignore-target-collisions", a.ignoreTargetCollisions, "Do not count contact with the target");
    validate->add_option ("--out", a.out, "Report file to write");
    grasp (validate);

    CLI::App *bench = app.add_subcommand ("bench", "Config file -> metrics tables");
    bench->add_option ("--config", a.config, "key = value benchmark config");
    CLI::Option *seedOpt = bench->add_option ("--seed", a.seed, "Override the config seed");
    CLI::Option *jobsOpt = bench->add_option ("--jobs", a.jobs, "Worker threads");
    bench->add_flag ("--audit", a.audit, "Audit every search record of the success planners");
    bench->add_option ("--out", a.out, "Output directory");

    CLI::App *reduce = app.add_subcommand ("reduce-check", "MCR instance -> equivalence report");
    reduce->add_option ("--instance", a.instance, "MCR instance file (random instance from --seed if absent)");
    reduce->add_option ("--seed", a.seed, "Seed of the random instance");
    reduce->add_option ("--xi", a.xi, "Probability given to every pose");
    reduce->add_option ("--instance-out", a.instanceOut, "Write the instance here");
    reduce->add_option ("--out", a.out, "Report file to write");

    try
    {
        app.parse (argc, argv);
    }
    catch (const CLI::CallForHelp &e)
    {
        return app.exit (e);
    }
    catch (const CLI::ParseError &e)
    {
        (void) app.exit (e);
        return kExitInput;
    }

    try
    {
        if (gen->parsed ())
            return genScene (a);
        if (build->parsed ())
            return buildRoadmapCmd (a);
        if (planApp->parsed ())
            return planCmd (a);
        if (exec->parsed ())
            return execCmd (a);
        if (validate->parsed ())
            return validateCmd (a);
        if (bench->parsed ())
            return benchCmd (a, seedOpt->count () > 0, jobsOpt->count () > 0);
        if (reduce->parsed ())
            return reduceCheckCmd (a);
    }
    catch (const NoSolution &e)
    {
        std::cout << e.what () << "\n";
        return kExitNoSolution;
    }
    catch (const UnsolvableInstance &e)
    {
        std::cout << "no solution: " << e.what () << "\n";
        return kExitNoSolution;
    }
    catch (const InvalidInput &e)
    {
        std::cerr << "error: " << e.what () << "\n";
        return kExitInput;
    }
    catch (const SamplingFailure &e)
    {
        std::cerr << "error: " << e.what () << "\n";
        return kExitInput;
    }
    catch (const Json::exception &e)
    {
        std::cerr << "error: malformed JSON: " << e.what () << "\n";
        return kExitInput;
    }
    catch (const std::exception &e)
    {
        std::cerr << "error: " << e.what () << "\n";
        return kExitInput;
    }
    return kExitInput;
}
