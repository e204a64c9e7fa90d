// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 on any FAIL.

#include "fixtures.hpp"
#include "oracles.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>

using namespace smcr;

namespace
{
    constexpr double kExactTol = 1e-12;
    constexpr double kNormTol = 1e-9;

    struct Verdict
    {
        bool pass{false};
        std::string detail;
    };

    std::string fmt (const char *f, auto... args)
    {
        char buf[512];
        std::snprintf (buf, sizeof buf, f, args...);
        return buf;
    }

    bool near (double a, double b, double tol = kExactTol) { return std::abs (a - b) <= tol; }

    // ------------------------------------------------------------------

    Verdict counterexampleGraphs ()
    {
        const auto left = fixtures::repeatedLabelGraph ();
        const PlanResult le = maxSuccessExact (left.roadmap, left.model);
        const PlanResult lg = maxSuccessGreedy (left.roadmap, left.model);
        const auto right = fixtures::sameObjectGraph ();
        const PlanResult re = maxSuccessExact (right.roadmap, right.model);
        const PlanResult rg = maxSuccessGreedy (right.roadmap, right.model);
        const std::vector<std::size_t> blue{fixtures::S, fixtures::B, fixtures::M, fixtures::G};
        const bool ok = le.path == blue && near (le.survivability, 0.6) && lg.survivability < 0.6 && near (re.survivability, 0.42) &&
                        near (rg.survivability, 0.40);
        return {ok, fmt ("left exact S=%.15g greedy S=%.15g; right exact S=%.15g greedy S=%.15g", le.survivability, lg.survivability,
                         re.survivability, rg.survivability)};
    }

    Verdict bruteForceExactness ()
    {
        constexpr std::uint64_t kInstances = 250;
        std::size_t agree = 0, solvable = 0;
        double worst = 0.0;
        for (std::uint64_t seed = 0; seed < kInstances; ++seed)
        {
            const auto inst = oracle::randomInstance (seed, 12, 4, 3);
            const double brute = oracle::bruteForceMaxSuccess (inst).success;
            double got = 0.0;
            try
            {
                got = maxSuccessExact (inst.roadmap, inst.model).success;
            }
            catch (const NoSolution &)
            {
            }
            worst = std::max (worst, std::abs (got - brute));
            agree += near (got, brute);
            solvable += brute > 0.0;
        }
        return {agree == kInstances,
                fmt ("%zu/%zu instances agree (%zu solvable), max |diff| = %.3g", agree, std::size_t (kInstances), solvable, worst)};
    }

    Verdict monteCarloAgreement ()
    {
        constexpr std::size_t kTrials = 100000;
        constexpr std::size_t kMinPlans = 20;
        const std::array<std::pair<int, int>, 2> beliefs{{{4, 4}, {7, 7}}};
        const std::array<PlannerKind, 4> planners{PlannerKind::MaxSuccessExact, PlannerKind::MaxSuccessGreedy, PlannerKind::McrExact,
                                                  PlannerKind::Osp};
        std::size_t plans = 0, inside = 0;
        double worstExact = 0.0;
        std::string misses;
        for (std::string_view name : kScenarioNames)
        {
            const Scenario sc = scenarioByName (name);
            RoadmapOptions ro;
            ro.start = sc.workspace.start;
            const Roadmap skeleton = buildRoadmap (sc.workspace.robot, sc.truth.staticObstacles, sc.workspace.bounds, 400,
                                                   splitSeed (3, {hashTag (name)}), ro);
            for (const auto &[k, level] : beliefs)
            {
                const BeliefScene belief =
                    generateHypotheses (sc.truth, static_cast<std::size_t> (k), level, splitSeed (3, {hashTag (name), std::uint64_t (k)}));
                Roadmap rm = skeleton;
                injectGraspGoals (rm, belief, kDefaultResolution);
                labelEdges (rm, belief);
                computeGoals (rm, belief, sc.workspace.grasp);
                const ProbabilityModel model = ProbabilityModel::fromScene (belief, rm.universe ());
                ExecutionOptions eo;
                eo.tolerance = sc.workspace.grasp;
                for (PlannerKind p : planners)
                {
                    PlanResult r;
                    try
                    {
                        r = plan (p, rm, model);
                    }
                    catch (const NoSolution &)
                    {
                        continue;
                    }
                    const auto path = pathConfigurations (rm, r.path);
                    const MonteCarloReport mc = monteCarloSuccess (
                        rm.robot (), path, belief, kTrials, splitSeed (2, {hashTag (name), std::uint64_t (k), hashTag (plannerName (p))}), eo);
                    const double exact = oracle::enumerateSuccess (belief, BeliefExecutor (rm.robot (), path, belief, eo));
                    worstExact = std::max (worstExact, std::abs (exact - r.success));
                    ++plans;
                    if (mc.ci.contains (r.success) && near (exact, r.success, kNormTol))
                        ++inside;
                    else
                        misses += fmt (" [%s K=%d L=%d %s succ=%.4f emp=%.4f]", name.data (), k, level, plannerName (p).data (), r.success,
                                       mc.empirical);
                }
            }
        }
        return {plans >= kMinPlans && inside == plans,
                fmt ("%zu/%zu plans inside the 99%% Wilson CI of %zu trials; max |analytic - enumerated| = %.3g", inside, plans, kTrials,
                     worstExact) +
                    misses};
    }

    Verdict reductionCheck ()
    {
        constexpr std::uint64_t kInstances = 120;
        std::size_t ok = 0, total = 0, unsolvable = 0;
        for (std::uint64_t seed = 0; seed < kInstances; ++seed)
        {
            const McrInstance inst = randomMcrInstance (seed);
            for (double xi : {0.2, 0.5})
            {
                const ReductionReport r = checkReduction (inst, xi);
                ++total;
                ok += r.consistent (kExactTol);
                unsolvable += !r.solvableBruteForce;
            }
        }
        return {ok == total, fmt ("%zu/%zu (instance, xi) pairs consistent, %zu unsolvable", ok, total, unsolvable)};
    }

    /// Benchmark protocol fixed by the acceptance criteria.
    BenchmarkConfig sweepConfig ()
    {
        BenchmarkConfig cfg;
        cfg.scenarios = {"narrow-passage", "clutter", "arch"};
        cfg.kValues = {1, 4, 7};
        cfg.levels = {1, 4, 7};
        cfg.roadmapsPerGt = 5;
        cfg.samples = 1000;
        cfg.seed = 1;
        cfg.timing = false;
        cfg.jobs = 1;
        return cfg;
    }

    const MetricsRow &rowOf (const std::vector<MetricsRow> &rows, PlannerKind p, const std::string &scenario, int k, int level)
    {
        for (const MetricsRow &r : rows)
            if (r.planner == p && r.scenario == scenario && r.k == k && r.level == level)
                return r;
        throw std::runtime_error ("missing metrics row");
    }

    Verdict trendReproduction (const BenchmarkResult &res, const BenchmarkConfig &cfg)
    {
        constexpr double kRequired = 0.8;
        std::size_t cells = 0, ordered = 0, succOk = 0;
        double mse = 0.0, mcr = 0.0;
        // NaN (all trials failed) makes every comparison false.
        auto geq = [] (double a, double b) { return a >= b; };
        for (const std::string &s : cfg.scenarios)
            for (int k : cfg.kValues)
                for (int level : cfg.levels)
                {
                    const double osp = rowOf (res.rows, PlannerKind::Osp, s, k, level).meanCollisions;
                    const double mlc = rowOf (res.rows, PlannerKind::McrMlc, s, k, level).meanCollisions;
                    const MetricsRow &ex = rowOf (res.rows, PlannerKind::McrExact, s, k, level);
                    const MetricsRow &ms = rowOf (res.rows, PlannerKind::MaxSuccessExact, s, k, level);
                    ++cells;
                    ordered += geq (osp, mlc) && geq (mlc, ex.meanCollisions) && geq (ex.meanCollisions, ms.meanCollisions);
                    succOk += geq (ms.successRate, ex.successRate);
                    mse += ms.successRate;
                    mcr += ex.successRate;
                }
        const double n = static_cast<double> (cells);
        const bool ok = ordered >= kRequired * n && succOk >= kRequired * n && mse > mcr;
        return {ok, fmt ("collision order %zu/%zu cells, success MSE>=MCR %zu/%zu cells, aggregate success MSE %.4f vs MCR %.4f", ordered, cells,
                         succOk, cells, mse / n, mcr / n)};
    }

    Verdict normalizationAndChains (const BenchmarkResult &res)
    {
        const BenchmarkChecks &c = res.checks;
        const bool ok = c.beliefs > 0 && c.maxNormalizationError <= kNormTol && c.records > 0 && c.survivabilityOutOfRange == 0 &&
                        c.survivabilityIncreases == 0;
        return {ok, fmt ("%zu beliefs, max normalization error %.3g; %zu records audited, %zu outside [0,1], %zu increases along a parent chain",
                         c.beliefs, c.maxNormalizationError, c.records, c.survivabilityOutOfRange, c.survivabilityIncreases)};
    }

    Verdict prmStarCounts ()
    {
        const std::size_t k7 = prmStarNeighbors (5000, 7);
        const std::size_t k2 = prmStarNeighbors (100, 2);
        // A built 7-DoF roadmap in an empty world links every node to at least k nearest.
        const RobotModel arm (PlanarArm{{0.0, 0.0}, std::vector<double> (7, 10.0), 1.0, 2.0});
        const ConfigBounds b{std::vector<double> (7, -kPi), std::vector<double> (7, kPi)};
        const Roadmap rm = buildRoadmap (arm, {}, b, 5000, 1);
        std::size_t minDegree = rm.size ();
        for (std::size_t n = 0; n < rm.size (); ++n)
            minDegree = std::min (minDegree, rm.neighbors (n).size ());
        const RobotModel disc (DiscRobot{0.1});
        const Roadmap rm2 = buildRoadmap (disc, {}, ConfigBounds{{-1, -1}, {1, 1}}, 100, 1);
        std::size_t minDegree2 = rm2.size ();
        for (std::size_t n = 0; n < rm2.size (); ++n)
            minDegree2 = std::min (minDegree2, rm2.neighbors (n).size ());
        const bool ok = k7 == 27 && k2 == 19 && minDegree >= 27 && minDegree2 >= 19;
        return {ok, fmt ("k(5000, d=7) = %zu, k(100, d=2) = %zu; min degree of built roadmaps %zu and %zu", k7, k2, minDegree, minDegree2)};
    }

    struct Criterion
    {
        int id;
        const char *name;
        double limitSeconds;
        std::function<Verdict ()> run;
    };
} // namespace

int main ()
{
    const BenchmarkConfig cfg = sweepConfig ();
    BenchmarkResult sweep;
    double sweepSeconds = 0.0;
    auto runSweep = [&] {
        const auto t0 = std::chrono::steady_clock::now ();
        sweep = runBenchmark (cfg, {true});
        sweepSeconds = std::chrono::duration<double> (std::chrono::steady_clock::now () - t0).count ();
    };

    const std::vector<Criterion> criteria{
        {1, "counterexample graphs", 1.0, counterexampleGraphs},
        {2, "brute-force exactness", 60.0, bruteForceExactness},
        {3, "Monte-Carlo agreement", 300.0, monteCarloAgreement},
        {4, "reduction consistency", 60.0, reductionCheck},
        {5, "benchmark trends", 900.0,
         [&] {
             runSweep ();
             return trendReproduction (sweep, cfg);
         }},
        {6, "normalization and survivability chains", 900.0, [&] { return normalizationAndChains (sweep); }},
        {7, "PRM* neighbour counts", 120.0, prmStarCounts},
        {8, "determinism", 900.0,
         [&] {
             const std::string first = metricsCsv (sweep.rows);
             const std::string second = metricsCsv (runBenchmark (cfg).rows);
             return Verdict{first == second && !first.empty (),
                            fmt ("metrics tables %s (%zu bytes)", first == second ? "byte-identical" : "differ", first.size ())};
         }},
    };

    int failures = 0;
    for (const Criterion &c : criteria)
    {
        const auto t0 = std::chrono::steady_clock::now ();
        Verdict v;
        try
        {
            v = c.run ();
        }
        catch (const std::exception &e)
        {
            v = {false, std::string ("exception: ") + e.what ()};
        }
        double seconds = std::chrono::duration<double> (std::chrono::steady_clock::now () - t0).count ();
        if (c.id == 6)
            seconds += sweepSeconds; // the audit runs inside the criterion 5 sweep
        const bool inTime = seconds < c.limitSeconds;
        const bool pass = v.pass && inTime;
        failures += !pass;
        std::printf ("%s criterion %d (%s): %s; %.2f s (limit %.0f s)%s\n", pass ? "PASS" : "FAIL", c.id, c.name, v.detail.c_str (), seconds,
                     c.limitSeconds, inTime ? "" : " OVER TIME");
        std::fflush (stdout);
    }
    return failures == 0 ? 0 : 1;
}
