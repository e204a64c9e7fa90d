#pragma once
/**
 * @file    benchmark.hpp
 * @brief   Benchmark sweep over scenarios, hypothesis counts and
 *          uncertainty levels, with per-cell metric aggregation.
 *
 * One trial = (scenario, K, level, roadmap r). Skeleton roadmaps depend
 * only on (scenario, r) and are shared by every cell; each trial draws its
 * own belief around the scenario's ground truth, labels a copy of the
 * skeleton, runs every planner and executes the plans in the ground truth.
 */

#include <smcr/errors.hpp>
#include <smcr/execution.hpp>
#include <smcr/io.hpp>
#include <smcr/planner.hpp>
#include <smcr/probability.hpp>
#include <smcr/random.hpp>
#include <smcr/roadmap.hpp>
#include <smcr/scenarios.hpp>
#include <smcr/scene.hpp>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <limits>
#include <map>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

namespace smcr
{
    struct BenchmarkConfig
    {
        std::vector<std::string> scenarios{"narrow-passage", "clutter", "arch"};
        std::vector<int> kValues{1, 4, 7};
        std::vector<int> levels{1, 4, 7};
        std::size_t roadmapsPerGt{35};
        std::size_t samples{1000};
        std::uint64_t seed{1};
        std::vector<PlannerKind> planners{kAllPlanners.begin (), kAllPlanners.end ()};
        double resolution{kDefaultResolution};
        double existence{1.0};
        PoseSampling sampling{PoseSampling::Uniform};
        bool countTargetCollisions{true};
        /// Report wall-clock planning time; off writes 0 so tables are reproducible.
        bool timing{true};
        std::size_t jobs{1};

        void validate () const
        {
            if (scenarios.empty () || kValues.empty () || levels.empty () || planners.empty ())
                throw InvalidInput ("benchmark config: scenarios, k, levels and planners must be non-empty");
            for (const auto &s : scenarios)
                (void) scenarioByName (s);
            for (int k : kValues)
                if (k < 1 || k > 7)
                    throw InvalidInput ("benchmark config: K values must lie in [1,7]");
            for (int l : levels)
                if (l < kMinLevel || l > kMaxLevel)
                    throw InvalidInput ("benchmark config: levels must lie in [1,7]");
            if (roadmapsPerGt < 1)
                throw InvalidInput ("benchmark config: roadmaps_per_gt must be at least 1");
            if (samples < 2)
                throw InvalidInput ("benchmark config: samples must be at least 2");
            if (!(resolution > 0.0))
                throw InvalidInput ("benchmark config: resolution must be positive");
            if (!(existence > 0.0) || existence > 1.0)
                throw InvalidInput ("benchmark config: existence must lie in (0,1]");
        }
    };

    namespace detail
    {
        inline std::string trim (std::string_view s)
        {
            const auto b = s.find_first_not_of (" \t\r");
            if (b == std::string_view::npos)
                return {};
            const auto e = s.find_last_not_of (" \t\r");
            return std::string (s.substr (b, e - b + 1));
        }

        inline std::vector<std::string> splitList (std::string_view s)
        {
            std::vector<std::string> out;
            std::stringstream ss{std::string (s)};
            std::string item;
            while (std::getline (ss, item, ','))
                if (auto t = trim (item); !t.empty ())
                    out.push_back (t);
            return out;
        }

        template <typename T> T parseNumber (const std::string &key, const std::string &v)
        {
            T out{};
            std::istringstream in (v);
            in >> out;
            if (!in || !in.eof ())
                throw InvalidInput ("benchmark config: bad value '" + v + "' for '" + key + "'");
            return out;
        }

        /// "1,4,7" or an inclusive range "1-7".
        inline std::vector<int> parseIntList (const std::string &key, const std::string &v)
        {
            std::vector<int> out;
            for (const std::string &item : splitList (v))
            {
                if (auto dash = item.find ('-'); dash != std::string::npos && dash > 0)
                {
                    const int lo = parseNumber<int> (key, trim (item.substr (0, dash)));
                    const int hi = parseNumber<int> (key, trim (item.substr (dash + 1)));
                    if (lo > hi)
                        throw InvalidInput ("benchmark config: empty range '" + item + "' for '" + key + "'");
                    for (int i = lo; i <= hi; ++i)
                        out.push_back (i);
                }
                else
                    out.push_back (parseNumber<int> (key, item));
            }
            return out;
        }

        inline bool parseBool (const std::string &key, const std::string &v)
        {
            if (v == "on" || v == "true" || v == "1" || v == "yes")
                return true;
            if (v == "off" || v == "false" || v == "0" || v == "no")
                return false;
            throw InvalidInput ("benchmark config: bad boolean '" + v + "' for '" + key + "'");
        }
    } // namespace detail

    /**
     * @brief Parses a flat key = value document. '#' starts a comment.
     *
     * Keys: scenarios, k, levels, roadmaps_per_gt, samples, seed, planners
     * ("all" or a list), resolution, existence, sampling (uniform |
     * center-weighted), count_target_collisions, timing, jobs.
     */
    [[nodiscard]] inline BenchmarkConfig parseBenchmarkConfig (std::string_view text)
    {
        BenchmarkConfig cfg;
        std::stringstream in{std::string (text)};
        std::string line;
        int lineNo = 0;
        while (std::getline (in, line))
        {
            ++lineNo;
            if (auto hash = line.find ('#'); hash != std::string::npos)
                line.erase (hash);
            line = detail::trim (line);
            if (line.empty ())
                continue;
            const auto eq = line.find ('=');
            if (eq == std::string::npos)
                throw InvalidInput ("benchmark config line " + std::to_string (lineNo) + ": expected key = value");
            const std::string key = detail::trim (line.substr (0, eq));
            const std::string value = detail::trim (line.substr (eq + 1));
            if (key == "scenarios")
                cfg.scenarios = detail::splitList (value);
            else if (key == "k")
                cfg.kValues = detail::parseIntList (key, value);
            else if (key == "levels")
                cfg.levels = detail::parseIntList (key, value);
            else if (key == "roadmaps_per_gt")
                cfg.roadmapsPerGt = detail::parseNumber<std::size_t> (key, value);
            else if (key == "samples")
                cfg.samples = detail::parseNumber<std::size_t> (key, value);
            else if (key == "seed")
                cfg.seed = detail::parseNumber<std::uint64_t> (key, value);
            else if (key == "planners")
            {
                cfg.planners.clear ();
                if (value == "all")
                    cfg.planners.assign (kAllPlanners.begin (), kAllPlanners.end ());
                else
                    for (const auto &p : detail::splitList (value))
                        cfg.planners.push_back (parsePlanner (p));
            }
            else if (key == "resolution")
                cfg.resolution = detail::parseNumber<double> (key, value);
            else if (key == "existence")
                cfg.existence = detail::parseNumber<double> (key, value);
            else if (key == "sampling")
            {
                if (value == "uniform")
                    cfg.sampling = PoseSampling::Uniform;
                else if (value == "center-weighted")
                    cfg.sampling = PoseSampling::CenterWeighted;
                else
                    throw InvalidInput ("benchmark config: unknown sampling '" + value + "'");
            }
            else if (key == "count_target_collisions")
                cfg.countTargetCollisions = detail::parseBool (key, value);
            else if (key == "timing")
                cfg.timing = detail::parseBool (key, value);
            else if (key == "jobs")
                cfg.jobs = detail::parseNumber<std::size_t> (key, value);
            else
                throw InvalidInput ("benchmark config: unknown key '" + key + "'");
        }
        cfg.validate ();
        return cfg;
    }

    enum class TrialStatus
    {
        Ok,
        NoSolution, ///< planner found no path
        Unsolvable, ///< no roadmap node can pick any target hypothesis
    };

    [[nodiscard]] constexpr std::string_view statusName (TrialStatus s) noexcept
    {
        switch (s)
        {
        case TrialStatus::Ok: return "ok";
        case TrialStatus::NoSolution: return "no-solution";
        case TrialStatus::Unsolvable: return "unsolvable";
        }
        return "unknown";
    }

    /// One planner run in one trial.
    struct TrialOutcome
    {
        std::string scenario;
        int k{0};
        int level{0};
        std::size_t roadmap{0};
        PlannerKind planner{PlannerKind::MaxSuccessExact};
        TrialStatus status{TrialStatus::Ok};
        ExecutionOutcome execution;
        double survivability{0.0};
        double reach{0.0};
        double success{0.0};
        std::size_t labelCount{0};
        double planTimeSeconds{0.0};
    };

    struct MetricsRow
    {
        PlannerKind planner{PlannerKind::MaxSuccessExact};
        std::string scenario;
        int k{0};
        int level{0};
        std::size_t trials{0};
        std::size_t failures{0};
        /// NaN when every trial of the cell failed.
        double meanCollisions{0.0};
        double varCollisions{0.0};
        double successRate{0.0};
        double meanCost{0.0};
        double meanPlanTime{0.0};
    };

    /// Consistency checks collected while the sweep runs.
    struct BenchmarkChecks
    {
        std::size_t beliefs{0};
        double maxNormalizationError{0.0};
        std::size_t records{0};
        std::size_t survivabilityOutOfRange{0};
        std::size_t survivabilityIncreases{0};
    };

    struct BenchmarkResult
    {
        std::vector<MetricsRow> rows;
        std::vector<TrialOutcome> trials;
        BenchmarkChecks checks;
    };

    struct BenchmarkOptions
    {
        /// Trace every search record of the success planners and audit it.
        bool auditRecords{false};
    };

    namespace detail
    {
        struct TrialKey
        {
            std::size_t scenario;
            int k;
            int level;
            std::size_t roadmap;
        };

        inline void auditTrace (const std::vector<SearchRecord> &trace, BenchmarkChecks &checks)
        {
            checks.records += trace.size ();
            for (const SearchRecord &r : trace)
            {
                if (!(r.survivability >= 0.0 && r.survivability <= 1.0))
                    ++checks.survivabilityOutOfRange;
                if (r.parent != SearchRecord::npos && r.survivability > trace[r.parent].survivability)
                    ++checks.survivabilityIncreases;
            }
        }

        inline double normalizationError (const BeliefScene &scene)
        {
            double worst = 0.0;
            for (const ObjectBelief &o : scene.objects)
                worst = std::max (worst, std::abs (o.probabilitySum () - o.existence));
            return worst;
        }

        inline void aggregate (MetricsRow &row, const std::vector<const TrialOutcome *> &cell)
        {
            row.trials = cell.size ();
            double sum = 0.0, sumSq = 0.0, cost = 0.0, time = 0.0;
            std::size_t ok = 0, succ = 0;
            for (const TrialOutcome *t : cell)
            {
                time += t->planTimeSeconds;
                if (t->status != TrialStatus::Ok)
                    continue;
                ++ok;
                const auto c = static_cast<double> (t->execution.numCollided);
                sum += c;
                sumSq += c * c;
                cost += t->execution.pathCost;
                succ += t->execution.success ? 1 : 0;
            }
            row.failures = row.trials - ok;
            constexpr double nan = std::numeric_limits<double>::quiet_NaN ();
            const auto n = static_cast<double> (ok);
            row.meanCollisions = ok ? sum / n : nan;
            row.varCollisions = ok ? std::max (0.0, sumSq / n - row.meanCollisions * row.meanCollisions) : nan;
            row.meanCost = ok ? cost / n : nan;
            row.successRate = row.trials ? static_cast<double> (succ) / static_cast<double> (row.trials) : 0.0;
            row.meanPlanTime = row.trials ? time / static_cast<double> (row.trials) : 0.0;
        }
    } // namespace detail

    /// Seed of the skeleton roadmap r of a scenario.
    [[nodiscard]] inline std::uint64_t skeletonSeed (std::uint64_t root, std::string_view scenario, std::size_t r)
    {
        return splitSeed (root, {hashTag ("skeleton"), hashTag (scenario), r});
    }

    /// Seed of the belief drawn for trial (scenario, K, level, r).
    [[nodiscard]] inline std::uint64_t beliefSeed (std::uint64_t root, std::string_view scenario, int k, int level, std::size_t r)
    {
        return splitSeed (root, {hashTag ("belief"), hashTag (scenario), static_cast<std::uint64_t> (k), static_cast<std::uint64_t> (level), r});
    }

    [[nodiscard]] inline BenchmarkResult runBenchmark (const BenchmarkConfig &cfg, const BenchmarkOptions &options = {})
    {
        cfg.validate ();
        std::vector<Scenario> scenarios;
        for (const auto &name : cfg.scenarios)
            scenarios.push_back (scenarioByName (name));

        // Skeletons: (scenario, r).
        const std::size_t R = cfg.roadmapsPerGt;
        std::vector<Roadmap> skeletons (scenarios.size () * R);
        detail::parallelFor (skeletons.size (), cfg.jobs, [&] (std::size_t i) {
            const Scenario &s = scenarios[i / R];
            RoadmapOptions ro;
            ro.resolution = cfg.resolution;
            ro.start = s.workspace.start;
            skeletons[i] = buildRoadmap (s.workspace.robot, s.truth.staticObstacles, s.workspace.bounds, cfg.samples,
                                         skeletonSeed (cfg.seed, s.name, i % R), ro);
        });

        std::vector<detail::TrialKey> keys;
        for (std::size_t s = 0; s < scenarios.size (); ++s)
            for (int k : cfg.kValues)
                for (int level : cfg.levels)
                    for (std::size_t r = 0; r < R; ++r)
                        keys.push_back ({s, k, level, r});

        const std::size_t P = cfg.planners.size ();
        std::vector<TrialOutcome> outcomes (keys.size () * P);
        std::vector<BenchmarkChecks> checks (keys.size ());
        detail::parallelFor (keys.size (), cfg.jobs, [&] (std::size_t t) {
            const detail::TrialKey &key = keys[t];
            const Scenario &sc = scenarios[key.scenario];
            for (std::size_t p = 0; p < P; ++p)
            {
                TrialOutcome &o = outcomes[t * P + p];
                o.scenario = sc.name;
                o.k = key.k;
                o.level = key.level;
                o.roadmap = key.roadmap;
                o.planner = cfg.planners[p];
            }

            HypothesisOptions ho;
            ho.nonTargetExistence = cfg.existence;
            ho.sampling = cfg.sampling;
            const BeliefScene belief = generateHypotheses (sc.truth, static_cast<std::size_t> (key.k), key.level,
                                                           beliefSeed (cfg.seed, sc.name, key.k, key.level, key.roadmap), ho);
            checks[t].beliefs = 1;
            checks[t].maxNormalizationError = detail::normalizationError (belief);

            Roadmap rm = skeletons[key.scenario * R + key.roadmap];
            injectGraspGoals (rm, belief, cfg.resolution);
            labelEdges (rm, belief, cfg.resolution);
            try
            {
                computeGoals (rm, belief, sc.workspace.grasp);
            }
            catch (const UnsolvableInstance &)
            {
                for (std::size_t p = 0; p < P; ++p)
                    outcomes[t * P + p].status = TrialStatus::Unsolvable;
                return;
            }
            const ProbabilityModel model = ProbabilityModel::fromScene (belief, rm.universe ());
            ExecutionOptions eo;
            eo.resolution = cfg.resolution;
            eo.tolerance = sc.workspace.grasp;
            eo.countTargetCollisions = cfg.countTargetCollisions;

            for (std::size_t p = 0; p < P; ++p)
            {
                TrialOutcome &o = outcomes[t * P + p];
                const bool audit = options.auditRecords &&
                                   (o.planner == PlannerKind::MaxSuccessExact || o.planner == PlannerKind::MaxSuccessGreedy);
                std::vector<SearchRecord> trace;
                SearchOptions so;
                if (audit)
                    so.trace = &trace;
                try
                {
                    const PlanResult r = plan (o.planner, rm, model, so);
                    o.execution = executePath (rm.robot (), pathConfigurations (rm, r.path), sc.truth, eo);
                    o.survivability = r.survivability;
                    o.reach = r.reach;
                    o.success = r.success;
                    o.labelCount = r.labels.count ();
                    o.planTimeSeconds = cfg.timing ? r.stats.wallTimeSeconds : 0.0;
                }
                catch (const NoSolution &)
                {
                    o.status = TrialStatus::NoSolution;
                }
                if (audit)
                    detail::auditTrace (trace, checks[t]);
            }
        });

        BenchmarkResult result;
        result.trials = std::move (outcomes);
        for (const BenchmarkChecks &c : checks)
        {
            result.checks.beliefs += c.beliefs;
            result.checks.maxNormalizationError = std::max (result.checks.maxNormalizationError, c.maxNormalizationError);
            result.checks.records += c.records;
            result.checks.survivabilityOutOfRange += c.survivabilityOutOfRange;
            result.checks.survivabilityIncreases += c.survivabilityIncreases;
        }

        // Canonical row order: planner (config order), scenario (config order), K, level.
        for (PlannerKind planner : cfg.planners)
            for (const Scenario &sc : scenarios)
                for (int k : cfg.kValues)
                    for (int level : cfg.levels)
                    {
                        MetricsRow row{planner, sc.name, k, level};
                        std::vector<const TrialOutcome *> cell;
                        for (const TrialOutcome &t : result.trials)
                            if (t.planner == planner && t.scenario == sc.name && t.k == k && t.level == level)
                                cell.push_back (&t);
                        detail::aggregate (row, cell);
                        result.rows.push_back (std::move (row));
                    }
        return result;
    }

    inline constexpr std::string_view kMetricsHeader =
        "planner,scenario,K,level,mean_collisions,var_collisions,success_rate,mean_cost,mean_plan_time_s";

    namespace detail
    {
        inline std::string formatMetric (double v)
        {
            if (std::isnan (v))
                return "na";
            char buf[32];
            std::snprintf (buf, sizeof buf, "%.6f", v);
            return buf;
        }
    } // namespace detail

    /// Metrics table; cells whose every trial failed print "na" for collisions and cost.
    [[nodiscard]] inline std::string metricsCsv (const std::vector<MetricsRow> &rows)
    {
        std::string out (kMetricsHeader);
        out += '\n';
        for (const MetricsRow &r : rows)
        {
            out += std::string (plannerName (r.planner)) + ',' + r.scenario + ',' + std::to_string (r.k) + ',' + std::to_string (r.level) + ',' +
                   detail::formatMetric (r.meanCollisions) + ',' + detail::formatMetric (r.varCollisions) + ',' +
                   detail::formatMetric (r.successRate) + ',' + detail::formatMetric (r.meanCost) + ',' +
                   detail::formatMetric (r.meanPlanTime) + '\n';
        }
        return out;
    }

    /// Per-trial raw outcomes for plotting.
    [[nodiscard]] inline Json rawReport (const BenchmarkResult &result)
    {
        Json trials = Json::array ();
        for (const TrialOutcome &t : result.trials)
        {
            Json j = {{"scenario", t.scenario},       {"K", t.k},
                      {"level", t.level},             {"roadmap", t.roadmap},
                      {"planner", std::string (plannerName (t.planner))},
                      {"status", std::string (statusName (t.status))}};
            if (t.status == TrialStatus::Ok)
            {
                j["collided_objects"] = t.execution.collidedObjects;
                j["reached_target"] = t.execution.reachedTarget;
                j["success"] = t.execution.success;
                j["path_cost"] = t.execution.pathCost;
                j["survivability"] = t.survivability;
                j["reach"] = t.reach;
                j["succ"] = t.success;
                j["labels"] = t.labelCount;
                j["plan_time_s"] = t.planTimeSeconds;
            }
            trials.push_back (std::move (j));
        }
        const BenchmarkChecks &c = result.checks;
        return {{"format", "smcr-bench-raw"},
                {"trials", trials},
                {"checks",
                 {{"beliefs", c.beliefs},
                  {"max_normalization_error", c.maxNormalizationError},
                  {"records_audited", c.records},
                  {"survivability_out_of_range", c.survivabilityOutOfRange},
                  {"survivability_increases", c.survivabilityIncreases}}}};
    }
} // namespace smcr
