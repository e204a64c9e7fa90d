#pragma once
/**
 * @file    probability.hpp
 * @brief   Survivability and target-reach probabilities of label sets.
 *
 * For a path carrying label set L:
 *   S(L)        = prod_i (1 - sum_{l_i^j in L} w(l_i^j))     over non-target objects
 *   Jbar(L)     = { j : l_t^j in L }                          target poses the path hits
 *   reach(L)    = sum_{j not in Jbar} Pr(p_t^j)               path not yet at a goal
 *   reach(L, g) = sum_{j in J(g) \ Jbar} Pr(p_t^j)            path ending at goal g
 *   succ        = S * reach
 * Target labels only affect reach; they never enter S.
 */

#include <smcr/errors.hpp>
#include <smcr/label_set.hpp>
#include <smcr/roadmap.hpp>
#include <smcr/scene.hpp>

#include <cmath>
#include <cstddef>
#include <limits>
#include <string>
#include <vector>

namespace smcr
{
    class ProbabilityModel
    {
      public:
        static constexpr std::size_t npos = std::numeric_limits<std::size_t>::max ();

        ProbabilityModel () = default;

        /**
         * @param universe      label order
         * @param weights       Pr(p_i^j) per label bit (target bits included)
         * @param targetProbs   Pr(p_t^j) for every target hypothesis j
         */
        ProbabilityModel (LabelUniverse universe, std::vector<double> weights, std::vector<double> targetProbs)
            : universe_ (std::move (universe)), weight_ (std::move (weights)), targetProb_ (std::move (targetProbs))
        {
            if (weight_.size () != universe_.size ())
                throw InvalidInput ("ProbabilityModel: one weight per label required");
            targetBit_.assign (targetProb_.size (), npos);
            targetIndex_.assign (universe_.size (), -1);
            for (std::size_t b = 0; b < universe_.size (); ++b)
            {
                if (weight_[b] < 0.0 || weight_[b] > 1.0)
                    throw InvalidInput ("ProbabilityModel: label weight outside [0,1]");
                if (universe_.isTarget (b))
                {
                    const auto j = static_cast<std::size_t> (universe_[b].hypothesis);
                    if (j >= targetProb_.size ())
                        throw InvalidInput ("ProbabilityModel: target label without target probability");
                    targetBit_[j] = b;
                    targetIndex_[b] = static_cast<int> (j);
                }
            }
            for (std::size_t j = 0; j < targetProb_.size (); ++j)
                if (targetProb_[j] < 0.0)
                    throw InvalidInput ("ProbabilityModel: negative target probability");
        }

        [[nodiscard]] static ProbabilityModel fromScene (const BeliefScene &scene, const LabelUniverse &universe)
        {
            std::vector<double> w;
            w.reserve (universe.size ());
            for (const LabelId &id : universe.labels ())
            {
                const ObjectBelief *o = scene.find (id.object);
                if (!o || id.hypothesis < 0 || static_cast<std::size_t> (id.hypothesis) >= o->hypotheses.size ())
                    throw InvalidInput ("label (" + std::to_string (id.object) + ", " + std::to_string (id.hypothesis) +
                                        ") does not resolve in the scene");
                w.push_back (o->hypotheses[static_cast<std::size_t> (id.hypothesis)].prob);
            }
            std::vector<double> t;
            for (const PoseHypothesis &h : scene.target ().hypotheses)
                t.push_back (h.prob);
            return ProbabilityModel (universe, std::move (w), std::move (t));
        }

        [[nodiscard]] static ProbabilityModel fromScene (const BeliefScene &scene) { return fromScene (scene, LabelUniverse::fromScene (scene)); }

        [[nodiscard]] const LabelUniverse &universe () const noexcept { return universe_; }
        [[nodiscard]] double weight (std::size_t bit) const { return weight_.at (bit); }
        [[nodiscard]] const std::vector<double> &targetProbabilities () const noexcept { return targetProb_; }
        [[nodiscard]] std::size_t targetCount () const noexcept { return targetProb_.size (); }

        /// Target hypothesis index of a label bit, or -1 for non-target labels.
        [[nodiscard]] int targetIndexOf (std::size_t bit) const noexcept { return targetIndex_[bit]; }

        /// Label bit of target hypothesis @p j, or npos if it has none.
        [[nodiscard]] std::size_t targetBit (std::size_t j) const noexcept { return targetBit_[j]; }

        /// S(L): product over objects of one minus the summed weights of hit poses.
        [[nodiscard]] double survivability (const LabelSet &labels) const
        {
            double s = 1.0;
            double sum = 0.0;
            int object = 0;
            bool open = false;
            auto close = [&] {
                if (!open)
                    return;
                if (sum > 1.0 + kNormalizationTolerance)
                    throw InvariantViolation ("object " + std::to_string (object) + ": hit pose weights sum to " + std::to_string (sum) +
                                              " > 1");
                s *= std::max (0.0, 1.0 - sum);
            };
            labels.forEach ([&] (std::size_t b) {
                if (universe_.isTarget (b))
                    return;
                if (!open || universe_[b].object != object)
                {
                    close ();
                    object = universe_[b].object;
                    sum = 0.0;
                    open = true;
                }
                sum += weight_[b];
            });
            close ();
            return s;
        }

        /// Jbar(L) as a mask over target hypothesis indices.
        [[nodiscard]] LabelSet intersectedTargets (const LabelSet &labels) const
        {
            LabelSet out (targetProb_.size ());
            labels.forEach ([&] (std::size_t b) {
                if (targetIndex_[b] >= 0)
                    out.insert (static_cast<std::size_t> (targetIndex_[b]));
            });
            return out;
        }

        /// T_rem: target hypotheses the path has not hit.
        [[nodiscard]] LabelSet remainingTargets (const LabelSet &labels) const
        {
            LabelSet out (targetProb_.size ());
            for (std::size_t j = 0; j < targetProb_.size (); ++j)
                if (targetBit_[j] == npos || !labels.contains (targetBit_[j]))
                    out.insert (j);
            return out;
        }

        /// Reach of a path that has not committed to a goal.
        [[nodiscard]] double reach (const LabelSet &labels) const
        {
            double r = 0.0;
            for (std::size_t j = 0; j < targetProb_.size (); ++j)
                if (targetBit_[j] == npos || !labels.contains (targetBit_[j]))
                    r += targetProb_[j];
            return r;
        }

        /// Reach of a path ending at @p goal: mass of J(goal) minus hit target poses.
        [[nodiscard]] double reach (const LabelSet &labels, const GoalSpec &goal) const
        {
            double r = 0.0;
            for (int j : goal.targets)
            {
                const auto ju = static_cast<std::size_t> (j);
                if (ju >= targetProb_.size ())
                    throw InvalidInput ("goal references unknown target hypothesis " + std::to_string (j));
                if (targetBit_[ju] == npos || !labels.contains (targetBit_[ju]))
                    r += targetProb_[ju];
            }
            return r;
        }

      private:
        LabelUniverse universe_;
        std::vector<double> weight_;
        std::vector<double> targetProb_;
        std::vector<std::size_t> targetBit_;
        std::vector<int> targetIndex_;
    };
} // namespace smcr
