#pragma once
/**
 * @file    label_set.hpp
 * @brief   Edge labels l_i^j and dense label sets.
 *
 * A LabelUniverse fixes a canonical (object id, hypothesis index) order for
 * every pose hypothesis of a scene; a LabelSet is a bitset over that order,
 * so union and subset tests are word-parallel.
 */

#include <smcr/errors.hpp>
#include <smcr/scene.hpp>

#include <algorithm>
#include <bit>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace smcr
{
    /// Identity of a pose hypothesis: object id and 0-based hypothesis index.
    struct LabelId
    {
        int object{0};
        int hypothesis{0};
        friend auto operator<=> (const LabelId &, const LabelId &) = default;
    };

    class LabelSet
    {
      public:
        LabelSet () = default;
        explicit LabelSet (std::size_t universeSize) : words_ ((universeSize + 63) / 64, 0) {}

        void insert (std::size_t bit)
        {
            if (bit / 64 >= words_.size ())
                words_.resize (bit / 64 + 1, 0);
            words_[bit / 64] |= std::uint64_t{1} << (bit % 64);
        }

        [[nodiscard]] bool contains (std::size_t bit) const noexcept
        {
            return bit / 64 < words_.size () && ((words_[bit / 64] >> (bit % 64)) & 1U);
        }

        LabelSet &operator|= (const LabelSet &o)
        {
            if (o.words_.size () > words_.size ())
                words_.resize (o.words_.size (), 0);
            for (std::size_t i = 0; i < o.words_.size (); ++i)
                words_[i] |= o.words_[i];
            return *this;
        }

        [[nodiscard]] friend LabelSet operator| (LabelSet a, const LabelSet &b) { return a |= b; }

        LabelSet &operator&= (const LabelSet &o)
        {
            for (std::size_t i = 0; i < words_.size (); ++i)
                words_[i] &= i < o.words_.size () ? o.words_[i] : 0;
            return *this;
        }

        [[nodiscard]] bool isSubsetOf (const LabelSet &o) const noexcept
        {
            for (std::size_t i = 0; i < words_.size (); ++i)
            {
                const std::uint64_t other = i < o.words_.size () ? o.words_[i] : 0;
                if (words_[i] & ~other)
                    return false;
            }
            return true;
        }

        [[nodiscard]] std::size_t count () const noexcept
        {
            std::size_t c = 0;
            for (std::uint64_t w : words_)
                c += static_cast<std::size_t> (std::popcount (w));
            return c;
        }

        [[nodiscard]] bool empty () const noexcept
        {
            return std::all_of (words_.begin (), words_.end (), [] (std::uint64_t w) { return w == 0; });
        }

        /// Calls @p f with every set bit in increasing order.
        template <typename F> void forEach (F &&f) const
        {
            for (std::size_t i = 0; i < words_.size (); ++i)
            {
                std::uint64_t w = words_[i];
                while (w)
                {
                    const int b = std::countr_zero (w);
                    f (i * 64 + static_cast<std::size_t> (b));
                    w &= w - 1;
                }
            }
        }

        [[nodiscard]] std::vector<std::size_t> bits () const
        {
            std::vector<std::size_t> out;
            forEach ([&] (std::size_t b) { out.push_back (b); });
            return out;
        }

        friend bool operator== (const LabelSet &a, const LabelSet &b) noexcept
        {
            const std::size_t n = std::max (a.words_.size (), b.words_.size ());
            for (std::size_t i = 0; i < n; ++i)
            {
                const std::uint64_t x = i < a.words_.size () ? a.words_[i] : 0;
                const std::uint64_t y = i < b.words_.size () ? b.words_[i] : 0;
                if (x != y)
                    return false;
            }
            return true;
        }

      private:
        std::vector<std::uint64_t> words_;
    };

    /// Canonical ordering of every pose hypothesis in a scene.
    class LabelUniverse
    {
      public:
        LabelUniverse () = default;

        /// @p labels need not be sorted; duplicates are rejected.
        LabelUniverse (std::vector<LabelId> labels, int targetId) : labels_ (std::move (labels)), targetId_ (targetId)
        {
            std::sort (labels_.begin (), labels_.end ());
            if (std::adjacent_find (labels_.begin (), labels_.end ()) != labels_.end ())
                throw InvalidInput ("duplicate label in universe");
        }

        [[nodiscard]] static LabelUniverse fromScene (const BeliefScene &scene)
        {
            std::vector<LabelId> ids;
            for (const ObjectBelief &o : scene.objects)
                for (std::size_t j = 0; j < o.hypotheses.size (); ++j)
                    ids.push_back ({o.id, static_cast<int> (j)});
            return LabelUniverse (std::move (ids), scene.targetId);
        }

        [[nodiscard]] std::size_t size () const noexcept { return labels_.size (); }
        [[nodiscard]] const LabelId &operator[] (std::size_t bit) const noexcept { return labels_[bit]; }
        [[nodiscard]] const std::vector<LabelId> &labels () const noexcept { return labels_; }
        [[nodiscard]] int targetId () const noexcept { return targetId_; }
        [[nodiscard]] bool isTarget (std::size_t bit) const noexcept { return labels_[bit].object == targetId_; }

        [[nodiscard]] std::size_t bitOf (LabelId id) const
        {
            auto it = std::lower_bound (labels_.begin (), labels_.end (), id);
            if (it == labels_.end () || *it != id)
                throw InvalidInput ("unknown label (" + std::to_string (id.object) + ", " + std::to_string (id.hypothesis) + ")");
            return static_cast<std::size_t> (it - labels_.begin ());
        }

        [[nodiscard]] LabelSet makeSet (std::initializer_list<LabelId> ids) const
        {
            LabelSet s (size ());
            for (const LabelId &id : ids)
                s.insert (bitOf (id));
            return s;
        }

        [[nodiscard]] std::vector<LabelId> decode (const LabelSet &s) const
        {
            std::vector<LabelId> out;
            s.forEach ([&] (std::size_t b) { out.push_back (labels_.at (b)); });
            return out;
        }

        friend bool operator== (const LabelUniverse &, const LabelUniverse &) = default;

      private:
        std::vector<LabelId> labels_;
        int targetId_{0};
    };
} // namespace smcr
