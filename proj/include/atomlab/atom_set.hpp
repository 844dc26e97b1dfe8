#pragma once

#include <bit>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <vector>

namespace atomlab
{
    using AtomId = int;

    /// Fixed-universe bitset over atom ids.
    class AtomSet
    {
    public:
        AtomSet() = default;
        explicit AtomSet(std::size_t universe) : universe_(universe), words_((universe + 63) / 64, 0) {}

        static auto full(std::size_t universe) -> AtomSet
        {
            AtomSet s(universe);
            for (std::size_t i = 0; i < universe; ++i)
                s.insert(static_cast<AtomId>(i));
            return s;
        }

        auto universe() const -> std::size_t { return universe_; }

        auto contains(AtomId a) const -> bool { return (words_[a >> 6] >> (a & 63)) & 1U; }
        void insert(AtomId a) { words_[a >> 6] |= std::uint64_t{1} << (a & 63); }
        void erase(AtomId a) { words_[a >> 6] &= ~(std::uint64_t{1} << (a & 63)); }

        auto empty() const -> bool
        {
            for (auto w : words_)
                if (w)
                    return false;
            return true;
        }

        auto count() const -> std::size_t
        {
            std::size_t c = 0;
            for (auto w : words_)
                c += std::popcount(w);
            return c;
        }

        auto operator|=(const AtomSet & o) -> AtomSet &
        {
            for (std::size_t i = 0; i < words_.size(); ++i)
                words_[i] |= o.words_[i];
            return *this;
        }

        auto operator&=(const AtomSet & o) -> AtomSet &
        {
            for (std::size_t i = 0; i < words_.size(); ++i)
                words_[i] &= o.words_[i];
            return *this;
        }

        friend auto operator|(AtomSet a, const AtomSet & b) -> AtomSet { return a |= b; }
        friend auto operator&(AtomSet a, const AtomSet & b) -> AtomSet { return a &= b; }

        auto complement() const -> AtomSet
        {
            AtomSet r(universe_);
            for (std::size_t i = 0; i < words_.size(); ++i)
                r.words_[i] = ~words_[i];
            if (universe_ % 64)
                r.words_.back() &= (std::uint64_t{1} << (universe_ % 64)) - 1;
            return r;
        }

        auto intersects(const AtomSet & o) const -> bool
        {
            for (std::size_t i = 0; i < words_.size(); ++i)
                if (words_[i] & o.words_[i])
                    return true;
            return false;
        }

        auto subset_of(const AtomSet & o) const -> bool
        {
            for (std::size_t i = 0; i < words_.size(); ++i)
                if (words_[i] & ~o.words_[i])
                    return false;
            return true;
        }

        template <typename F>
        void for_each(F && f) const
        {
            for (std::size_t i = 0; i < words_.size(); ++i) {
                auto w = words_[i];
                while (w) {
                    int b = std::countr_zero(w);
                    f(static_cast<AtomId>(i * 64 + b));
                    w &= w - 1;
                }
            }
        }

        auto to_vector() const -> std::vector<AtomId>
        {
            std::vector<AtomId> r;
            for_each([&](AtomId a) { r.push_back(a); });
            return r;
        }

        /// ORs a raw row with the same word layout.
        void or_words(const std::uint64_t * w)
        {
            for (std::size_t i = 0; i < words_.size(); ++i)
                words_[i] |= w[i];
        }

        auto words() const -> const std::vector<std::uint64_t> & { return words_; }

        friend auto operator==(const AtomSet &, const AtomSet &) -> bool = default;

    private:
        std::size_t universe_ = 0;
        std::vector<std::uint64_t> words_;
    };
}
