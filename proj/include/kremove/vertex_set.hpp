#pragma once

#include <bit>
#include <cstdint>
#include <initializer_list>
#include <stdexcept>
#include <string>
#include <vector>

namespace kremove {

using Vertex = int;
inline constexpr Vertex kNoVertex = -1;

/// Fixed-universe vertex set backed by a bitset. Members are ids in [0, universe).
class VertexSet {
  public:
    VertexSet() = default;
    explicit VertexSet(int universe)
        : universe_(universe), words_(static_cast<std::size_t>((universe + 63) / 64), 0) {}
    VertexSet(int universe, std::initializer_list<Vertex> members) : VertexSet(universe) {
        for (Vertex v : members)
            insert(v);
    }

    template <typename Range> static VertexSet of(int universe, const Range &members) {
        VertexSet s(universe);
        for (Vertex v : members)
            s.insert(v);
        return s;
    }

    static VertexSet full(int universe) {
        VertexSet s(universe);
        for (Vertex v = 0; v < universe; ++v)
            s.insert(v);
        return s;
    }

    int universe() const noexcept { return universe_; }

    bool contains(Vertex v) const noexcept {
        if (v < 0 || v >= universe_)
            return false;
        return (words_[word(v)] >> bit(v)) & 1U;
    }

    void insert(Vertex v) {
        check(v);
        words_[word(v)] |= std::uint64_t{1} << bit(v);
    }

    void erase(Vertex v) {
        check(v);
        words_[word(v)] &= ~(std::uint64_t{1} << bit(v));
    }

    int size() const noexcept {
        int total = 0;
        for (auto w : words_)
            total += std::popcount(w);
        return total;
    }

    bool empty() const noexcept {
        for (auto w : words_)
            if (w != 0)
                return false;
        return true;
    }

    /// Smallest member, or kNoVertex when empty.
    Vertex min() const noexcept {
        for (std::size_t i = 0; i < words_.size(); ++i)
            if (words_[i] != 0)
                return static_cast<Vertex>(i * 64 + static_cast<std::size_t>(std::countr_zero(words_[i])));
        return kNoVertex;
    }

    template <typename F> void for_each(F &&f) const {
        for (std::size_t i = 0; i < words_.size(); ++i) {
            auto w = words_[i];
            while (w != 0) {
                auto b = std::countr_zero(w);
                f(static_cast<Vertex>(i * 64 + static_cast<std::size_t>(b)));
                w &= w - 1;
            }
        }
    }

    std::vector<Vertex> members() const {
        std::vector<Vertex> out;
        out.reserve(static_cast<std::size_t>(size()));
        for_each([&](Vertex v) { out.push_back(v); });
        return out;
    }

    bool is_subset_of(const VertexSet &other) const {
        same_universe(other);
        for (std::size_t i = 0; i < words_.size(); ++i)
            if ((words_[i] & ~other.words_[i]) != 0)
                return false;
        return true;
    }

    bool intersects(const VertexSet &other) const {
        same_universe(other);
        for (std::size_t i = 0; i < words_.size(); ++i)
            if ((words_[i] & other.words_[i]) != 0)
                return true;
        return false;
    }

    /// |this ∩ other| without materializing the intersection.
    int count_common(const VertexSet &other) const {
        same_universe(other);
        int total = 0;
        for (std::size_t i = 0; i < words_.size(); ++i)
            total += std::popcount(words_[i] & other.words_[i]);
        return total;
    }

    VertexSet complement() const {
        VertexSet out = full(universe_);
        out -= *this;
        return out;
    }

    VertexSet &operator|=(const VertexSet &other) {
        same_universe(other);
        for (std::size_t i = 0; i < words_.size(); ++i)
            words_[i] |= other.words_[i];
        return *this;
    }
    VertexSet &operator&=(const VertexSet &other) {
        same_universe(other);
        for (std::size_t i = 0; i < words_.size(); ++i)
            words_[i] &= other.words_[i];
        return *this;
    }
    VertexSet &operator-=(const VertexSet &other) {
        same_universe(other);
        for (std::size_t i = 0; i < words_.size(); ++i)
            words_[i] &= ~other.words_[i];
        return *this;
    }

    friend VertexSet operator|(VertexSet a, const VertexSet &b) { return a |= b; }
    friend VertexSet operator&(VertexSet a, const VertexSet &b) { return a &= b; }
    friend VertexSet operator-(VertexSet a, const VertexSet &b) { return a -= b; }
    friend bool operator==(const VertexSet &, const VertexSet &) = default;

  private:
    static std::size_t word(Vertex v) { return static_cast<std::size_t>(v) / 64; }
    static unsigned bit(Vertex v) { return static_cast<unsigned>(v) % 64; }

    void check(Vertex v) const {
        if (v < 0 || v >= universe_)
            throw std::out_of_range("vertex " + std::to_string(v) + " outside universe of size " +
                                    std::to_string(universe_));
    }
    void same_universe(const VertexSet &other) const {
        if (other.universe_ != universe_)
            throw std::invalid_argument("vertex sets over different universes");
    }

    int universe_ = 0;
    std::vector<std::uint64_t> words_;
};

} // namespace kremove
