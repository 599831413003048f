#pragma once

#include <cassert>
#include <cstdint>
#include <vector>

namespace torsion {

/// Dynamic bitset sized at construction. Used for element sets inside a
/// module, ideal membership inside a ring, and class sets inside a universe.
class Bits {
public:
    Bits() = default;
    explicit Bits(int n) : n_(n), w_((n + 63) / 64, 0) {}

    static Bits ones(int n) {
        Bits b(n);
        for (int i = 0; i < n; ++i) b.set(i);
        return b;
    }
    static Bits from_mask(int n, std::uint64_t mask) {
        assert(n <= 64);
        Bits b(n);
        if (!b.w_.empty()) b.w_[0] = n == 64 ? mask : (mask & ((std::uint64_t{1} << n) - 1));
        return b;
    }

    int size() const { return n_; }

    void set(int i) { w_[i >> 6] |= std::uint64_t{1} << (i & 63); }
    void reset(int i) { w_[i >> 6] &= ~(std::uint64_t{1} << (i & 63)); }
    bool test(int i) const { return (w_[i >> 6] >> (i & 63)) & 1; }

    int count() const {
        int c = 0;
        for (auto w : w_) c += __builtin_popcountll(w);
        return c;
    }
    bool any() const {
        for (auto w : w_)
            if (w) return true;
        return false;
    }
    bool none() const { return !any(); }

    bool subset_of(const Bits& o) const {
        assert(n_ == o.n_);
        for (size_t i = 0; i < w_.size(); ++i)
            if (w_[i] & ~o.w_[i]) return false;
        return true;
    }
    bool intersects(const Bits& o) const {
        assert(n_ == o.n_);
        for (size_t i = 0; i < w_.size(); ++i)
            if (w_[i] & o.w_[i]) return true;
        return false;
    }

    Bits& operator|=(const Bits& o) {
        assert(n_ == o.n_);
        for (size_t i = 0; i < w_.size(); ++i) w_[i] |= o.w_[i];
        return *this;
    }
    Bits& operator&=(const Bits& o) {
        assert(n_ == o.n_);
        for (size_t i = 0; i < w_.size(); ++i) w_[i] &= o.w_[i];
        return *this;
    }
    friend Bits operator|(Bits a, const Bits& b) { return a |= b; }
    friend Bits operator&(Bits a, const Bits& b) { return a &= b; }

    friend bool operator==(const Bits& a, const Bits& b) { return a.n_ == b.n_ && a.w_ == b.w_; }
    friend bool operator!=(const Bits& a, const Bits& b) { return !(a == b); }
    friend bool operator<(const Bits& a, const Bits& b) {
        if (a.n_ != b.n_) return a.n_ < b.n_;
        for (size_t i = a.w_.size(); i-- > 0;)
            if (a.w_[i] != b.w_[i]) return a.w_[i] < b.w_[i];
        return false;
    }

    /// Indices of set bits, ascending.
    std::vector<int> indices() const {
        std::vector<int> out;
        for (int i = 0; i < n_; ++i)
            if (test(i)) out.push_back(i);
        return out;
    }

    /// Calls f(i) for every set bit, ascending, without allocating.
    template <class F>
    void for_each(F&& f) const {
        for (size_t w = 0; w < w_.size(); ++w) {
            std::uint64_t bits = w_[w];
            while (bits) {
                int i = int(w * 64) + __builtin_ctzll(bits);
                bits &= bits - 1;
                f(i);
            }
        }
    }

    std::uint64_t mask64() const {
        assert(n_ <= 64);
        return w_.empty() ? 0 : w_[0];
    }

    std::uint64_t hash() const {
        std::uint64_t h = 1469598103934665603ull ^ std::uint64_t(n_);
        for (auto w : w_) {
            h ^= w;
            h *= 1099511628211ull;
        }
        return h;
    }

private:
    int n_ = 0;
    std::vector<std::uint64_t> w_;
};

}  // namespace torsion
