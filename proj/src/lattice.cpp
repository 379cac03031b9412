#include "hoi/lattice.hpp"

#include <algorithm>
#include <bit>
#include <sstream>

namespace hoi {

namespace {

int popcount(Elem e) { return std::popcount(e); }

}  // namespace

Lattice::Lattice(Kind kind, std::vector<int> arities)
    : kind_(kind), arities_(std::move(arities)) {
    std::size_t n = 1;
    strides_.assign(arities_.size(), 1);
    for (int i = static_cast<int>(arities_.size()) - 1; i >= 0; --i) {
        strides_[i] = static_cast<std::uint32_t>(n);
        n *= static_cast<std::size_t>(arities_[i]);
    }
    size_ = n;
}

Lattice Lattice::boolean_algebra(int nvars, int max_vars) {
    if (nvars < 0 || nvars > max_vars)
        throw InvalidArgument("boolean_algebra: variable count " + std::to_string(nvars) +
                              " outside [0, " + std::to_string(max_vars) + "]");
    return Lattice(Kind::Boolean, std::vector<int>(nvars, 2));
}

Lattice Lattice::dual_boolean_algebra(int nvars, int max_vars) {
    if (nvars < 0 || nvars > max_vars)
        throw InvalidArgument("dual_boolean_algebra: variable count " + std::to_string(nvars) +
                              " outside [0, " + std::to_string(max_vars) + "]");
    return Lattice(Kind::DualBoolean, std::vector<int>(nvars, 2));
}

Lattice Lattice::chain_product(std::vector<int> arities) {
    std::size_t n = 1;
    for (int a : arities) {
        if (a < 1) throw InvalidArgument("chain_product: arity must be >= 1");
        n *= static_cast<std::size_t>(a);
        if (n > (std::size_t{1} << kMaxBooleanVars))
            throw InvalidArgument("chain_product: state space exceeds 2^20 elements");
    }
    return Lattice(Kind::ChainProduct, std::move(arities));
}

Elem Lattice::top() const {
    if (kind_ == Kind::DualBoolean) return 0;
    return static_cast<Elem>(size_ - 1);
}

Elem Lattice::bottom() const {
    if (kind_ == Kind::DualBoolean) return static_cast<Elem>(size_ - 1);
    return 0;
}

bool Lattice::contains(Elem e) const { return e < size_; }

void Lattice::check_element(Elem e, const char* what) const {
    if (!contains(e))
        throw InvalidArgument(std::string(what) + ": element " + std::to_string(e) +
                              " outside lattice of size " + std::to_string(size_));
}

bool Lattice::leq(Elem a, Elem b) const {
    check_element(a, "leq");
    check_element(b, "leq");
    switch (kind_) {
        case Kind::Boolean:
            return (a & ~b) == 0;
        case Kind::DualBoolean:
            return (b & ~a) == 0;
        case Kind::ChainProduct: {
            for (std::size_t i = 0; i < arities_.size(); ++i) {
                const auto av = (a / strides_[i]) % arities_[i];
                const auto bv = (b / strides_[i]) % arities_[i];
                if (av > bv) return false;
            }
            return true;
        }
    }
    return false;
}

int Lattice::rank(Elem e) const {
    check_element(e, "rank");
    switch (kind_) {
        case Kind::Boolean:
            return popcount(e);
        case Kind::DualBoolean:
            return var_count() - popcount(e);
        case Kind::ChainProduct: {
            int r = 0;
            for (std::size_t i = 0; i < arities_.size(); ++i)
                r += static_cast<int>((e / strides_[i]) % arities_[i]);
            return r;
        }
    }
    return 0;
}

long long Lattice::mobius(Elem a, Elem b) const {
    check_element(a, "mobius");
    check_element(b, "mobius");
    switch (kind_) {
        case Kind::Boolean:
        case Kind::DualBoolean: {
            if (!leq(a, b)) return 0;
            const int diff = popcount(a ^ b);
            return (diff % 2 == 0) ? 1 : -1;
        }
        case Kind::ChainProduct:
            return mobius_by_recursion(a, b);
    }
    return 0;
}

// Defining recursion: mu(a,a)=1, mu(a,b) = -sum_{z: a<=z<b} mu(a,z),
// 0 when a and b are not comparable. Evaluated by dynamic programming over
// the interval [a, b] in rank order; intervals here are tiny.
long long Lattice::mobius_by_recursion(Elem a, Elem b) const {
    if (a == b) return 1;
    if (!leq(a, b)) return 0;
    std::vector<Elem> interval;
    for (Elem z : downset(b))
        if (leq(a, z)) interval.push_back(z);
    std::map<Elem, long long> mu;
    for (Elem y : interval) {
        if (y == a) {
            mu[y] = 1;
            continue;
        }
        long long acc = 0;
        for (Elem z : interval) {
            if (z != y && leq(z, y)) acc += mu[z];
        }
        mu[y] = -acc;
    }
    return mu[b];
}

std::vector<Elem> Lattice::downset(Elem top) const {
    check_element(top, "downset");
    std::vector<Elem> out;
    switch (kind_) {
        case Kind::Boolean: {
            Elem s = top;
            while (true) {
                out.push_back(s);
                if (s == 0) break;
                s = (s - 1) & top;
            }
            break;
        }
        case Kind::DualBoolean: {
            // Downset in the dual order = supersets under inclusion.
            const Elem full = static_cast<Elem>(size_ - 1);
            const Elem free_bits = full & ~top;
            Elem s = free_bits;
            while (true) {
                out.push_back(top | s);
                if (s == 0) break;
                s = (s - 1) & free_bits;
            }
            break;
        }
        case Kind::ChainProduct: {
            std::vector<int> lv = levels(top);
            std::vector<int> cur(lv.size(), 0);
            while (true) {
                out.push_back(from_levels(cur));
                int i = static_cast<int>(cur.size()) - 1;
                while (i >= 0) {
                    if (cur[i] < lv[i]) {
                        ++cur[i];
                        break;
                    }
                    cur[i] = 0;
                    --i;
                }
                if (i < 0) break;
            }
            break;
        }
    }
    std::sort(out.begin(), out.end(), [this](Elem x, Elem y) {
        const int rx = rank(x), ry = rank(y);
        if (rx != ry) return rx < ry;
        return x < y;
    });
    return out;
}

double Lattice::mobius_invert(const std::function<double(Elem)>& g, Elem top) const {
    double acc = 0.0;
    for (Elem x : downset(top)) acc += static_cast<double>(mobius(x, top)) * g(x);
    return acc;
}

double Lattice::mobius_invert(const std::map<Elem, double>& g, Elem top) const {
    return mobius_invert(
        [&](Elem x) {
            auto it = g.find(x);
            if (it == g.end())
                throw MissingValue("mobius_invert: no value supplied for element " + describe(x));
            return it->second;
        },
        top);
}

std::vector<int> Lattice::levels(Elem e) const {
    check_element(e, "levels");
    std::vector<int> lv(arities_.size());
    if (kind_ == Kind::ChainProduct) {
        for (std::size_t i = 0; i < arities_.size(); ++i)
            lv[i] = static_cast<int>((e / strides_[i]) % arities_[i]);
    } else {
        // Bitmask encoding: bit i <-> variable i.
        for (std::size_t i = 0; i < arities_.size(); ++i)
            lv[i] = (e >> i) & 1u;
    }
    return lv;
}

Elem Lattice::from_levels(std::span<const int> levels) const {
    if (levels.size() != arities_.size())
        throw InvalidArgument("from_levels: expected " + std::to_string(arities_.size()) +
                              " levels, got " + std::to_string(levels.size()));
    Elem e = 0;
    for (std::size_t i = 0; i < arities_.size(); ++i) {
        if (levels[i] < 0 || levels[i] >= arities_[i])
            throw InvalidArgument("from_levels: level " + std::to_string(levels[i]) +
                                  " outside arity " + std::to_string(arities_[i]) +
                                  " of variable " + std::to_string(i));
        if (kind_ == Kind::ChainProduct)
            e += static_cast<Elem>(levels[i]) * strides_[i];
        else
            e |= static_cast<Elem>(levels[i]) << i;
    }
    return e;
}

std::string Lattice::describe(Elem e) const {
    std::ostringstream os;
    os << '(';
    const auto lv = levels(e);
    for (std::size_t i = 0; i < lv.size(); ++i) {
        if (i) os << ',';
        os << lv[i];
    }
    os << ')';
    return os.str();
}

}  // namespace hoi
