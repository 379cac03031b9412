#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "hoi/errors.hpp"

namespace hoi {

/// Encoded lattice element. Boolean algebras (and their duals) encode a
/// variable subset as a bitmask, bit i set <=> variable i in the subset.
/// Chain products encode the level vector mixed-radix with the last
/// variable as the fastest digit, matching joint-table state indexing.
using Elem = std::uint32_t;

/// Hard cap on Boolean-algebra width; tables are dense 2^n.
inline constexpr int kMaxBooleanVars = 20;

/// A finite lattice: a Boolean algebra over n variables, its order-dual,
/// or a product of chains (one chain of `arity` levels per variable).
/// Immutable after construction; every operation is const and pure.
class Lattice {
public:
    enum class Kind { Boolean, DualBoolean, ChainProduct };

    static Lattice boolean_algebra(int nvars, int max_vars = kMaxBooleanVars);
    static Lattice dual_boolean_algebra(int nvars, int max_vars = kMaxBooleanVars);
    static Lattice chain_product(std::vector<int> arities);

    Kind kind() const { return kind_; }
    int var_count() const { return static_cast<int>(arities_.size()); }
    const std::vector<int>& arities() const { return arities_; }
    std::size_t size() const { return size_; }

    Elem top() const;
    Elem bottom() const;

    bool contains(Elem e) const;

    /// a precedes-or-equals b in this lattice's order.
    bool leq(Elem a, Elem b) const;

    /// Height of an element: popcount for Boolean, #vars - popcount for the
    /// dual, sum of levels for chain products. Drives enumeration order.
    int rank(Elem e) const;

    /// Mobius function mu(a, b). Closed form (-1)^(|a|-|b|) on Boolean
    /// algebras and duals; computed by the defining recursion on chain
    /// products (no closed form assumed).
    long long mobius(Elem a, Elem b) const;

    /// All x with x <= top, ascending by rank, ties by numeric encoding.
    std::vector<Elem> downset(Elem top) const;

    /// f(top) = sum_{x <= top} mu(x, top) * g(x).
    double mobius_invert(const std::function<double(Elem)>& g, Elem top) const;

    /// Same, but g given as a table; a missing element raises MissingValue.
    double mobius_invert(const std::map<Elem, double>& g, Elem top) const;

    /// Decode an element into its per-variable levels (0/1 for Boolean).
    std::vector<int> levels(Elem e) const;
    Elem from_levels(std::span<const int> levels) const;

    std::string describe(Elem e) const;

private:
    Lattice(Kind kind, std::vector<int> arities);
    void check_element(Elem e, const char* what) const;
    long long mobius_by_recursion(Elem a, Elem b) const;

    Kind kind_;
    std::vector<int> arities_;
    std::vector<std::uint32_t> strides_;  // chain-product digit strides
    std::size_t size_ = 0;
};

}  // namespace hoi
