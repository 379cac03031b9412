#include "hoi/estimation.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <fstream>
#include <sstream>
#include <thread>
#include <unordered_map>

#include "hoi/lattice.hpp"
#include "hoi/rng.hpp"
#include "hoi/stats.hpp"

namespace hoi {

namespace {

std::vector<std::string> split(const std::string& line, char delim) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : line) {
        if (c == delim) {
            out.push_back(cur);
            cur.clear();
        } else if (c != '\r') {
            cur += c;
        }
    }
    out.push_back(cur);
    return out;
}

void check_target_conditioning(const SampleMatrix& samples, std::span<const int> target,
                               std::span<const int> conditioning) {
    if (target.empty()) throw InvalidArgument("estimate_mfi: empty target");
    if (target.size() > 16) throw InvalidArgument("estimate_mfi: target too large");
    for (std::size_t i = 0; i < target.size(); ++i) {
        if (target[i] < 0 || target[i] >= samples.cols())
            throw InvalidArgument("estimate_mfi: target variable out of range");
        if (samples.arities[static_cast<std::size_t>(target[i])] != 2)
            throw InvalidArgument("estimate_mfi: target variables must be binary");
        for (std::size_t k = 0; k < i; ++k)
            if (target[k] == target[i]) throw InvalidArgument("estimate_mfi: duplicate target");
    }
    for (int c : conditioning) {
        if (c < 0 || c >= samples.cols())
            throw InvalidArgument("estimate_mfi: conditioning variable out of range");
        if (std::find(target.begin(), target.end(), c) != target.end())
            throw InvalidArgument("estimate_mfi: target and conditioning sets overlap");
    }
}

/// Per-row probed-cell index: bits of the target values when every
/// conditioning variable is 0, otherwise the sentinel (= 2^|target|).
std::vector<std::uint32_t> row_cells(const SampleMatrix& samples, std::span<const int> target,
                                     std::span<const int> conditioning) {
    const std::uint32_t sentinel = 1u << target.size();
    std::vector<std::uint32_t> cell(samples.rows, sentinel);
    for (std::size_t r = 0; r < samples.rows; ++r) {
        bool in_context = true;
        for (int c : conditioning)
            if (samples.at(r, c) != 0) {
                in_context = false;
                break;
            }
        if (!in_context) continue;
        std::uint32_t id = 0;
        for (std::size_t j = 0; j < target.size(); ++j)
            if (samples.at(r, target[j]) != 0) id |= 1u << j;
        cell[r] = id;
    }
    return cell;
}

/// Alternating sum of ln(count + pseudocount); nullopt when unestimable.
std::optional<double> value_from_counts(std::span<const long long> counts, double pseudocount) {
    double acc = 0.0;
    const std::size_t k = std::bit_width(counts.size()) - 1;  // counts.size() == 2^k
    for (std::size_t s = 0; s < counts.size(); ++s) {
        const double c = static_cast<double>(counts[s]) + pseudocount;
        if (c <= 0.0) return std::nullopt;
        const int zeros = static_cast<int>(k) - std::popcount(static_cast<std::uint32_t>(s));
        acc += ((zeros % 2 == 0) ? 1.0 : -1.0) * std::log(c);
    }
    return acc;
}

}  // namespace

SampleMatrix SampleMatrix::from_csv(std::istream& in, char delimiter) {
    SampleMatrix m;
    std::string line;
    if (!std::getline(in, line)) throw InvalidArgument("sample file is empty");
    m.names = split(line, delimiter);
    if (m.names.empty()) throw InvalidArgument("sample file has no header columns");
    const std::size_t n = m.names.size();
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const auto fields = split(line, delimiter);
        if (fields.size() != n)
            throw InvalidArgument("sample row has " + std::to_string(fields.size()) +
                                  " fields, expected " + std::to_string(n));
        for (const auto& f : fields) {
            std::size_t pos = 0;
            int v = 0;
            try {
                v = std::stoi(f, &pos);
            } catch (const std::exception&) {
                throw InvalidArgument("sample value '" + f + "' is not an integer");
            }
            if (pos != f.size()) throw InvalidArgument("sample value '" + f + "' is not an integer");
            if (v < 0) throw InvalidArgument("sample values must be nonnegative");
            m.values.push_back(v);
        }
        ++m.rows;
    }
    if (m.rows == 0) throw InvalidArgument("sample file has a header but no rows");
    m.arities.assign(n, 2);
    for (std::size_t r = 0; r < m.rows; ++r)
        for (std::size_t c = 0; c < n; ++c)
            m.arities[c] = std::max(m.arities[c], m.values[r * n + c] + 1);
    return m;
}

SampleMatrix SampleMatrix::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InvalidArgument("cannot open sample file '" + path + "'");
    std::string first;
    std::getline(in, first);
    const char delim = first.find('\t') != std::string::npos ? '\t' : ',';
    in.seekg(0);
    return from_csv(in, delim);
}

void SampleMatrix::save_csv(std::ostream& out, char delimiter) const {
    for (std::size_t c = 0; c < names.size(); ++c) {
        if (c) out << delimiter;
        out << names[c];
    }
    out << '\n';
    for (std::size_t r = 0; r < rows; ++r) {
        for (std::size_t c = 0; c < names.size(); ++c) {
            if (c) out << delimiter;
            out << values[r * names.size() + c];
        }
        out << '\n';
    }
}

JointTable SampleMatrix::empirical_table() const {
    std::size_t n_states = 1;
    for (int a : arities) n_states *= static_cast<std::size_t>(a);
    if (n_states > (std::size_t{1} << kMaxBooleanVars))
        throw InvalidArgument("empirical_table: state space exceeds 2^20 entries");
    std::vector<double> weights(n_states, 0.0);
    std::vector<std::size_t> strides(arities.size(), 1);
    for (int i = static_cast<int>(arities.size()) - 1; i >= 0; --i)
        strides[static_cast<std::size_t>(i)] =
            (i + 1 < static_cast<int>(arities.size()))
                ? strides[static_cast<std::size_t>(i) + 1] *
                      static_cast<std::size_t>(arities[static_cast<std::size_t>(i) + 1])
                : 1;
    for (std::size_t r = 0; r < rows; ++r) {
        std::size_t idx = 0;
        for (std::size_t c = 0; c < arities.size(); ++c)
            idx += static_cast<std::size_t>(at(r, static_cast<int>(c))) * strides[c];
        weights[idx] += 1.0;
    }
    return JointTable::from_weights(names, arities, std::move(weights));
}

EstimatedInteraction estimate_mfi(const SampleMatrix& samples, std::span<const int> target,
                                  std::span<const int> conditioning,
                                  const SmoothingPolicy& policy) {
    check_target_conditioning(samples, target, conditioning);
    const auto cell = row_cells(samples, target, conditioning);
    std::vector<long long> counts(std::size_t{1} << target.size(), 0);
    for (std::uint32_t id : cell)
        if (id < counts.size()) ++counts[id];

    EstimatedInteraction out;
    out.target.assign(target.begin(), target.end());
    out.conditioning.assign(conditioning.begin(), conditioning.end());
    for (std::size_t s = 0; s < counts.size(); ++s) {
        CellCount cc;
        cc.state.resize(target.size());
        for (std::size_t j = 0; j < target.size(); ++j)
            cc.state[j] = static_cast<int>((s >> j) & 1u);
        cc.count = counts[s];
        out.cells.push_back(std::move(cc));
    }
    const auto value = value_from_counts(counts, policy.pseudocount);
    if (!value) {
        for (std::size_t s = 0; s < counts.size(); ++s) {
            if (counts[s] == 0) {
                std::ostringstream os;
                os << "estimate_mfi: no samples in probed cell {";
                for (std::size_t j = 0; j < target.size(); ++j) {
                    if (j) os << ", ";
                    os << samples.names[static_cast<std::size_t>(target[j])] << '='
                       << ((s >> j) & 1u);
                }
                for (int c : conditioning)
                    os << ", " << samples.names[static_cast<std::size_t>(c)] << "=0";
                os << "}; supply a pseudocount to smooth";
                throw Unestimable(os.str());
            }
        }
        throw Unestimable("estimate_mfi: degenerate probed cell");
    }
    out.value = *value;
    return out;
}

BootstrapResult bootstrap_sign_fraction(const SampleMatrix& samples, std::span<const int> target,
                                        std::span<const int> conditioning,
                                        const SmoothingPolicy& policy, int n_boot,
                                        std::uint64_t seed, int threads) {
    if (n_boot < 1) throw InvalidArgument("bootstrap: n_boot must be >= 1");
    const EstimatedInteraction point = estimate_mfi(samples, target, conditioning, policy);
    const auto cell = row_cells(samples, target, conditioning);
    const std::size_t n_cells = std::size_t{1} << target.size();
    const std::size_t m = samples.rows;

    enum : std::uint8_t { kFlip = 0, kKeep = 1, kSkip = 2 };
    std::vector<std::uint8_t> outcome(static_cast<std::size_t>(n_boot), kSkip);

    auto run_range = [&](int lo, int hi) {
        std::vector<long long> counts(n_cells + 1, 0);
        for (int rep = lo; rep < hi; ++rep) {
            // Per-replicate seed stream: identical regardless of threading.
            Rng rng(splitmix64(seed + static_cast<std::uint64_t>(rep) + 1));
            std::fill(counts.begin(), counts.end(), 0);
            for (std::size_t i = 0; i < m; ++i)
                ++counts[cell[rng.uniform_below(m)]];
            const auto rep_value =
                value_from_counts(std::span(counts.data(), n_cells), policy.pseudocount);
            if (!rep_value) {
                outcome[static_cast<std::size_t>(rep)] = kSkip;
                continue;
            }
            bool flip;
            if (point.value == 0.0)
                flip = true;  // a zero point estimate has no sign to agree with
            else
                flip = (*rep_value == 0.0) || ((*rep_value > 0.0) != (point.value > 0.0));
            outcome[static_cast<std::size_t>(rep)] = flip ? kFlip : kKeep;
        }
    };

    threads = std::max(1, threads);
    if (threads == 1 || n_boot < 2 * threads) {
        run_range(0, n_boot);
    } else {
        std::vector<std::thread> pool;
        const int chunk = (n_boot + threads - 1) / threads;
        for (int t = 0; t < threads; ++t) {
            const int lo = t * chunk;
            const int hi = std::min(n_boot, lo + chunk);
            if (lo < hi) pool.emplace_back(run_range, lo, hi);
        }
        for (auto& th : pool) th.join();
    }

    BootstrapResult result;
    result.n_boot = n_boot;
    for (std::uint8_t o : outcome) {
        if (o == kSkip)
            ++result.n_skipped;
        else if (o == kFlip)
            ++result.n_flips;
    }
    const int usable = n_boot - result.n_skipped;
    if (usable == 0)
        throw SignificanceUnavailable("bootstrap: every resample was unestimable");
    result.fraction = static_cast<double>(result.n_flips) / static_cast<double>(usable);
    return result;
}

namespace {

struct PairTest {
    bool dependent = false;
    bool insufficient = false;
};

PairTest g_test_pair(const SampleMatrix& samples, int a, int b, double alpha) {
    const int n = samples.cols();
    const int ra = samples.arities[static_cast<std::size_t>(a)];
    const int rb = samples.arities[static_cast<std::size_t>(b)];
    // Stratify on the joint state of every other variable.
    std::vector<int> rest;
    for (int v = 0; v < n; ++v)
        if (v != a && v != b) rest.push_back(v);
    std::unordered_map<std::uint64_t, std::vector<long long>> strata;
    for (std::size_t r = 0; r < samples.rows; ++r) {
        std::uint64_t key = 0;
        for (int v : rest)
            key = key * static_cast<std::uint64_t>(samples.arities[static_cast<std::size_t>(v)]) +
                  static_cast<std::uint64_t>(samples.at(r, v));
        auto& tab = strata[key];
        if (tab.empty()) tab.assign(static_cast<std::size_t>(ra * rb), 0);
        ++tab[static_cast<std::size_t>(samples.at(r, a) * rb + samples.at(r, b))];
    }
    double g = 0.0;
    long long dof = 0;
    for (const auto& [key, tab] : strata) {
        (void)key;
        std::vector<long long> rsum(static_cast<std::size_t>(ra), 0);
        std::vector<long long> csum(static_cast<std::size_t>(rb), 0);
        long long total = 0;
        for (int i = 0; i < ra; ++i)
            for (int j = 0; j < rb; ++j) {
                const long long o = tab[static_cast<std::size_t>(i * rb + j)];
                rsum[static_cast<std::size_t>(i)] += o;
                csum[static_cast<std::size_t>(j)] += o;
                total += o;
            }
        const long long nzr = std::count_if(rsum.begin(), rsum.end(), [](long long x) { return x > 0; });
        const long long nzc = std::count_if(csum.begin(), csum.end(), [](long long x) { return x > 0; });
        if (nzr < 2 || nzc < 2) continue;
        dof += (nzr - 1) * (nzc - 1);
        for (int i = 0; i < ra; ++i)
            for (int j = 0; j < rb; ++j) {
                const long long o = tab[static_cast<std::size_t>(i * rb + j)];
                if (o == 0) continue;
                const double expected = static_cast<double>(rsum[static_cast<std::size_t>(i)]) *
                                        static_cast<double>(csum[static_cast<std::size_t>(j)]) /
                                        static_cast<double>(total);
                g += 2.0 * static_cast<double>(o) * std::log(static_cast<double>(o) / expected);
            }
    }
    PairTest out;
    if (dof == 0) {
        out.dependent = true;
        out.insufficient = true;
        return out;
    }
    out.dependent = chi_squared_sf(g, static_cast<double>(dof)) < alpha;
    return out;
}

}  // namespace

MarkovBlanketMap discover_markov_blankets(const SampleMatrix& samples, double alpha,
                                          std::vector<std::string>* warnings, int max_vars) {
    const int n = samples.cols();
    if (n > max_vars)
        throw InvalidArgument("discover_markov_blankets: exhaustive testing capped at " +
                              std::to_string(max_vars) + " variables");
    MarkovBlanketMap mb(static_cast<std::size_t>(n));
    for (int a = 0; a < n; ++a)
        for (int b = a + 1; b < n; ++b) {
            const PairTest t = g_test_pair(samples, a, b, alpha);
            if (t.insufficient && warnings)
                warnings->push_back("pair (" + samples.names[static_cast<std::size_t>(a)] + ", " +
                                    samples.names[static_cast<std::size_t>(b)] +
                                    "): no usable strata; conservatively marked dependent");
            if (t.dependent) {
                mb[static_cast<std::size_t>(a)].insert(b);
                mb[static_cast<std::size_t>(b)].insert(a);
            }
        }
    return mb;
}

MarkovBlanketMap discover_markov_blankets(const JointTable& table, double tol) {
    const int n = table.var_count();
    MarkovBlanketMap mb(static_cast<std::size_t>(n));
    for (int a = 0; a < n; ++a)
        for (int b = a + 1; b < n; ++b) {
            // A indep B | rest  <=>  p(a,b,z) p(z) = p(a,z) p(b,z) for all z.
            std::vector<int> order{a, b};
            for (int v = 0; v < n; ++v)
                if (v != a && v != b) order.push_back(v);
            const JointTable re = table.marginalize(order);
            const int ra = re.arity(0), rb = re.arity(1);
            std::size_t nz = 1;
            for (int v = 2; v < n; ++v) nz *= static_cast<std::size_t>(re.arity(v));
            bool dependent = false;
            for (std::size_t z = 0; z < nz && !dependent; ++z) {
                double pz = 0.0;
                std::vector<double> pab(static_cast<std::size_t>(ra * rb), 0.0);
                std::vector<double> pa(static_cast<std::size_t>(ra), 0.0);
                std::vector<double> pb(static_cast<std::size_t>(rb), 0.0);
                for (int i = 0; i < ra; ++i)
                    for (int j = 0; j < rb; ++j) {
                        const std::size_t idx =
                            (static_cast<std::size_t>(i) * static_cast<std::size_t>(rb) +
                             static_cast<std::size_t>(j)) * nz + z;
                        const double p = re.prob_at(idx);
                        pab[static_cast<std::size_t>(i * rb + j)] = p;
                        pa[static_cast<std::size_t>(i)] += p;
                        pb[static_cast<std::size_t>(j)] += p;
                        pz += p;
                    }
                if (pz <= 0.0) continue;
                for (int i = 0; i < ra && !dependent; ++i)
                    for (int j = 0; j < rb; ++j) {
                        const double lhs = pab[static_cast<std::size_t>(i * rb + j)] * pz;
                        const double rhs = pa[static_cast<std::size_t>(i)] *
                                           pb[static_cast<std::size_t>(j)];
                        if (std::abs(lhs - rhs) > tol) {
                            dependent = true;
                            break;
                        }
                    }
            }
            if (dependent) {
                mb[static_cast<std::size_t>(a)].insert(b);
                mb[static_cast<std::size_t>(b)].insert(a);
            }
        }
    return mb;
}

std::vector<std::vector<int>> prune_targets(const MarkovBlanketMap& blankets, int order) {
    const int n = static_cast<int>(blankets.size());
    if (order < 0) throw InvalidArgument("prune_targets: negative order");
    std::vector<std::vector<int>> out;
    std::vector<int> subset;
    auto connected = [&](int v) {
        for (int u : subset)
            if (!blankets[static_cast<std::size_t>(u)].contains(v)) return false;
        return true;
    };
    auto rec = [&](auto&& self, int start) -> void {
        if (static_cast<int>(subset.size()) == order) {
            out.push_back(subset);
            return;
        }
        for (int v = start; v < n; ++v) {
            if (!connected(v)) continue;
            subset.push_back(v);
            self(self, v + 1);
            subset.pop_back();
        }
    };
    rec(rec, 0);
    return out;
}

double underconditioning_bias(const JointTable& table, std::span<const int> target,
                              std::span<const int> omitted, std::span<const int> kept) {
    if (target.empty()) throw InvalidArgument("underconditioning_bias: empty target");
    std::vector<int> scope(target.begin(), target.end());
    for (int v : omitted) scope.push_back(v);
    for (int v : kept) scope.push_back(v);
    for (std::size_t i = 0; i < scope.size(); ++i)
        for (std::size_t k = 0; k < i; ++k)
            if (scope[k] == scope[i])
                throw InvalidArgument("underconditioning_bias: target/omitted/kept must be disjoint");
    JointTable scoped = table.marginalize(scope);
    for (std::size_t j = 0; j < target.size(); ++j)
        if (scoped.arity(static_cast<int>(j)) != 2)
            throw InvalidArgument("underconditioning_bias: target variables must be binary");

    // Condition on kept = 0, then take the iterated difference over the
    // target variables of pmi(X = x, Y = 0) on the conditioned table.
    std::vector<std::pair<int, int>> fix;
    for (std::size_t i = target.size() + omitted.size(); i < scope.size(); ++i)
        fix.emplace_back(static_cast<int>(i), 0);
    const JointTable cond = fix.empty() ? scoped : scoped.condition(fix);

    const auto k = target.size();
    std::vector<int> target_local(k);
    for (std::size_t j = 0; j < k; ++j) target_local[j] = static_cast<int>(j);
    const JointTable x_marginal = cond.marginalize(target_local);

    double acc = 0.0;
    for (std::uint32_t s = 0; s < (1u << k); ++s) {
        std::vector<int> state(cond.var_count(), 0);
        std::vector<int> xstate(k, 0);
        for (std::size_t j = 0; j < k; ++j) {
            const int v = static_cast<int>((s >> j) & 1u);
            state[j] = v;
            xstate[j] = v;
        }
        const double p_joint = cond.prob(state);      // p(X=x, Y=0 | Z=0)
        const double p_x = x_marginal.prob(xstate);   // p(X=x | Z=0)
        if (p_joint <= 0.0 || p_x <= 0.0)
            throw ZeroProbability("underconditioning_bias: zero-probability probed state");
        const int zeros = static_cast<int>(k) - std::popcount(s);
        acc += ((zeros % 2 == 0) ? 1.0 : -1.0) * (std::log(p_joint) - std::log(p_x));
    }
    return acc;
}

nlohmann::ordered_json EstimatedInteraction::to_json(const std::vector<std::string>& names) const {
    nlohmann::ordered_json j;
    auto name_list = [&](const std::vector<int>& vars) {
        std::vector<std::string> out;
        for (int v : vars) out.push_back(names.at(static_cast<std::size_t>(v)));
        return out;
    };
    j["target"] = name_list(target);
    j["conditioning"] = name_list(conditioning);
    j["value"] = value;
    j["unit"] = "nats";
    nlohmann::ordered_json cellarr = nlohmann::ordered_json::array();
    for (const auto& c : cells) {
        nlohmann::ordered_json cj;
        cj["state"] = c.state;
        cj["count"] = c.count;
        cellarr.push_back(cj);
    }
    j["cells"] = cellarr;
    if (sign_flip_fraction) {
        j["F"] = *sign_flip_fraction;
        j["n_boot"] = n_boot;
        j["n_skipped"] = n_skipped;
    }
    if (theorem_zero) j["theorem_zero"] = true;
    return j;
}

}  // namespace hoi
