#include "pss/combinatorics.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>

namespace pss {

namespace {

// Saturating 128-bit helpers for the port search: values are exact until
// they exceed the cap, after which they stay pinned at the cap. Intermediate
// products stay exact through n = 32 (largest is about C(178, 32) * 178,
// under 5e37); the cap leaves headroom above that.
constexpr unsigned __int128 kCap = ~static_cast<unsigned __int128>(0) >> 1;

unsigned __int128 mul_sat(unsigned __int128 a, unsigned __int128 b) {
    if (a != 0 && b > kCap / a) return kCap;
    return a * b;
}

unsigned __int128 factorial_wide(int n) {
    unsigned __int128 f = 1;
    for (int k = 2; k <= n; ++k) f = mul_sat(f, static_cast<unsigned>(k));
    return f;
}

// C(m, n) with exact intermediate values: after step k the running value
// equals C(m, k), so the division is always exact.
unsigned __int128 binomial_wide(int m, int n) {
    if (n < 0 || n > m) return 0;
    if (n > m - n) n = m - n;
    unsigned __int128 c = 1;
    for (int k = 1; k <= n; ++k) {
        c = mul_sat(c, static_cast<unsigned>(m - n + k));
        if (c != kCap) c /= static_cast<unsigned>(k);
    }
    return c;
}

} // namespace

Permutation identity_permutation(int n) {
    Permutation p(static_cast<std::size_t>(n));
    std::iota(p.begin(), p.end(), 0);
    return p;
}

bool is_valid_permutation(const Permutation& p) {
    const int n = static_cast<int>(p.size());
    std::vector<bool> seen(p.size(), false);
    for (int v : p) {
        if (v < 0 || v >= n || seen[static_cast<std::size_t>(v)]) return false;
        seen[static_cast<std::size_t>(v)] = true;
    }
    return true;
}

std::vector<Permutation> permutations_lex(int n) {
    if (n < 1 || n > kMaxEnumeration) {
        throw std::length_error("permutations_lex: photon count must be in [1, " +
                                std::to_string(kMaxEnumeration) + "], got " + std::to_string(n));
    }
    std::vector<Permutation> out;
    out.reserve(static_cast<std::size_t>(factorial(n)));
    Permutation p = identity_permutation(n);
    do {
        out.push_back(p);
    } while (std::next_permutation(p.begin(), p.end()));
    return out;
}

Permutation invert(const Permutation& p) {
    if (!is_valid_permutation(p)) throw std::invalid_argument("invert: not a permutation");
    Permutation q(p.size());
    for (std::size_t i = 0; i < p.size(); ++i) q[static_cast<std::size_t>(p[i])] = static_cast<int>(i);
    return q;
}

Permutation compose(const Permutation& p, const Permutation& q) {
    if (p.size() != q.size()) throw std::invalid_argument("compose: size mismatch");
    Permutation r(p.size());
    for (std::size_t i = 0; i < p.size(); ++i) r[i] = p[static_cast<std::size_t>(q[i])];
    return r;
}

bool is_involution(const Permutation& p) {
    for (std::size_t i = 0; i < p.size(); ++i) {
        if (p[static_cast<std::size_t>(p[i])] != static_cast<int>(i)) return false;
    }
    return true;
}

std::size_t lex_index(const Permutation& p) {
    if (!is_valid_permutation(p)) throw std::invalid_argument("lex_index: not a permutation");
    const std::size_t n = p.size();
    std::vector<std::size_t> lehmer(n, 0);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            if (p[j] < p[i]) ++lehmer[i];
        }
    }
    std::size_t index = 0;
    std::size_t weight = 1;
    for (std::size_t i = n; i-- > 0;) {
        index += lehmer[i] * weight;
        weight *= (n - i);
    }
    return index;
}

std::uint64_t factorial(int n) {
    if (n < 0) throw std::invalid_argument("factorial: negative argument");
    if (n > 20) throw std::overflow_error("factorial: overflows 64 bits for n > 20");
    std::uint64_t f = 1;
    for (int k = 2; k <= n; ++k) f *= static_cast<std::uint64_t>(k);
    return f;
}

std::uint64_t binomial(int m, int n) {
    unsigned __int128 c = binomial_wide(m, n);
    if (c > std::numeric_limits<std::uint64_t>::max()) {
        throw std::overflow_error("binomial: result overflows 64 bits");
    }
    return static_cast<std::uint64_t>(c);
}

std::uint64_t involution_count(int n) {
    if (n < 1) throw std::invalid_argument("involution_count: n must be >= 1");
    std::uint64_t prev2 = 1; // A_1
    std::uint64_t prev1 = 2; // A_2
    if (n == 1) return prev2;
    if (n == 2) return prev1;
    for (int k = 3; k <= n; ++k) {
        const std::uint64_t term = static_cast<std::uint64_t>(k - 1) * prev2;
        if (prev1 > std::numeric_limits<std::uint64_t>::max() - term ||
            (prev2 != 0 && term / static_cast<std::uint64_t>(k - 1) != prev2)) {
            throw std::overflow_error("involution_count: overflows 64 bits");
        }
        const std::uint64_t cur = prev1 + term;
        prev2 = prev1;
        prev1 = cur;
    }
    return prev1;
}

ParameterCounts free_parameter_counts(int n) {
    const std::uint64_t total = factorial(n);
    const std::uint64_t a = involution_count(n);
    return ParameterCounts{total, (total + a) / 2, (total - a) / 2};
}

int min_output_ports(int n) {
    if (n < 1) throw std::invalid_argument("min_output_ports: n must be >= 1");
    if (n > 32) throw std::overflow_error("min_output_ports: supported up to n = 32");
    const unsigned __int128 target = factorial_wide(n);
    for (int m = n;; ++m) {
        if (binomial_wide(m, n) >= target) return m;
    }
}

std::vector<std::vector<int>> combinations_lex(int m, int n) {
    if (n < 0 || m < 0 || n > m) {
        throw std::invalid_argument("combinations_lex: require 0 <= n <= m");
    }
    std::vector<std::vector<int>> out;
    out.reserve(static_cast<std::size_t>(binomial(m, n)));
    std::vector<int> c(static_cast<std::size_t>(n));
    std::iota(c.begin(), c.end(), 0);
    if (n == 0) {
        out.emplace_back();
        return out;
    }
    while (true) {
        out.push_back(c);
        int i = n - 1;
        while (i >= 0 && c[static_cast<std::size_t>(i)] == m - n + i) --i;
        if (i < 0) break;
        ++c[static_cast<std::size_t>(i)];
        for (int j = i + 1; j < n; ++j) c[static_cast<std::size_t>(j)] = c[static_cast<std::size_t>(j - 1)] + 1;
    }
    return out;
}

} // namespace pss
