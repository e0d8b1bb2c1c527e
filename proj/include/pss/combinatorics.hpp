#pragma once

#include <cstdint>
#include <vector>

namespace pss {

// A permutation of {0..n-1} stored as its image tuple: p[i] = image of i.
using Permutation = std::vector<int>;

// Enumeration of S_n is capped at 8 (8! = 40320 rows); pure counting
// functions are not subject to the cap.
inline constexpr int kMaxEnumeration = 8;

Permutation identity_permutation(int n);
bool is_valid_permutation(const Permutation& p);

// All n! permutations in strict lexicographic order of their image tuples.
// This ordering is the canonical one used for density-matrix columns
// throughout the library. Throws std::length_error for n outside [1, 8].
std::vector<Permutation> permutations_lex(int n);

// Inverse permutation: compose(p, invert(p)) = identity.
Permutation invert(const Permutation& p);

// (p * q)(i) = p[q[i]]; q applied first.
Permutation compose(const Permutation& p, const Permutation& q);

bool is_involution(const Permutation& p);

// Position of p within permutations_lex(p.size()), via the Lehmer code.
std::size_t lex_index(const Permutation& p);

// n! as an exact integer; throws std::overflow_error when it exceeds 64 bits.
std::uint64_t factorial(int n);

// C(m, n) exactly; throws std::overflow_error when it exceeds 64 bits.
std::uint64_t binomial(int m, int n);

// A_n: number of involutions in S_n, from the recurrence
// A_n = A_{n-1} + (n-1) A_{n-2}, A_1 = 1, A_2 = 2.
std::uint64_t involution_count(int n);

struct ParameterCounts {
    std::uint64_t total = 0; // n!
    std::uint64_t real = 0;  // (n! + A_n) / 2
    std::uint64_t imag = 0;  // (n! - A_n) / 2
};

ParameterCounts free_parameter_counts(int n);

// Smallest M with C(M, n) >= n!, by direct search (exact integer arithmetic).
int min_output_ports(int n);

// All C(m, n) strictly increasing n-tuples from {0..m-1}, lexicographic.
// This ordering is the canonical one for correlation-vector rows.
std::vector<std::vector<int>> combinations_lex(int m, int n);

} // namespace pss
