#pragma once

#include <cstdint>
#include <span>
#include <string>

namespace sptl {

inline constexpr uint64_t sieve_limit = 100'000'000;

// Primes <= limit (limit <= sieve_limit). Tables above 10^6 are built once
// for the full sieve range; with a non-empty cache_dir they are stored in
// cache_dir/primes.bin ("SPTL1\0", limit, count, checksum, 32-bit deltas)
// and rebuilt whenever the checksum does not match.
std::span<const uint32_t> primes_upto(uint64_t limit, const std::string &cache_dir = "");

// Sum of g(p) over primes p <= X. Past the sieve range the sum is replaced
// by int g(x) dx / log x (prime number theorem). `breaks` lists points in
// log x where g has kinks. SieveRangeError when X > xmax.
template <class G>
double prime_sum(G &&g, double X, double xmax, const std::string &cache_dir = "",
                 std::span<const double> breaks = {});

} // namespace sptl

#include "sptl/primes_impl.hpp"
