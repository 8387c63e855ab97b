#pragma once

#include <cstdint>
#include <set>
#include <string>

namespace pfg {

using PrimeSet = std::set<std::uint64_t>;

bool is_prime(std::uint64_t n);
PrimeSet prime_divisors(std::uint64_t n);
std::uint64_t ipow(std::uint64_t base, unsigned exp);
std::uint64_t gcd(std::uint64_t a, std::uint64_t b);

// True when every prime divisor of n lies in pi (n = 1 always qualifies).
bool is_pi_number(std::uint64_t n, const PrimeSet& pi);

std::string to_string(const PrimeSet& pi);

}  // namespace pfg
