#include "pfg/numbers.hpp"

#include <numeric>

namespace pfg {

bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

PrimeSet prime_divisors(std::uint64_t n) {
  PrimeSet out;
  for (std::uint64_t d = 2; d * d <= n; ++d) {
    if (n % d) continue;
    out.insert(d);
    while (n % d == 0) n /= d;
  }
  if (n > 1) out.insert(n);
  return out;
}

std::uint64_t ipow(std::uint64_t base, unsigned exp) {
  std::uint64_t r = 1;
  while (exp--) r *= base;
  return r;
}

std::uint64_t gcd(std::uint64_t a, std::uint64_t b) { return std::gcd(a, b); }

bool is_pi_number(std::uint64_t n, const PrimeSet& pi) {
  for (auto p : prime_divisors(n))
    if (!pi.count(p)) return false;
  return true;
}

std::string to_string(const PrimeSet& pi) {
  std::string s = "{";
  bool first = true;
  for (auto p : pi) {
    if (!first) s += ",";
    s += std::to_string(p);
    first = false;
  }
  return s + "}";
}

}  // namespace pfg
