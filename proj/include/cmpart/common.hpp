#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace cmpart {

using Int = mpz_class;
using Rat = mpq_class;

// Exit codes shared by the library error types and the CLI.
enum class Exit : int { ok = 0, usage = 2, precision = 3, consistency = 4 };

struct InvalidInput : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct PrecisionFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ConsistencyFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline std::string str(const Int& z) { return z.get_str(); }
inline std::string str(const Rat& q) { return q.get_str(); }

inline Int ipow(const Int& b, unsigned long e) {
  Int r;
  mpz_pow_ui(r.get_mpz_t(), b.get_mpz_t(), e);
  return r;
}

inline long kronecker(const Int& a, const Int& n) {
  return mpz_kronecker(a.get_mpz_t(), n.get_mpz_t());
}

inline bool is_prime(long p) {
  if (p < 2) return false;
  for (long d = 2; d * d <= p; ++d)
    if (p % d == 0) return false;
  return true;
}

inline long mod(long a, long m) {
  long r = a % m;
  return r < 0 ? r + m : r;
}

// v_p(z); z = 0 gives a large sentinel.
inline int valuation(Int z, long p) {
  if (z == 0) return 1 << 20;
  int v = 0;
  while (mpz_divisible_ui_p(z.get_mpz_t(), p)) {
    z /= p;
    ++v;
  }
  return v;
}

std::vector<std::pair<long, int>> factorize(long n);

long sigma1(long n);

// Cache root: the override set by set_cache_dir (--cache-dir), else $CMPART_CACHE, else "./cache".
std::string cache_dir();
void set_cache_dir(const std::string& dir);

}  // namespace cmpart
