#include "cmpart/common.hpp"

#include <cstdlib>
#include <mutex>

namespace cmpart {

namespace {
std::mutex dir_mu;
std::string dir_override;
}  // namespace

void set_cache_dir(const std::string& dir) {
  std::lock_guard<std::mutex> lock(dir_mu);
  dir_override = dir;
}

std::string cache_dir() {
  std::lock_guard<std::mutex> lock(dir_mu);
  if (!dir_override.empty()) return dir_override;
  if (const char* env = std::getenv("CMPART_CACHE"); env && *env) return env;
  return "cache";
}

std::vector<std::pair<long, int>> factorize(long n) {
  std::vector<std::pair<long, int>> f;
  if (n < 0) n = -n;
  for (long p = 2; p * p <= n; ++p) {
    int e = 0;
    while (n % p == 0) {
      n /= p;
      ++e;
    }
    if (e) f.emplace_back(p, e);
  }
  if (n > 1) f.emplace_back(n, 1);
  return f;
}

long sigma1(long n) {
  long s = 0;
  for (long d = 1; d * d <= n; ++d)
    if (n % d == 0) s += d + (d * d == n ? 0 : n / d);
  return s;
}

}  // namespace cmpart
