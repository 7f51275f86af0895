#pragma once

#include "cmpart/common.hpp"

#include <string>
#include <vector>

namespace cmpart {

class PartitionTable {
 public:
  PartitionTable() = default;
  explicit PartitionTable(std::vector<Int> values) : p_(std::move(values)) {}

  // Euler's pentagonal recurrence, extending the table through index n_max.
  void extend(std::size_t n_max);
  bool verify_recurrence(std::size_t from = 0) const;

  const Int& operator[](std::size_t n) const { return p_.at(n); }
  std::size_t size() const { return p_.size(); }
  const std::vector<Int>& values() const { return p_; }

  void save(const std::string& path) const;
  // Returns false (and leaves the table untouched) on a missing file, bad magic,
  // version mismatch or a recurrence failure.
  bool load(const std::string& path);

 private:
  std::vector<Int> p_;
};

// Process-wide table, grown on demand and persisted under cache_dir()/ptable.bin.
const PartitionTable& partition_table(std::size_t n_max, bool use_cache = true);

Int euler_p(long n);

// 0 <= beta < m^j with 24 beta = 1 (mod m^j).
long beta_residue(long m, int j);

struct SweepResult {
  long ell = 0;
  int j = 0;
  long n_max = 0;
  long beta = 0;
  Int modulus;
  std::vector<long> counterexamples;
  bool ok() const { return counterexamples.empty(); }
};

// Checks p(ell^j n + beta) = 0 mod ell^j (mod 7^(floor(j/2)+1) when ell = 7) for 0 <= n <= n_max.
SweepResult congruence_sweep(long ell, int j, long n_max, bool use_cache = true);

}  // namespace cmpart
