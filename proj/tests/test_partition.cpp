#include "cmpart/partition.hpp"

#include "doctest.h"

#include <filesystem>
#include <fstream>

using namespace cmpart;

namespace {

std::vector<Int> partitions_dp(long n_max) {
  std::vector<Int> p(n_max + 1, 0);
  p[0] = 1;
  for (long part = 1; part <= n_max; ++part)
    for (long k = part; k <= n_max; ++k) p[k] += p[k - part];
  return p;
}

std::string temp_path(const std::string& name) {
  return (std::filesystem::temp_directory_path() / ("cmpart_test_" + name)).string();
}

}  // namespace

TEST_CASE("small values") {
  CHECK(euler_p(0) == 1);
  CHECK(euler_p(1) == 1);
  CHECK(euler_p(3) == 3);
  CHECK(euler_p(4) == 5);
  CHECK(euler_p(100) == Int("190569292"));
  CHECK(euler_p(200) == Int("3972999029388"));
  CHECK(euler_p(-1) == 0);
}

TEST_CASE("pentagonal table matches the coin-change count") {
  std::vector<Int> oracle = partitions_dp(2000);
  const PartitionTable& t = partition_table(2000, false);
  REQUIRE(t.size() >= 2001);
  for (long n = 0; n <= 2000; ++n) CHECK(t[n] == oracle[n]);
  CHECK(t.verify_recurrence());
}

TEST_CASE("beta residues") {
  CHECK(beta_residue(5, 1) == 4);
  CHECK(beta_residue(7, 1) == 5);
  CHECK(beta_residue(11, 1) == 6);
  CHECK(beta_residue(5, 2) == 24);
  CHECK(beta_residue(7, 2) == 47);
  for (long m : {5L, 7L, 11L, 13L})
    for (int j = 1; j <= 3; ++j) {
      long mj = 1;
      for (int i = 0; i < j; ++i) mj *= m;
      long b = beta_residue(m, j);
      CHECK(b >= 0);
      CHECK(b < mj);
      CHECK(mod(24 * b, mj) == 1);
    }
}

TEST_CASE("Ramanujan congruences hold") {
  SweepResult r5 = congruence_sweep(5, 1, 500, false);
  CHECK(r5.ok());
  CHECK(r5.modulus == 5);
  SweepResult r7 = congruence_sweep(7, 2, 200, false);
  CHECK(r7.ok());
  CHECK(r7.modulus == 49);
  CHECK(congruence_sweep(11, 1, 300, false).ok());
  CHECK_THROWS_AS(congruence_sweep(13, 1, 50, false), InvalidInput);
}

TEST_CASE("table save and load round trip, corrupt files are rejected") {
  PartitionTable t;
  t.extend(300);
  std::string path = temp_path("ptable.bin");
  t.save(path);
  PartitionTable u;
  REQUIRE(u.load(path));
  CHECK(u.values() == t.values());

  {
    std::fstream f(path, std::ios::in | std::ios::out | std::ios::binary);
    f.seekp(-3, std::ios::end);
    f.put('\x7f');
  }
  PartitionTable v;
  CHECK_FALSE(v.load(path));
  CHECK(v.size() == 0);

  {
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    f << "NOTATABLE";
  }
  CHECK_FALSE(v.load(path));
  CHECK_FALSE(v.load(temp_path("missing.bin")));
  std::filesystem::remove(path);
}
