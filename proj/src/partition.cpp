#include "cmpart/partition.hpp"

#include <cstring>
#include <numeric>
#include <filesystem>
#include <fstream>
#include <mutex>

namespace cmpart {

namespace {

constexpr char kMagic[4] = {'P', 'T', 'A', 'B'};
constexpr std::uint32_t kVersion = 1;

Int recurrence_value(const std::vector<Int>& p, std::size_t n) {
  Int acc = 0;
  for (long k = 1;; ++k) {
    long g1 = k * (3 * k - 1) / 2;
    if (g1 > static_cast<long>(n)) break;
    long g2 = k * (3 * k + 1) / 2;
    if (k & 1) {
      acc += p[n - g1];
      if (g2 <= static_cast<long>(n)) acc += p[n - g2];
    } else {
      acc -= p[n - g1];
      if (g2 <= static_cast<long>(n)) acc -= p[n - g2];
    }
  }
  return acc;
}

void write_u32(std::ostream& os, std::uint32_t v) {
  unsigned char b[4];
  for (int i = 0; i < 4; ++i) b[i] = (v >> (8 * i)) & 0xff;
  os.write(reinterpret_cast<char*>(b), 4);
}

void write_u64(std::ostream& os, std::uint64_t v) {
  unsigned char b[8];
  for (int i = 0; i < 8; ++i) b[i] = (v >> (8 * i)) & 0xff;
  os.write(reinterpret_cast<char*>(b), 8);
}

bool read_u32(std::istream& is, std::uint32_t& v) {
  unsigned char b[4];
  if (!is.read(reinterpret_cast<char*>(b), 4)) return false;
  v = 0;
  for (int i = 3; i >= 0; --i) v = (v << 8) | b[i];
  return true;
}

bool read_u64(std::istream& is, std::uint64_t& v) {
  unsigned char b[8];
  if (!is.read(reinterpret_cast<char*>(b), 8)) return false;
  v = 0;
  for (int i = 7; i >= 0; --i) v = (v << 8) | b[i];
  return true;
}

}  // namespace

void PartitionTable::extend(std::size_t n_max) {
  if (p_.empty()) p_.push_back(1);
  p_.reserve(n_max + 1);
  for (std::size_t n = p_.size(); n <= n_max; ++n) p_.push_back(recurrence_value(p_, n));
}

bool PartitionTable::verify_recurrence(std::size_t from) const {
  if (p_.empty() || p_[0] != 1) return false;
  for (std::size_t n = std::max<std::size_t>(from, 1); n < p_.size(); ++n)
    if (recurrence_value(p_, n) != p_[n]) return false;
  return true;
}

void PartitionTable::save(const std::string& path) const {
  std::filesystem::create_directories(std::filesystem::path(path).parent_path());
  std::string tmp = path + ".tmp";
  {
    std::ofstream os(tmp, std::ios::binary);
    os.write(kMagic, 4);
    write_u32(os, kVersion);
    write_u64(os, p_.size());
    std::vector<unsigned char> buf;
    for (const Int& v : p_) {
      std::size_t count = (mpz_sizeinbase(v.get_mpz_t(), 2) + 7) / 8;
      buf.assign(count, 0);
      mpz_export(buf.data(), &count, -1, 1, -1, 0, v.get_mpz_t());
      write_u32(os, static_cast<std::uint32_t>(count));
      os.write(reinterpret_cast<char*>(buf.data()), static_cast<std::streamsize>(count));
    }
  }
  std::filesystem::rename(tmp, path);
}

bool PartitionTable::load(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) return false;
  char magic[4];
  std::uint32_t version;
  std::uint64_t count;
  if (!is.read(magic, 4) || std::memcmp(magic, kMagic, 4) != 0) return false;
  if (!read_u32(is, version) || version != kVersion) return false;
  if (!read_u64(is, count)) return false;
  std::vector<Int> vals;
  vals.reserve(count);
  std::vector<unsigned char> buf;
  for (std::uint64_t i = 0; i < count; ++i) {
    std::uint32_t len;
    if (!read_u32(is, len)) return false;
    buf.resize(len);
    if (len && !is.read(reinterpret_cast<char*>(buf.data()), len)) return false;
    Int v;
    mpz_import(v.get_mpz_t(), len, -1, 1, -1, 0, buf.data());
    vals.push_back(std::move(v));
  }
  PartitionTable t(std::move(vals));
  if (!t.verify_recurrence()) return false;
  p_ = std::move(t.p_);
  return true;
}

const PartitionTable& partition_table(std::size_t n_max, bool use_cache) {
  static PartitionTable table;
  static bool tried_cache = false;
  static std::mutex mu;
  std::lock_guard<std::mutex> lock(mu);
  if (table.size() > n_max) return table;
  std::string path = cache_dir() + "/ptable.bin";
  if (use_cache && !tried_cache) {
    tried_cache = true;
    PartitionTable cached;
    if (cached.load(path) && cached.size() > table.size()) table = std::move(cached);
    if (table.size() > n_max) return table;
  }
  table.extend(n_max);
  if (use_cache) {
    try {
      table.save(path);
    } catch (const std::exception&) {
      // an unwritable cache directory only costs recomputation
    }
  }
  return table;
}

Int euler_p(long n) {
  if (n < 0) return 0;
  return partition_table(static_cast<std::size_t>(n), false)[n];
}

long beta_residue(long m, int j) {
  if (m <= 0 || std::gcd(24L, m) != 1 || j < 1) throw InvalidInput("beta_residue: need gcd(24,m)=1 and j>=1");
  Int mod = ipow(Int(m), j);
  Int inv;
  Int t = 24;
  mpz_invert(inv.get_mpz_t(), t.get_mpz_t(), mod.get_mpz_t());
  return inv.get_si();
}

SweepResult congruence_sweep(long ell, int j, long n_max, bool use_cache) {
  if (ell != 5 && ell != 7 && ell != 11) throw InvalidInput("congruence_sweep: ell must be 5, 7 or 11");
  if (j < 1 || n_max < 0) throw InvalidInput("congruence_sweep: need j>=1 and n_max>=0");
  SweepResult r;
  r.ell = ell;
  r.j = j;
  r.n_max = n_max;
  r.beta = beta_residue(ell, j);
  r.modulus = ell == 7 ? ipow(Int(7), j / 2 + 1) : ipow(Int(ell), j);
  long step = ipow(Int(ell), j).get_si();
  const PartitionTable& t = partition_table(static_cast<std::size_t>(step * n_max + r.beta), use_cache);
  for (long n = 0; n <= n_max; ++n)
    if (!mpz_divisible_p(t[step * n + r.beta].get_mpz_t(), r.modulus.get_mpz_t())) r.counterexamples.push_back(n);
  return r;
}

}  // namespace cmpart
