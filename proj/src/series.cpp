#include "cmpart/series.hpp"

#include <cstring>

namespace cmpart {

namespace {

constexpr std::size_t kSchoolbookCutoff = 24;

std::size_t max_bits(const std::vector<Int>& v, std::size_t n) {
  std::size_t m = 0;
  for (std::size_t i = 0; i < n && i < v.size(); ++i)
    if (v[i] != 0) m = std::max(m, mpz_sizeinbase(v[i].get_mpz_t(), 2));
  return m;
}

// Packs sum v[i] 2^(i * 64 * L) (signed coefficients) into one integer.
Int pack(const std::vector<Int>& v, std::size_t n, std::size_t L) {
  Int pos, neg;
  std::size_t limbs = n * L;
  mp_limb_t* pp = mpz_limbs_write(pos.get_mpz_t(), static_cast<mp_size_t>(limbs));
  mp_limb_t* pn = mpz_limbs_write(neg.get_mpz_t(), static_cast<mp_size_t>(limbs));
  std::memset(pp, 0, limbs * sizeof(mp_limb_t));
  std::memset(pn, 0, limbs * sizeof(mp_limb_t));
  for (std::size_t i = 0; i < n; ++i) {
    int sg = mpz_sgn(v[i].get_mpz_t());
    if (!sg) continue;
    std::size_t sz = mpz_size(v[i].get_mpz_t());
    const mp_limb_t* src = mpz_limbs_read(v[i].get_mpz_t());
    std::memcpy((sg > 0 ? pp : pn) + i * L, src, sz * sizeof(mp_limb_t));
  }
  mpz_limbs_finish(pos.get_mpz_t(), static_cast<mp_size_t>(limbs));
  mpz_limbs_finish(neg.get_mpz_t(), static_cast<mp_size_t>(limbs));
  return pos - neg;
}

// Inverse of pack for the first n slots, using signed digits (each |coefficient| < 2^(64L-1)).
std::vector<Int> unpack(const Int& x, std::size_t n, std::size_t L) {
  std::vector<Int> out(n);
  bool negate = x < 0;
  Int ax = abs(x);
  std::size_t sz = mpz_size(ax.get_mpz_t());
  const mp_limb_t* src = mpz_limbs_read(ax.get_mpz_t());
  Int half = Int(1) << (64 * L - 1), full = Int(1) << (64 * L);
  int carry = 0;
  for (std::size_t i = 0; i < n; ++i) {
    Int v;
    std::size_t lo = i * L;
    if (lo < sz) {
      std::size_t cnt = std::min(L, sz - lo);
      mp_limb_t* dst = mpz_limbs_write(v.get_mpz_t(), static_cast<mp_size_t>(cnt));
      std::memcpy(dst, src + lo, cnt * sizeof(mp_limb_t));
      mpz_limbs_finish(v.get_mpz_t(), static_cast<mp_size_t>(cnt));
    }
    v += carry;
    if (v >= half) {
      v -= full;
      carry = 1;
    } else {
      carry = 0;
    }
    out[i] = negate ? Int(-v) : v;
  }
  return out;
}

}  // namespace

std::vector<Int> mul_trunc(const std::vector<Int>& a, const std::vector<Int>& b, std::size_t n) {
  std::size_t na = std::min(a.size(), n), nb = std::min(b.size(), n);
  std::vector<Int> out(n);
  if (na == 0 || nb == 0) return out;
  if (std::min(na, nb) < kSchoolbookCutoff) {
    for (std::size_t i = 0; i < na; ++i) {
      if (a[i] == 0) continue;
      for (std::size_t j = 0; j < nb && i + j < n; ++j) out[i + j] += a[i] * b[j];
    }
    return out;
  }
  std::size_t bits = max_bits(a, na) + max_bits(b, nb) + 2;
  std::size_t t = std::min(na, nb);
  while (t) {
    ++bits;
    t >>= 1;
  }
  std::size_t L = (bits + 63) / 64;
  Int pa = pack(a, na, L), pb = pack(b, nb, L);
  Int prod = pa * pb;
  return unpack(prod, n, L);
}

std::vector<Rat> mul_trunc(const std::vector<Rat>& a, const std::vector<Rat>& b, std::size_t n) {
  std::size_t na = std::min(a.size(), n), nb = std::min(b.size(), n);
  std::vector<Rat> out(n);
  for (std::size_t i = 0; i < na; ++i) {
    if (a[i] == 0) continue;
    for (std::size_t j = 0; j < nb && i + j < n; ++j) out[i + j] += a[i] * b[j];
  }
  return out;
}

}  // namespace cmpart
