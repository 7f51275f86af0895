#include "cmpart/quaternion.hpp"

#include "doctest.h"

#include <algorithm>

using namespace cmpart;

TEST_CASE("Hilbert symbols") {
  CHECK(hilbert_symbol(-1, -1, -1) == -1);
  CHECK(hilbert_symbol(-1, -1, 2) == -1);
  CHECK(hilbert_symbol(-1, -1, 3) == 1);
  CHECK(hilbert_symbol(-1, -3, 3) == -1);
  CHECK(hilbert_symbol(2, 5, 5) == -1);
  CHECK(hilbert_symbol(1, 7, 7) == 1);
  // product formula
  for (long a : {-1L, -2L, -3L, 5L, -7L, 10L})
    for (long b : {-1L, -5L, -11L, 3L, -13L}) {
      int prod = hilbert_symbol(a, b, -1);
      for (long p : {2L, 3L, 5L, 7L, 11L, 13L}) prod *= hilbert_symbol(a, b, p);
      CHECK(prod == 1);
    }
}

TEST_CASE("maximal orders of the definite algebra ramified at ell") {
  for (long ell : {5L, 7L, 11L, 13L, 17L, 19L, 23L}) {
    MaximalOrderData m = maximal_order(ell);
    std::vector<long> ram = ramified_places(m.A);
    std::sort(ram.begin(), ram.end());
    CHECK(ram == std::vector<long>{-1, ell});
    CHECK(is_order(m.A, m.O));
    CHECK(reduced_discriminant(m.A, m.O) == ell);
    CHECK(discriminant(m.A, m.O) == Rat(ell * ell));
  }
}

TEST_CASE("unit groups of maximal orders") {
  CHECK(unit_count(maximal_order(5).A, maximal_order(5).O) == 6);
  CHECK(unit_count(maximal_order(7).A, maximal_order(7).O) == 4);
  CHECK(unit_count(maximal_order(13).A, maximal_order(13).O) == 2);
  CHECK_THROWS_AS(maximal_order(3), InvalidInput);
}

TEST_CASE("short vectors agree with a box search") {
  for (long ell : {5L, 11L, 13L}) {
    MaximalOrderData m = maximal_order(ell);
    std::array<QElt, 4> b = lll_basis(m.A, m.O);
    Lattice reduced = Lattice::from_generators({b[0], b[1], b[2], b[3]});
    CHECK(reduced == m.O);
    const Rat bound = 6;
    std::vector<QElt> sv = short_vectors(m.A, m.O, bound);
    long box = 0;
    const long R = 7;
    for (long x0 = -R; x0 <= R; ++x0)
      for (long x1 = -R; x1 <= R; ++x1)
        for (long x2 = -R; x2 <= R; ++x2)
          for (long x3 = -R; x3 <= R; ++x3) {
            QElt x = add(add(scale(b[0], x0), scale(b[1], x1)), add(scale(b[2], x2), scale(b[3], x3)));
            Rat n = m.A.nrd(x);
            if (n <= bound) {
              ++box;
              CHECK(std::find(sv.begin(), sv.end(), x) != sv.end());
            }
          }
    CHECK(static_cast<long>(sv.size()) == box);
    std::vector<long> counts = norm_counts(m.A, m.O, Rat(1), 6);
    long total = 0;
    for (long c : counts) total += c;
    CHECK(total == box);
    CHECK(counts[0] == 1);
  }
}
