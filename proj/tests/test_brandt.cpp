#include "cmpart/brandt.hpp"
#include "cmpart/heegner.hpp"

#include "doctest.h"
#include "json.hpp"

using namespace cmpart;

namespace {

Rat hurwitz_brute(long N) {
  Rat h = 0;
  for (long a = 1; 3 * a * a <= N; ++a)
    for (long b = -a + 1; b <= a; ++b) {
      long num = b * b + N;
      if (num % (4 * a)) continue;
      long c = num / (4 * a);
      if (c < a || (c == a && b < 0)) continue;
      if (b == 0 && a == c)
        h += Rat(1, 2);
      else if (b == a && a == c)
        h += Rat(1, 3);
      else
        h += 1;
    }
  return h;
}

RatMatrix matrix(const BrandtData& d, long m) { return d.mats.at(m - 1).b; }

}  // namespace

TEST_CASE("Eichler mass formula") {
  for (long ell : {5L, 7L, 11L, 13L, 17L, 19L}) {
    CHECK(eichler_mass(ell, 6) == Rat(ell - 1) / 2);
    CHECK(eichler_mass(ell, 1) == Rat(ell - 1) / 24);
    for (long level : {1L, 6L}) {
      BrandtData d = brandt_data(ell, level, 2);
      Rat mass = 0;
      for (long w : d.classes.weights) mass += Rat(1, w);
      CHECK(mass == eichler_mass(ell, level));
      CHECK(d.classes.mass == mass);
    }
  }
}

TEST_CASE("level 6 at ell = 13: twelve classes with unit group of order 2") {
  BrandtData d = brandt_data(13, 6, 2);
  CHECK(d.classes.s() == 12);
  for (long w : d.classes.weights) CHECK(w == 2);
}

TEST_CASE("structural checks of the Brandt matrices") {
  for (long ell : {5L, 7L}) {
    BrandtData d = brandt_data(ell, 6, ell == 5 ? 25 : 20);
    BrandtReport r = check_brandt(d.classes, d.mats);
    CHECK(r.identity);
    CHECK(r.symmetry);
    CHECK(r.row_sums);
    CHECK(r.hecke);
    CHECK_FALSE(r.relations_checked.empty());
  }
  BrandtData d = brandt_data(5, 6, 25);
  CHECK(mat_mul(matrix(d, 5), matrix(d, 5)) == matrix(d, 25));
  // at 2 and 3 the norm counts are not powers of B(p): row sums 5 and 13 for B(2) and B(4)
  CHECK(mat_mul(matrix(d, 2), matrix(d, 2)) != matrix(d, 4));
  for (const auto& row : matrix(d, 4)) {
    Rat sum = 0;
    for (const auto& x : row) sum += x;
    CHECK(sum == 13);
  }
}

TEST_CASE("multiplicativity B(5) B(7) = B(35) at ell = 13") {
  BrandtData d = brandt_data(13, 1, 35);
  CHECK(mat_mul(matrix(d, 5), matrix(d, 7)) == matrix(d, 35));
  CHECK(mat_mul(matrix(d, 2), matrix(d, 3)) == matrix(d, 6));
  // T_4 = T_2^2 - 2 T_1 away from the level
  RatMatrix t2 = mat_mul(matrix(d, 2), matrix(d, 2));
  RatMatrix t4 = matrix(d, 4);
  for (std::size_t i = 0; i < t4.size(); ++i)
    for (std::size_t j = 0; j < t4.size(); ++j) CHECK(t2[i][j] - (i == j ? 2 : 0) == t4[i][j]);
}

TEST_CASE("Eichler's class number relation") {
  for (long ell : {11L, 13L}) {
    BrandtData d = brandt_data(ell, 1, 2);
    for (long delta : {-7L, -8L, -20L, -23L, -47L, -71L}) {
      long k = kronecker(Int(delta), Int(ell));
      CHECK(hurwitz_sum(d.classes, delta) == Rat(1 - k) * hurwitz_brute(-delta));
    }
  }
}

TEST_CASE("oriented embedding counts for discriminant -47 at ell = 13") {
  BrandtData d = brandt_data(13, 6, 2);
  Orientations ori = orientations(d.classes);
  OrientedCounts oc = oriented_counts(d.classes, ori, -47);
  CHECK(embedding_vector(d.classes, -47) == oc.total);
  for (int c2 = 0; c2 < 2; ++c2)
    for (int c3 = 0; c3 < 2; ++c3)
      for (int ce = 0; ce < 2; ++ce) {
        std::vector<long> v = oriented_vector(oc, c2, c3, ce);
        long sum = 0;
        for (long x : v) sum += x;
        CHECK(sum == class_number(-47L));
      }
}

TEST_CASE("Gross vectors") {
  for (auto [ell, delta] : std::vector<std::pair<long, long>>{{11, -71}, {13, -47}, {7, -23}}) {
    BrandtData d = brandt_data(ell, 1, 2);
    std::vector<Rat> v = gross_vector(d.classes, delta);
    Rat sum = 0;
    for (const auto& x : v) sum += x;
    CHECK(sum == 2 * class_number(delta));
  }
  // with a single class the vector is trivially an eigenvector
  BrandtData one = brandt_data(13, 1, 5);
  REQUIRE(one.classes.s() == 1);
  for (const auto& e : eigen_checks(one.mats, gross_vector(one.classes, -47), {2, 3, 5})) CHECK(e.eigen);
}

TEST_CASE("JSON export and cache round trip") {
  BrandtData a = brandt_data(7, 6, 6);
  auto j = nlohmann::json::parse(brandt_to_json(a.classes, a.mats));
  CHECK(j["s"].dump() == "\"" + std::to_string(a.classes.s()) + "\"");
  BrandtData b = brandt_data(7, 6, 6);
  CHECK(b.classes.weights == a.classes.weights);
  for (long m = 1; m <= 6; ++m) CHECK(matrix(a, m) == matrix(b, m));
  BrandtData fresh = brandt_data(7, 6, 6, false);
  for (long m = 1; m <= 6; ++m) CHECK(matrix(fresh, m) == matrix(a, m));
}
