#include "cmpart/heegner.hpp"
#include "cmpart/qseries.hpp"

#include "doctest.h"

#include <algorithm>
#include <map>
#include <numeric>
#include <set>

using namespace cmpart;

namespace {

// Reduced primitive forms of discriminant d < 0 by direct search.
std::vector<QuadForm> reduced_forms(long d) {
  std::vector<QuadForm> out;
  for (long a = 1; 3 * a * a <= -d; ++a)
    for (long b = -a + 1; b <= a; ++b) {
      long num = b * b - d;
      if (num % (4 * a)) continue;
      long c = num / (4 * a);
      if (c < a || (c == a && b < 0)) continue;
      if (std::gcd(std::gcd(a, std::labs(b)), c) != 1) continue;
      out.push_back({a, b, c});
    }
  return out;
}

long brute_h(long d) { return static_cast<long>(reduced_forms(d).size()); }

bool is_reduced(const QuadForm& f) {
  long b = std::labs(f.b);
  if (b > f.a || f.a > f.c) return false;
  if ((b == f.a || f.a == f.c) && f.b < 0) return false;
  return true;
}

long content(const QuadForm& f) { return std::gcd(std::gcd(f.a, std::labs(f.b)), f.c); }

QuadForm divided(const QuadForm& f, long g) { return {f.a / g, f.b / g, f.c / g}; }

}  // namespace

TEST_CASE("discriminants of the partition traces") {
  CHECK(discriminant_for(1).delta == -23);
  CHECK(discriminant_for(2).delta == -47);
  CHECK(discriminant_for(5).delta == -119);
  Discriminant d = discriminant_for(24);  // 1 - 576 = -575 = -23 * 5^2
  CHECK(d.delta == -575);
  CHECK(d.fundamental == -23);
  CHECK(d.conductor == 5);
  CHECK_THROWS_AS(discriminant_for(0), InvalidInput);
}

TEST_CASE("class numbers agree with a direct count of reduced forms") {
  for (long d : {-3L, -4L, -7L, -23L, -47L, -71L, -95L, -119L, -239L})
    CHECK(class_number(d) == brute_h(d));
  CHECK(class_number(-23L) == 3);
  CHECK(class_number(-47L) == 5);
  CHECK(class_number(-71L) == 7);
}

TEST_CASE("Heegner forms: invariants and one representative per SL2 class") {
  for (long n = 1; n <= 50; ++n) {
    Discriminant d = discriminant_for(n);
    std::vector<QuadForm> forms = enumerate_classes(d);
    long expected = 0;
    std::multiset<QuadForm> want;
    for (long g = 1; g * g <= -d.delta; ++g) {
      if (d.delta % (g * g)) continue;
      long dd = d.delta / (g * g);
      if (mod(dd, 4) != 0 && mod(dd, 4) != 1) continue;
      for (const auto& f : reduced_forms(dd)) want.insert({f.a * g, f.b * g, f.c * g});
      expected += brute_h(dd);
    }
    CHECK(class_number(d) == expected);
    REQUIRE(static_cast<long>(forms.size()) == expected);
    std::multiset<QuadForm> got;
    for (const auto& f : forms) {
      CHECK(f.disc() == d.delta);
      CHECK(f.a % 6 == 0);
      CHECK(mod(f.b, 12) == 1);
      CHECK(f.b > 0);
      CHECK(f.b < 2 * f.a);
      long g = content(f);
      QuadForm r = sl2_reduce(divided(f, g)).form;
      got.insert({r.a * g, r.b * g, r.c * g});
    }
    CHECK(got == want);
  }
}

TEST_CASE("Heegner representatives for -23 give the three SL2 classes") {
  std::set<QuadForm> classes;
  for (QuadForm f : {QuadForm{6, 1, 1}, QuadForm{12, 13, 4}, QuadForm{18, 25, 9}}) {
    CHECK(f.disc() == -23);
    classes.insert(sl2_reduce(f).form);
  }
  std::vector<QuadForm> r = reduced_forms(-23);
  CHECK(classes == std::set<QuadForm>(r.begin(), r.end()));
}

TEST_CASE("a mixed-residue list of forms for -47 reaches only four classes") {
  // the list mixes b = 1, 5, 7, 11 mod 12; an Atkin-Lehner involution brings each to b = 1 mod 12,
  // and [24, 7, 1] and [36, 23, 4] land in the same class while [3, -1, 4] is never reached
  std::set<QuadForm> classes;
  for (QuadForm f : {QuadForm{6, 1, 2}, QuadForm{12, 1, 1}, QuadForm{18, 5, 1}, QuadForm{24, 7, 1},
                     QuadForm{36, 23, 4}}) {
    CHECK(f.disc() == -47);
    bool moved = false;
    for (int w : {AL_ID, AL_W2, AL_W3, AL_W6}) {
      QuadForm g = transform_root(f, atkin_lehner_matrix(w));
      if (g.a % 6 != 0 || mod(g.b, 12) != 1) continue;
      CHECK(g.disc() == -47);
      classes.insert(sl2_reduce(g).form);
      moved = true;
      break;
    }
    CHECK(moved);
  }
  CHECK(classes == std::set<QuadForm>{{1, 1, 12}, {2, -1, 6}, {2, 1, 6}, {3, 1, 4}});
  std::set<QuadForm> ours;
  for (const auto& f : enumerate_classes(discriminant_for(2))) ours.insert(sl2_reduce(f).form);
  std::vector<QuadForm> r = reduced_forms(-47);
  CHECK(ours == std::set<QuadForm>(r.begin(), r.end()));
}

TEST_CASE("sl2_reduce returns a reduced equivalent form and its transform") {
  for (QuadForm f : {QuadForm{6, 1, 1}, QuadForm{36, 23, 4}, QuadForm{97, 131, 45}, QuadForm{5, -9, 7},
                     QuadForm{1, 0, 1}, QuadForm{3, 3, 1}}) {
    ReducedForm r = sl2_reduce(f);
    CHECK(is_reduced(r.form));
    CHECK(r.form.disc() == f.disc());
    CHECK(r.transform.det() == 1);
    CHECK(transform_root(f, r.transform) == r.form);
  }
  CHECK(sl2_reduce({3, 3, 1}).form == QuadForm{1, 1, 1});
  CHECK(sl2_reduce({5, 10, 6}).form == QuadForm{1, 0, 5});
}

TEST_CASE("transform_root moves the root of the form by the matrix") {
  const long bits = 128;
  QuadForm f{6, 1, 1};
  for (Mat2 m : {Mat2{1, 1, 0, 1}, Mat2{0, -1, 1, 0}, Mat2{2, 1, 7, 4}, atkin_lehner_matrix(AL_W2),
                 atkin_lehner_matrix(AL_W3), atkin_lehner_matrix(AL_W6)}) {
    CBall z = form_root(f, bits);
    CBall num = CBall::from_rat(Rat(m.p), bits) * z + CBall::from_rat(Rat(m.q), bits);
    CBall den = CBall::from_rat(Rat(m.r), bits) * z + CBall::from_rat(Rat(m.s), bits);
    CBall moved = num / den;
    CBall root = form_root(transform_root(f, m), bits);
    CHECK((moved - root).abs_upper_log2() < -100);
  }
}

TEST_CASE("Atkin-Lehner matrices normalise Gamma0(6)") {
  for (int w : {AL_W2, AL_W3, AL_W6}) {
    Mat2 m = atkin_lehner_matrix(w);
    long e = w == AL_W2 ? 2 : w == AL_W3 ? 3 : 6;
    CHECK(m.det() == e);
    CHECK(m.r % 6 == 0);
    Mat2 sq = m * m;
    // W^2 is e times an element of Gamma0(6)
    CHECK(sq.p % e == 0);
    CHECK(sq.q % e == 0);
    CHECK(sq.r % (6 * e) == 0);
    CHECK(sq.s % e == 0);
  }
}

TEST_CASE("evaluation points keep the discriminant and do not raise the leading coefficient") {
  // imprimitive classes are evaluated through their primitive part (same root)
  for (long n : {1L, 2L, 3L, 7L, 24L}) {
    for (const auto& f : enumerate_classes(discriminant_for(n))) {
      QuadForm g = divided(f, content(f));
      EvalPoint e = evaluation_point(f);
      CHECK(e.form.disc() == g.disc());
      CHECK(e.form.a > 0);
      CHECK(e.form.a <= g.a);
      CHECK(e.form.a % 6 == 0);
    }
  }
}

TEST_CASE("Hurwitz class numbers") {
  CHECK(hurwitz_class_number(3) == Rat(1, 3));
  CHECK(hurwitz_class_number(4) == Rat(1, 2));
  CHECK(hurwitz_class_number(7) == 1);
  CHECK(hurwitz_class_number(12) == Rat(4, 3));
  CHECK(hurwitz_class_number(23) == 3);
  for (long N = 3; N <= 600; ++N) {
    if (N % 4 == 1 || N % 4 == 2) continue;
    // all reduced forms of discriminant -N, primitive or not, with the usual weights
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
    CHECK(hurwitz_class_number(N) == h);
  }
}
