#include <doctest.h>

#include "tensorlev/rng.hpp"

#include <cmath>
#include <set>

using namespace tensorlev;

TEST_CASE("same seed and path give identical draws") {
  RngStream a = RngStream(42).child({3, 7});
  RngStream b = RngStream(42).child(3).child(7);
  for (int i = 0; i < 100; ++i) CHECK(a.next_u64() == b.next_u64());
}

TEST_CASE("child does not advance the parent") {
  RngStream a(9), b(9);
  (void)a.child(1);
  a.child(2).next_u64();
  CHECK(a.next_u64() == b.next_u64());
}

TEST_CASE("distinct children decorrelate") {
  RngStream root(1);
  RngStream a = root.child(0), b = root.child(1);
  int equal = 0;
  for (int i = 0; i < 1000; ++i) equal += (a.next_u64() == b.next_u64());
  CHECK(equal == 0);
}

TEST_CASE("uniform and normal moments") {
  RngStream r(5);
  const int n = 200000;
  double su = 0, sn = 0, sn2 = 0;
  for (int i = 0; i < n; ++i) {
    const double u = r.uniform();
    CHECK_UNARY(u >= 0.0);
    CHECK_UNARY(u < 1.0);
    su += u;
    const double z = r.normal();
    sn += z;
    sn2 += z * z;
  }
  CHECK(su / n == doctest::Approx(0.5).epsilon(0.01));
  CHECK(std::abs(sn / n) < 0.01);
  CHECK(sn2 / n == doctest::Approx(1.0).epsilon(0.02));
}

TEST_CASE("below stays in range and hits every value") {
  RngStream r(11);
  std::set<std::uint64_t> seen;
  for (int i = 0; i < 2000; ++i) {
    auto v = r.below(7);
    CHECK(v < 7);
    seen.insert(v);
  }
  CHECK(seen.size() == 7);
}

TEST_CASE("sampling without replacement yields distinct values") {
  RngStream r(3);
  auto s = r.sample_without_replacement(1000, 300);
  std::set<std::uint64_t> u(s.begin(), s.end());
  CHECK(u.size() == 300);
  CHECK(*u.rbegin() < 1000);
  auto all = r.sample_without_replacement(5, 5);
  CHECK(std::set<std::uint64_t>(all.begin(), all.end()).size() == 5);
}

TEST_CASE("categorical sampling follows the inverse CDF") {
  std::vector<double> w{0.0, 1.0, 0.0, 3.0};
  CHECK(sample_categorical(w, 4.0, 0.0) == 1);
  CHECK(sample_categorical(w, 4.0, 0.2499) == 1);
  CHECK(sample_categorical(w, 4.0, 0.25) == 3);
  CHECK(sample_categorical(w, 4.0, 0.999999) == 3);
}
