#include <doctest.h>

#include <stdexcept>

#include <cmath>
#include <numeric>

#include "kamsim/arrivals.hpp"
#include "kamsim/rng.hpp"
#include "kamsim/stats.hpp"

using namespace kamsim;

TEST_CASE("gen_poisson basics") {
  CHECK(gen_poisson(1.0, 0, 7).empty());
  CHECK_THROWS_AS(gen_poisson(0.0, 10, 1), std::invalid_argument);
  CHECK_THROWS_AS(gen_poisson(-1.0, 10, 1), std::invalid_argument);

  ArrivalSequence seq = gen_poisson(1.0, 10000, 1);
  REQUIRE(seq.size() == 10000);
  REQUIRE(seq.gaps.size() == 9999);
  double m = std::accumulate(seq.gaps.begin(), seq.gaps.end(), 0.0) / 9999.0;
  CHECK(m == doctest::Approx(1.0).epsilon(0.05));  // law of large numbers
  for (std::size_t i = 1; i < seq.times.size(); ++i) CHECK(seq.times[i] > seq.times[i - 1]);
  CHECK(seq.gaps[5] == seq.times[6] - seq.times[5]);
}

TEST_CASE("generators are bit-for-bit deterministic in the seed") {
  ArrivalSequence a = gen_poisson(0.37, 500, 99);
  ArrivalSequence b = gen_poisson(0.37, 500, 99);
  CHECK(a.times == b.times);

  HawkesParams p{0.4, 1.2, 2.0};
  ArrivalSequence h1 = gen_hawkes(p, 500, 42);
  ArrivalSequence h2 = gen_hawkes(p, 500, 42);
  CHECK(h1.times == h2.times);
  CHECK(gen_hawkes(p, 500, 43).times != h1.times);
}

TEST_CASE("gen_hawkes validation and basic shape") {
  CHECK_THROWS_AS(gen_hawkes(HawkesParams{0.0, 1.0, 1.0}, 10, 1), std::invalid_argument);
  CHECK_THROWS_AS(gen_hawkes(HawkesParams{1.0, -0.1, 1.0}, 10, 1), std::invalid_argument);
  CHECK_THROWS_AS(gen_hawkes(HawkesParams{1.0, 1.0, 0.0}, 10, 1), std::invalid_argument);
  CHECK_THROWS_AS(gen_hawkes(HawkesParams{1.0, 1.0, 1.0}, 0, 1), std::invalid_argument);

  // parameter ranges used by the synthetic experiments, explosive draws included
  Rng rng(5);
  for (int k = 0; k < 10; ++k) {
    HawkesParams p{rng.uniform(0.0, 1.0), rng.uniform(0.0, 5.0), rng.uniform(0.0, 5.0)};
    ArrivalSequence seq = gen_hawkes(p, 200, rng.next_u64());
    REQUIRE(seq.size() == 200);
    for (std::size_t i = 1; i < seq.times.size(); ++i) CHECK(seq.times[i] > seq.times[i - 1]);
  }
}

TEST_CASE("hawkes with alpha=0 reduces to poisson") {
  ArrivalSequence h = gen_hawkes(HawkesParams{1.0, 0.0, 1.0}, 10000, 3);
  ArrivalSequence p = gen_poisson(1.0, 10000, 301);
  CHECK(ks_pvalue_two_sample(h.gaps, p.gaps) > 0.01);
  // and the hawkes gaps themselves look like Exponential(1)
  CHECK(ks_pvalue_exp1(h.gaps) > 0.01);
}

TEST_CASE("intensity closed-form points") {
  HawkesParams p{1.0, 2.0, 1.0};
  ArrivalSequence empty;
  CHECK(intensity(p, empty, 0.0) == doctest::Approx(1.0));

  ArrivalSequence one = ArrivalSequence::from_times({1.0});
  CHECK(intensity(p, one, 1.0) == doctest::Approx(3.0));  // jump of size alpha
  CHECK(intensity(p, one, 1.0 + std::log(2.0)) == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(intensity(p, one, 0.5) == doctest::Approx(1.0));  // before the event
}

TEST_CASE("compensator closed-form points and monotonicity") {
  HawkesParams base{0.7, 2.0, 1.0};
  ArrivalSequence empty;
  CHECK(compensator(base, empty, 5.0) == doctest::Approx(3.5));

  // alpha == beta: integrated kernel contributes one expected event per parent
  HawkesParams unit{1e-300, 3.0, 3.0};  // vanishing base rate isolates the kernel
  ArrivalSequence one = ArrivalSequence::from_times({1.0});
  CHECK(compensator(unit, one, 1e9) == doctest::Approx(1.0).epsilon(1e-12));

  Rng rng(17);
  for (int k = 0; k < 100; ++k) {
    HawkesParams p{rng.uniform(0.1, 1.0), rng.uniform(0.0, 5.0), rng.uniform(0.1, 5.0)};
    ArrivalSequence seq = gen_hawkes(p, 50, rng.next_u64());
    double t1 = rng.uniform(0.0, seq.times.back());
    double t2 = t1 + rng.uniform(0.0, seq.times.back());
    CHECK(compensator(p, seq, t2) >= compensator(p, seq, t1) - 1e-12);
  }
  CHECK_THROWS_AS(compensator(base, empty, -1.0), std::invalid_argument);
}

TEST_CASE("rescaled_gaps equals per-event compensator differences") {
  HawkesParams p{0.6, 1.5, 2.5};
  ArrivalSequence seq = gen_hawkes(p, 300, 11);
  std::vector<double> fast = rescaled_gaps(p, seq);
  REQUIRE(fast.size() == 300);
  double prev = 0.0;
  for (std::size_t k = 0; k < seq.size(); ++k) {
    double lam = compensator(p, seq, seq.times[k]);
    CHECK(fast[k] == doctest::Approx(lam - prev).epsilon(1e-9));
    prev = lam;
  }
}

TEST_CASE("time-rescaled hawkes gaps look unit exponential") {
  HawkesParams p{0.8, 1.0, 2.0};  // branching ratio 0.5
  ArrivalSequence seq = gen_hawkes(p, 5000, 11);
  CHECK(ks_pvalue_exp1(rescaled_gaps(p, seq)) > 0.01);
}

TEST_CASE("from_times validation") {
  CHECK_THROWS_AS(ArrivalSequence::from_times({1.0, 0.5}), std::invalid_argument);
  CHECK_THROWS_AS(ArrivalSequence::from_times({0.0, 1.0}), std::invalid_argument);
  ArrivalSequence seq = ArrivalSequence::from_times({1.0, 1.0, 2.0});  // trace ties allowed
  CHECK(seq.gaps == std::vector<double>{0.0, 1.0});
}
