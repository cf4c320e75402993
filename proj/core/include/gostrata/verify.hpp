#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <string>

#include "gostrata/dieudonne.hpp"

namespace gos {

// Proper random S on one prime; the prime splits in E exactly when the gap count is even.
ShimuraDatum random_single_prime_datum(int f, std::mt19937_64& rng);

// Independent stream for trial `index` of a seeded run.
std::mt19937_64 trial_rng(std::uint64_t seed, std::uint64_t index);

struct RoundtripOutcome {
  Mask stratum = 0;
  int strata_checked = 0;
  int strata_exact = 0;
  std::string failure;  // first failure, empty when every stratum came back exactly
  bool exact() const { return failure.empty() && strata_exact == strata_checked; }
};

// Every T inside the stratum of the point: triple, reconstruction, comparison.
RoundtripOutcome roundtrip_all_strata(const DieudonnePoint& pt, Mask s_lift_sheet1);

// Structural properties of the Delta sets against T' and the lift (run exits, entry
// and exit points, double steps over S). Empty when they all hold.
std::string delta_property_violation(const ShimuraDatum& d, const StratumDescriptor& desc,
                                     const LiftChoice& lift, const DeltaSets& delta);

// signature of the lift of S(T) against the signature corrected by the Delta sets.
bool dimension_count_holds(const ShimuraDatum& d, const LiftChoice& lift, const DeltaSets& delta);

struct TrialSample {
  ShimuraDatum datum;
  Mask sheet1 = 0;
  DieudonnePoint point;
};

// A random datum (unless one is given), a random S-lift and a random point on it.
TrialSample sample_trial(long p, int f, int N, std::uint64_t seed, std::uint64_t index,
                         const std::optional<ShimuraDatum>& datum = std::nullopt);

}  // namespace gos
