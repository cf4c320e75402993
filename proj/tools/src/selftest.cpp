#include "selftest.hpp"

#include <atomic>
#include <functional>
#include <mutex>
#include <ostream>
#include <string>
#include <thread>
#include <vector>

#include "gostrata/gostrata.hpp"
#include "gostrata_cli/cli.hpp"

namespace gos::cli {
namespace {

struct Check {
  std::string name;
  std::function<std::string()> body;  // empty string on success
};

std::string quartic_table() {
  const ShimuraDatum d = single_prime_datum(4, true, 0);
  for (Mask t = 0; t < 16; ++t) {
    const StratumDescriptor desc = stratum_descriptor(d, {t});
    const int k = popcount(t);
    int want_n = 0;
    if (k == 1 || k == 3) want_n = 1;
    if (t == 0b0101 || t == 0b1010) want_n = 2;
    const bool want_iwahori = t == 0b1111;
    if (desc.n_bundle != want_n) return "T mask " + std::to_string(t) + ": N=" + std::to_string(desc.n_bundle);
    if ((desc.target.level[0] == Level::Iwahori) != want_iwahori)
      return "T mask " + std::to_string(t) + ": wrong level";
  }
  return {};
}

std::string delta_sweep(int fmax) {
  for (int f = 1; f <= fmax; ++f)
    for (int split = 0; split < 2; ++split)
      for (Mask s = 0; s < full_mask(f); ++s) {
        const ShimuraDatum d = single_prime_datum(f, split == 1, s);
        const Mask gaps = d.gaps(0);
        for (Mask t = gaps;; t = (t - 1) & gaps) {
          const StratumDescriptor desc = stratum_descriptor(d, {t});
          const bool b2_split = desc.cases[0] == CaseTag::B2 && split == 1;
          if (!b2_split) {
            const LiftChoice lift = lift_assignment(d, desc);
            const DeltaSets delta = delta_sets(d, desc, lift);
            const std::string v = delta_property_violation(d, desc, lift, delta);
            if (!v.empty()) return "f=" + std::to_string(f) + " S=" + std::to_string(s) + ": " + v;
            if (!dimension_count_holds(d, lift, delta))
              return "dimension count fails at f=" + std::to_string(f) + " S=" + std::to_string(s);
          }
          if (t == 0) break;
        }
      }
  return {};
}

std::string roundtrips(int trials, int jobs) {
  struct Job {
    long p;
    int f;
    int index;
  };
  std::vector<Job> work;
  for (long p : {2L, 3L, 5L})
    for (int f : {2, 3})
      for (int i = 0; i < trials; ++i) work.push_back({p, f, i});
  std::mutex mu;
  std::string first;
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t k = next++; k < work.size(); k = next++) {
      const Job& j = work[k];
      std::string why;
      try {
        const TrialSample s = sample_trial(j.p, j.f, 8, 20240601, static_cast<std::uint64_t>(j.index));
        const RoundtripOutcome rt = roundtrip_all_strata(s.point, s.sheet1);
        if (!rt.exact()) why = rt.failure;
        const IdentityReport ids = check_frobenius_identities(s.point);
        if (why.empty() && !ids.ok()) why = "identities: " + ids.detail;
        const Mask before = rt.stratum;
        const Mask after = stratum_of_point(twisted_partial_frobenius(s.point));
        if (why.empty() && after != shift_emask(j.f, true, before, 2)) why = "twist moved the stratum wrongly";
      } catch (const DomainError& e) {
        why = e.what();
      }
      if (!why.empty()) {
        std::lock_guard<std::mutex> lock(mu);
        if (first.empty()) first = "p=" + std::to_string(j.p) + " f=" + std::to_string(j.f) + ": " + why;
      }
    }
  };
  std::vector<std::thread> pool;
  for (int w = 0; w < std::max(1, jobs); ++w) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
  return first;
}

WElem iterate_phi(const WittRing& r, WElem a, int times) {
  for (int i = 0; i < times; ++i) a = r.frobenius(a, 1);
  return a;
}

std::string witt(int samples) {
  std::mt19937_64 rng(99);
  for (long p : {2L, 3L, 5L})
    for (int m = 1; m <= 4; ++m) {
      const WittRing r(p, m, 8);
      for (int i = 0; i < samples; ++i) {
        const WElem a = r.random(rng), b = r.random(rng);
        if (r.frobenius(r.mul(a, b), 1) != r.mul(r.frobenius(a, 1), r.frobenius(b, 1)) ||
            r.frobenius(r.add(a, b), 1) != r.add(r.frobenius(a, 1), r.frobenius(b, 1)) ||
            iterate_phi(r, a, m) != a || r.truncate(r.sub(r.frobenius(a, 1), r.pow(a, static_cast<unsigned long long>(p))), 1) != r.zero())
          return "p=" + std::to_string(p) + " m=" + std::to_string(m);
      }
    }
  return {};
}

std::string picard(int fmax) {
  for (long p : {2L, 3L})
    for (int f = 2; f <= fmax; ++f)
      for (Mask s = 0; s < full_mask(f); ++s) {
        const ShimuraDatum d = single_prime_datum(f, true, s);
        if (popcount(d.gaps(0)) < 2) continue;
        const HasseMatrix h = hasse_matrix(d, p);
        if (h.det == 0) return "singular matrix at f=" + std::to_string(f);
        for (const ArchPlace& tau : h.basis.taus) {
          const Rational fd = fiber_degree(d, p, divisor_class(d, p, tau), tau);
          if (fd != Rational(normal_bundle_class(d, p, tau))) return "fiber degree at f=" + std::to_string(f);
        }
      }
  return {};
}

// The straight link from b to its rotation by k steps.
Link rotation(const Band& b, long k) {
  Link l{b, Band{b.n, 0}, {}};
  for (int v : members(b.nodes)) {
    l.target.nodes |= bit(mod(v + k, b.n));
    l.disp[v] = k;
  }
  return l;
}

std::string links() {
  for (int f = 1; f <= 8; ++f)
    for (Mask s = 0; s < full_mask(f); ++s) {
      const ShimuraDatum d = single_prime_datum(f, true, s);
      for (long a = 0; a < 4; ++a)
        for (long b = 0; b < 4; ++b) {
          const Link la = frobenius_link(d, 0, a);
          const Link lb = rotation(la.target, b);
          if (total_displacement(compose(lb, la)) != total_displacement(la) + total_displacement(lb))
            return "additivity fails at f=" + std::to_string(f);
          if (total_displacement(compose(la, invert(la))) != 0) return "inverse fails at f=" + std::to_string(f);
          if (compose(invert(la), la) != identity_link(la.source)) return "inverse is not two-sided at f=" + std::to_string(f);
        }
    }
  return {};
}

}  // namespace

int run_selftest(const SelftestArgs& a, std::ostream& out) {
  const bool q = a.quick;
  const std::vector<Check> checks = {
      {"strata: quartic table", quartic_table},
      {"strata: delta properties and dimension count", [q] { return delta_sweep(q ? 5 : 8); }},
      {"dieudonne: roundtrip, identities, twist", [q, &a] { return roundtrips(q ? 2 : 10, a.jobs); }},
      {"witt: frobenius lift", [q] { return witt(q ? 50 : 500); }},
      {"picard: fiber degrees and determinants", [q] { return picard(q ? 5 : 8); }},
      {"links: displacement additivity", links},
  };
  int failed = 0;
  for (const Check& c : checks) {
    std::string why;
    try {
      why = c.body();
    } catch (const DomainError& e) {
      why = std::string("unexpected error: ") + e.what();
    }
    if (why.empty()) {
      out << "[ok]   " << c.name << '\n';
    } else {
      ++failed;
      out << "[FAIL] " << c.name << ": " << why << '\n';
    }
  }
  out << (checks.size() - static_cast<std::size_t>(failed)) << '/' << checks.size() << " checks passed\n";
  return failed == 0 ? kExitOk : kExitDomain;
}

}  // namespace gos::cli
