// Acceptance suite: eight exhaustive or randomized checks with exact
// arithmetic and wall-clock limits. One line per criterion; exit status is
// the number of failures.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <functional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "bzfam/dimension.hpp"
#include "bzfam/family.hpp"
#include "bzfam/json_io.hpp"
#include "bzfam/weil_deligne.hpp"
#include "oracles.hpp"
#include "scenarios.hpp"

using namespace bzfam;

namespace {

struct Outcome {
  bool pass = true;
  std::size_t cases = 0;
  std::string detail;

  void fail(const std::string& why) {
    if (pass) detail = why;
    pass = false;
  }
};

const std::vector<PrimePower>& all_qs() {
  static const std::vector<PrimePower> qs = [] {
    std::vector<PrimePower> out;
    for (int q : {2, 3, 4, 5, 7, 8, 9, 11, 13, 16}) out.push_back(PrimePower::from_q(q));
    return out;
  }();
  return qs;
}

ExactInt power(const ExactInt& base, unsigned long e) {
  ExactInt r;
  mpz_pow_ui(r.get_mpz_t(), base.get_mpz_t(), e);
  return r;
}

/// Multisets of k positions in [0, k-1] that contain 0: every support shape
/// of size k up to translation and widening of gaps.
void supports_of_size(int k, const std::function<void(const std::vector<std::int64_t>&)>& visit) {
  std::vector<std::int64_t> pts{0};
  std::function<void(std::int64_t)> rec = [&](std::int64_t from) {
    if (static_cast<int>(pts.size()) == k) {
      visit(pts);
      return;
    }
    for (std::int64_t x = from; x < k; ++x) {
      pts.push_back(x);
      rec(x);
      pts.pop_back();
    }
  };
  rec(0);
}

Outcome steinberg_identity() {
  Outcome o;
  for (const auto& q : all_qs()) {
    for (int n = 1; n <= 8; ++n) {
      ++o.cases;
      const auto expected = power(q.q(), static_cast<unsigned long>(n * (n - 1) / 2));
      if (parabolic_alternating_sum(n, q) != expected) {
        o.fail("n=" + std::to_string(n) + " q=" + q.q().get_str());
      }
    }
  }
  return o;
}

Outcome valuation_theorem() {
  Outcome o;
  for (int k = 1; k <= 8; ++k) {
    supports_of_size(k, [&](const std::vector<std::int64_t>& pts) {
      for (const auto& s : oracle::all_with_support(pts)) {
        const auto stat = oracle::triangular_statistic(s);
        for (const auto& q : all_qs()) {
          ++o.cases;
          if (valuation_statistic(standard_module_k1_dim(s, q), q) != stat) {
            o.fail(to_string(s) + " q=" + q.q().get_str());
          }
        }
      }
    });
  }
  return o;
}

Outcome flag_counts() {
  Outcome o;
  for (const auto& q : all_qs()) {
    const ExactInt p(q.p());
    for (int n = 1; n <= 8; ++n) {
      for (const auto& c : compositions(n)) {
        ++o.cases;
        const ExactInt r = gaussian_flag_count(c, q) % p;
        if (r != 1) o.fail("n=" + std::to_string(n) + " q=" + q.q().get_str());
      }
    }
  }
  return o;
}

Outcome monotonicity_law() {
  Outcome o;
  for (int k = 1; k <= 7; ++k) {
    supports_of_size(k, [&](const std::vector<std::int64_t>& pts) {
      const auto g = downward_closure_graph(oracle::singletons(pts));
      if (g.nodes.size() != oracle::all_with_support(pts).size()) {
        o.fail("closure size mismatch");
      }
      for (const auto& e : g.edges) {
        ++o.cases;
        const auto& parent = g.nodes[e.parent];
        const auto& child = g.nodes[e.child];
        const auto gone = oracle::bag_minus(parent.segments(), child.segments());
        if (gone.size() != 2) {
          o.fail("edge does not replace a pair: " + to_string(parent));
          continue;
        }
        const auto& a = gone[0];
        const auto& b = gone[1];
        const auto c = std::max<std::int64_t>(
            0, std::min(a.last(), b.last()) - std::max(a.start, b.start) + 1);
        const auto delta =
            oracle::triangular_statistic(child) - oracle::triangular_statistic(parent);
        const auto product = (a.length - c) * (b.length - c);
        if (delta != product || delta <= 0 ||
            delta != elementary_statistic_delta(a.length, b.length, c) ||
            delta != e.statistic_delta) {
          o.fail(to_string(parent) + " -> " + to_string(child));
        }
      }
    });
  }
  return o;
}

Outcome triangle_robustness() {
  Outcome o;
  gen::Rng rng(20240601);
  for (int k = 1; k <= 6; ++k) {
    for (int draw = 0; draw < 1000; ++draw) {
      ++o.cases;
      const auto s = gen::unramified(rng, k, 4, k);
      const auto& q = all_qs()[static_cast<std::size_t>(gen::uniform(rng, 0, 9))];
      const ExactInt p(q.p());
      std::map<Multisegment, ExactInt> mults;
      for (const auto& t : downward_closure(s)) {
        if (t != s && gen::coin(rng)) {
          // Multiplicities may share factors with p.
          mults[t] = ExactInt(static_cast<long>(gen::uniform(rng, 1, 1 << 20))) *
                     power(p, static_cast<unsigned long>(gen::uniform(rng, 0, 3)));
        }
      }
      ExactInt unit;
      do {
        unit = static_cast<long>(gen::uniform(rng, 1, 1 << 30));
      } while (unit % p == 0);
      if (!triangle_check(s, q, mults, unit)) o.fail(to_string(s) + " q=" + q.q().get_str());
    }
  }
  return o;
}

Outcome exp_count() {
  Outcome o;
  for (int n = 1; n <= 10; ++n) {
    for (const auto& blocks : oracle::partitions(n)) {
      ++o.cases;
      const JordanPartition p(blocks);
      std::int64_t expected = 0;
      for (int l : blocks) expected += l * (l - 1) / 2;
      const auto e = exp_nilpotent(p);
      const auto count = static_cast<std::int64_t>(
          (e - RationalMatrix::identity(e.rows())).nonzero_count());
      const auto nmat = monodromy_matrix(p);
      auto pow = RationalMatrix::identity(nmat.rows());
      for (int i = 0; i < n; ++i) pow = pow * nmat;
      if (count != expected || nonzero_count_exp(p) != expected || !pow.is_zero()) {
        std::ostringstream os;
        for (int l : blocks) os << l << ' ';
        o.fail("partition " + os.str());
      }
    }
  }
  return o;
}

Outcome ratio_valuations() {
  Outcome o;
  gen::Rng rng(7);
  for (int trial = 0; trial < 200; ++trial) {
    auto sc = gen::mixed_scenario(rng, static_cast<int>(gen::uniform(rng, 1, 3)),
                                  static_cast<int>(gen::uniform(rng, 1, 4)));
    std::vector<std::int64_t> reference;
    for (int seed = 0; seed < 10; ++seed) {
      sc.unit_seeds = {static_cast<std::uint64_t>(gen::uniform(rng, 0, 1LL << 40)),
                       static_cast<std::uint64_t>(gen::uniform(rng, 0, 1LL << 40))};
      std::vector<std::int64_t> values;
      for (const auto& x : sc.site.points()) {
        for (int j = 0; j < static_cast<int>(sc.fields.size()); ++j) {
          ++o.cases;
          const auto v = ratio_valuation(sc, x, j);
          std::int64_t expected = 0;
          for (const auto& s : sc.at(x, j).segments()) {
            expected += sc.lines.lookup(s.line).block_size * s.length * (s.length - 1) / 2;
          }
          if (v != expected) o.fail("scenario " + std::to_string(trial) + " point " + x);
          values.push_back(v);
        }
      }
      if (seed == 0) {
        reference = values;
      } else if (values != reference) {
        o.fail("seed dependence in scenario " + std::to_string(trial));
      }
    }
  }
  return o;
}

Outcome rigidity_pipeline() {
  Outcome o;
  gen::Rng rng(99);
  for (int trial = 0; trial < 50; ++trial) {
    ++o.cases;
    const auto g = gen::twist_constant(rng, static_cast<int>(gen::uniform(rng, 2, 3)),
                                       static_cast<int>(gen::uniform(rng, 3, 6)));
    const auto report = run_pipeline(g.scenario, g.x0);
    const std::set<std::string> locus(report.locus.begin(), report.locus.end());
    const auto& site = g.scenario.site;
    bool ok = report.certified() && locus.count(g.x0) && locus == g.expected_locus &&
              site.is_clopen(site.make_set(report.locus));
    std::size_t in_sigma = 0;
    for (const auto& p : report.locus) in_sigma += g.scenario.sigma.contains(site.index_of(p));
    ok = ok && report.verdicts.size() == in_sigma;
    for (const auto& v : report.verdicts) {
      ok = ok && v.twist_equal;
      for (int i = 0; i < static_cast<int>(g.scenario.fields.size()); ++i) {
        ok = ok && twist_orbit_equal(g.scenario.at(v.point, i), g.scenario.at(g.x0, i),
                                     g.scenario.lines);
      }
    }
    ok = ok && io::to_json(run_pipeline(g.scenario, g.x0)) == io::to_json(report);
    if (!ok) o.fail("twist-constant scenario " + std::to_string(trial));
  }
  for (int trial = 0; trial < 10; ++trial) {
    ++o.cases;
    const auto g = gen::adversarial(rng, static_cast<int>(gen::uniform(rng, 2, 3)),
                                    static_cast<int>(gen::uniform(rng, 3, 6)));
    const auto report = run_pipeline(g.scenario, g.x0);
    const bool flagged =
        std::any_of(report.violations.begin(), report.violations.end(), [&](const Violation& v) {
          return v.kind == "monotonicity" && v.point == g.planted && v.witness && v.observed;
        });
    if (!flagged || io::to_json(run_pipeline(g.scenario, g.x0)) != io::to_json(report)) {
      o.fail("adversarial scenario " + std::to_string(trial));
    }
  }
  return o;
}

struct Criterion {
  const char* name;
  double limit_seconds;  // 0 = no limit
  Outcome (*run)();
};

}  // namespace

int main() {
  const std::vector<Criterion> criteria{
      {"C1 steinberg identity, n<=8, ten q", 5, steinberg_identity},
      {"C2 K1 valuation equals statistic, size<=8", 30, valuation_theorem},
      {"C3 flag counts are 1 mod p, n<=8", 0, flag_counts},
      {"C4 closure edges raise statistic by (a-c)(b-c), size<=7", 60, monotonicity_law},
      {"C5 triangle check, 1000 draws per size<=6", 0, triangle_robustness},
      {"C6 exp(N) nonzero count and N^n=0, n<=10", 5, exp_count},
      {"C7 ratio valuation, 200 mixed scenarios x 10 seeds", 0, ratio_valuations},
      {"C8 rigidity pipeline, 50 twist-constant + 10 adversarial", 60, rigidity_pipeline},
  };
  int failures = 0;
  for (const auto& c : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o.fail(std::string("exception: ") + e.what());
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (c.limit_seconds > 0 && secs > c.limit_seconds) {
      o.fail("time limit " + std::to_string(c.limit_seconds) + " s exceeded");
    }
    failures += !o.pass;
    std::printf("[%s] %s: %zu cases, %.2f s", o.pass ? "PASS" : "FAIL", c.name, o.cases, secs);
    if (c.limit_seconds > 0) std::printf(" (limit %.0f s)", c.limit_seconds);
    if (!o.pass) std::printf(" -- %s", o.detail.c_str());
    std::printf("\n");
    std::fflush(stdout);
  }
  return failures;
}
