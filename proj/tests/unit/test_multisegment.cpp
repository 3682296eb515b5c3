#include <gtest/gtest.h>

#include <algorithm>
#include <random>
#include <set>

#include "bzfam/error.hpp"
#include "bzfam/multisegment.hpp"
#include "oracles.hpp"
#include "scenarios.hpp"

using namespace bzfam;

TEST(LineRegistry, UndeclaredLineIsUnramified) {
  LineRegistry r;
  const auto line = r.lookup("Q");
  EXPECT_EQ(line.block_size, 1);
  EXPECT_TRUE(line.unramified());
  EXPECT_FALSE(r.declared("Q"));
}

TEST(LineRegistry, RejectsInconsistentDeclarations) {
  LineRegistry r;
  r.add({"B", 2, "beta"});
  EXPECT_NO_THROW(r.add({"B", 2, "beta"}));
  EXPECT_THROW(r.add({"B", 3, "beta"}), DomainError);
  EXPECT_THROW(r.add({"B2", 3, "beta"}), DomainError);
  EXPECT_THROW(r.add({"U", 2, "unr"}), DomainError);
  EXPECT_THROW(r.add({"Y", 0, "y"}), DomainError);
  EXPECT_THROW(r.add({"", 1, "y"}), DomainError);
}

TEST(Multisegment, CanonicalOrderMakesBagsEqual) {
  Multisegment a{seg(3, 1), seg(0, 2)};
  Multisegment b{seg(0, 2), seg(3, 1)};
  EXPECT_EQ(a, b);
  EXPECT_EQ(a.degree(), 3);
  EXPECT_THROW(Multisegment({seg(0, 0)}), DomainError);
}

TEST(Linking, Basics) {
  EXPECT_TRUE(is_linked(seg(0, 2), seg(2, 1)));   // juxtaposed
  EXPECT_TRUE(is_linked(seg(0, 2), seg(1, 2)));   // overlapping
  EXPECT_FALSE(is_linked(seg(0, 3), seg(1, 1)));  // nested
  EXPECT_FALSE(is_linked(seg(0, 1), seg(2, 1)));  // gap
  EXPECT_FALSE(is_linked(seg(0, 2), Segment{"A", "c1", 2, 1}));
  EXPECT_FALSE(is_linked(seg(0, 2), seg("B", 2, 1)));
  EXPECT_TRUE(precedes(seg(0, 1), seg(1, 1)));
  EXPECT_FALSE(precedes(seg(1, 1), seg(0, 1)));
}

TEST(Linking, MatchesPointSetOracle) {
  for (int a = -2; a <= 3; ++a) {
    for (int la = 1; la <= 4; ++la) {
      for (int b = -2; b <= 3; ++b) {
        for (int lb = 1; lb <= 4; ++lb) {
          const auto x = seg(a, la), y = seg(b, lb);
          EXPECT_EQ(is_linked(x, y), oracle::linked(x, y));
          EXPECT_EQ(precedes(x, y), oracle::precedes(x, y));
        }
      }
    }
  }
}

TEST(AdmissibleOrder, NoEarlierSegmentPrecedesALaterOne) {
  gen::Rng rng(11);
  for (int trial = 0; trial < 300; ++trial) {
    const auto s = gen::unramified(rng, static_cast<int>(gen::uniform(rng, 1, 10)), 4, 4);
    const auto order = admissible_order(s);
    ASSERT_EQ(order.size(), s.size());
    EXPECT_EQ(Multisegment(order), s);
    for (std::size_t i = 0; i < order.size(); ++i) {
      for (std::size_t j = i + 1; j < order.size(); ++j) {
        EXPECT_FALSE(oracle::precedes(order[i], order[j]));
      }
    }
  }
}

TEST(AdmissibleOrder, SomePermutationIsAdmissibleByBruteForce) {
  gen::Rng rng(12);
  for (int trial = 0; trial < 50; ++trial) {
    auto v = admissible_order(gen::unramified(rng, 6, 3, 3));
    std::sort(v.begin(), v.end());
    std::size_t admissible = 0;
    do {
      bool ok = true;
      for (std::size_t i = 0; i < v.size() && ok; ++i) {
        for (std::size_t j = i + 1; j < v.size() && ok; ++j) ok = !oracle::precedes(v[i], v[j]);
      }
      admissible += ok;
    } while (std::next_permutation(v.begin(), v.end()));
    EXPECT_GT(admissible, 0u);
  }
}

TEST(ElementaryChildren, JuxtaposedPair) {
  const Multisegment s{seg(0, 1), seg(1, 1)};
  const auto children = elementary_children(s);
  ASSERT_EQ(children.size(), 1u);
  EXPECT_EQ(children[0], (Multisegment{seg(0, 2)}));
}

TEST(ElementaryChildren, OverlappingPairKeepsIntersection) {
  const Multisegment s{seg(0, 2), seg(1, 2)};
  const auto children = elementary_children(s);
  ASSERT_EQ(children.size(), 1u);
  EXPECT_EQ(children[0], (Multisegment{seg(0, 3), seg(1, 1)}));
}

TEST(ElementaryChildren, NoneForUnlinked) {
  EXPECT_TRUE(elementary_children(Multisegment{seg(0, 3), seg(1, 1)}).empty());
  EXPECT_TRUE(elementary_children(Multisegment{seg(0, 1), seg(5, 1)}).empty());
}

TEST(Order, SingletonsDominateEverythingWithTheirSupport) {
  const std::vector<std::int64_t> pts{0, 1, 2};
  const auto top = oracle::singletons(pts);
  for (const auto& s : oracle::all_with_support(pts)) {
    EXPECT_TRUE(leq(s, top)) << to_string(s);
  }
  EXPECT_TRUE(less(Multisegment{seg(0, 3)}, top));
  EXPECT_FALSE(leq(top, Multisegment{seg(0, 3)}));
  EXPECT_FALSE(leq(Multisegment{seg(0, 2)}, Multisegment{seg(1, 2)}));
}

TEST(Order, ClosureMatchesIntervalDecompositions) {
  const std::vector<std::vector<std::int64_t>> supports{
      {0}, {0, 1}, {0, 0, 1}, {0, 1, 2}, {0, 1, 1, 2}, {0, 1, 2, 3}, {0, 0, 1, 1, 2},
      {0, 2, 3}, {0, 1, 2, 3, 4}, {0, 0, 1, 2, 2, 3}};
  for (const auto& pts : supports) {
    const auto expected = oracle::all_with_support(pts);
    const auto closure = downward_closure(oracle::singletons(pts));
    EXPECT_EQ(std::set<Multisegment>(closure.begin(), closure.end()), expected);
  }
}

TEST(Order, ClosureOfThreeSingletonsHasFourMembers) {
  EXPECT_EQ(downward_closure(oracle::singletons({0, 1, 2})).size(), 4u);
}

TEST(Order, EdgesIncreaseStatisticByOverlapProduct) {
  gen::Rng rng(13);
  for (int trial = 0; trial < 40; ++trial) {
    const auto s = gen::unramified(rng, static_cast<int>(gen::uniform(rng, 2, 6)), 3, 3);
    const auto g = downward_closure_graph(s);
    ASSERT_EQ(g.nodes.front(), s);
    for (const auto& e : g.edges) {
      const auto& parent = g.nodes[e.parent];
      const auto& child = g.nodes[e.child];
      const auto gone = oracle::bag_minus(parent.segments(), child.segments());
      ASSERT_EQ(gone.size(), 2u);
      const auto lo = std::max(gone[0].start, gone[1].start);
      const auto hi = std::min(gone[0].last(), gone[1].last());
      const auto c = std::max<std::int64_t>(0, hi - lo + 1);
      const auto delta = oracle::triangular_statistic(child) - oracle::triangular_statistic(parent);
      EXPECT_EQ(delta, (gone[0].length - c) * (gone[1].length - c));
      EXPECT_EQ(delta, e.statistic_delta);
      EXPECT_GT(delta, 0);
      EXPECT_TRUE(less(child, parent));
    }
  }
}

TEST(Order, IsAPartialOrderOnSmallClosures) {
  const auto nodes = downward_closure(oracle::singletons({0, 1, 1, 2}));
  for (const auto& a : nodes) {
    EXPECT_TRUE(leq(a, a));
    for (const auto& b : nodes) {
      if (a != b && leq(a, b)) EXPECT_FALSE(leq(b, a));
      for (const auto& c : nodes) {
        if (leq(a, b) && leq(b, c)) EXPECT_TRUE(leq(a, c));
      }
    }
  }
}

TEST(Order, LessRequiresEqualSupport) {
  EXPECT_FALSE(leq(Multisegment{seg(0, 2)}, Multisegment{seg(0, 1), seg(2, 1)}));
}

TEST(Statistic, Examples) {
  EXPECT_EQ(statistic(Multisegment{seg(0, 1)}), 0);
  EXPECT_EQ(statistic(Multisegment{seg(0, 3)}), 3);
  EXPECT_EQ(statistic(Multisegment{seg(0, 2), seg(4, 4)}), 7);
}

TEST(Statistic, MatchesOracle) {
  gen::Rng rng(14);
  const auto lines = gen::mixed_lines();
  for (int trial = 0; trial < 200; ++trial) {
    const auto s = gen::mixed(rng, lines, static_cast<int>(gen::uniform(rng, 1, 12)));
    EXPECT_EQ(statistic(s), oracle::triangular_statistic(s));
  }
}

TEST(TwistOrbit, IgnoresStartsAndCosets) {
  gen::Rng rng(15);
  const auto lines = gen::mixed_lines();
  for (int trial = 0; trial < 100; ++trial) {
    const auto s = gen::mixed(rng, lines, 6);
    EXPECT_TRUE(twist_orbit_equal(s, gen::twist(rng, s), lines));
  }
  EXPECT_FALSE(twist_orbit_equal(Multisegment{seg(0, 2)}, Multisegment{seg(0, 1), seg(1, 1)}));
  EXPECT_FALSE(twist_orbit_equal(Multisegment{seg("B", 0, 1)}, Multisegment{seg("A", 0, 1)},
                                 lines));
}

TEST(Support, CountsMultiplicity) {
  const auto sup = support(Multisegment{seg(0, 2), seg(1, 1)});
  ASSERT_EQ(sup.size(), 3u);
  EXPECT_EQ(sup[1].position, 1);
  EXPECT_EQ(sup[2].position, 1);
}

TEST(ToString, Compact) {
  EXPECT_EQ(to_string(Multisegment{seg(2, 1), seg(0, 2)}), "{A/c0[0,+2], A/c0[2,+1]}");
}
