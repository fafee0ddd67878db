#include <doctest.h>

#include <array>
#include <cmath>
#include <map>
#include <set>

#include "trustrpl/behavior.hpp"
#include "trustrpl/random.hpp"

using namespace trustrpl;
using namespace trustrpl::behavior;

TEST_CASE("seeded random is reproducible") {
  SeededRandom a(42), b(42), c(43);
  for (int i = 0; i < 100; ++i) {
    const auto x = a.next_u64();
    CHECK(x == b.next_u64());
    (void)c.next_u64();
  }
  CHECK(SeededRandom(42).next_u64() != SeededRandom(43).next_u64());
  // The 10000th output of mt19937_64 with seed 5489 is fixed by the standard.
  SeededRandom std_seed(5489);
  for (int i = 1; i < 10000; ++i) (void)std_seed.next_u64();
  CHECK(std_seed.next_u64() == 9981545732273789042ULL);
}

TEST_CASE("seeded random draw ranges") {
  SeededRandom r(7);
  for (int i = 0; i < 10000; ++i) {
    const double u = r.uniform();
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
    CHECK(r.index(7) < 7);
    const double v = r.uniform(1.0, 3.0);
    CHECK(v >= 1.0);
    CHECK(v <= 3.0);
  }
  CHECK_THROWS_AS(r.index(0), Error);
  CHECK(r.binomial(50, 0.0) == 0);
  CHECK(r.binomial(50, 1.0) == 50);
}

TEST_CASE("failure-rate intervals per class") {
  CHECK(failure_interval(NodeClass::Honest) == std::pair{0.0, 0.10});
  CHECK(failure_interval(NodeClass::Selfish) == std::pair{0.40, 0.50});
  CHECK(failure_interval(NodeClass::Malicious) == std::pair{0.80, 0.90});
  SeededRandom r(3);
  for (auto cls : {NodeClass::Honest, NodeClass::Selfish, NodeClass::Malicious}) {
    const auto [lo, hi] = failure_interval(cls);
    for (int i = 0; i < 1000; ++i) {
      const auto n = make_node(NodeId{2}, cls, r);
      CHECK(n.failure_rate >= lo);
      CHECK(n.failure_rate <= hi);
      CHECK(n.etx >= kMinEtx);
      CHECK(n.etx <= kMaxEtx);
      CHECK(n.node_class == cls);
      CHECK_FALSE(n.active);
    }
  }
}

TEST_CASE("environment presets and validation") {
  CHECK(EnvironmentProfile::preset(Environment::LowMalicious).malicious_fraction == 0.10);
  CHECK(EnvironmentProfile::preset(Environment::MediumMalicious).malicious_fraction ==
        doctest::Approx(0.425));
  CHECK(EnvironmentProfile::preset(Environment::HighMalicious).malicious_fraction ==
        doctest::Approx(0.875));
  EnvironmentProfile p = EnvironmentProfile::preset(Environment::MediumMalicious);
  p.malicious_fraction = 0.40;
  CHECK_NOTHROW(p.validate());
  p.malicious_fraction = 0.5;
  CHECK_THROWS_AS(p.validate(), Error);
  CHECK(parse_environment("high_malicious") == Environment::HighMalicious);
  CHECK_THROWS_AS(parse_environment("extreme"), Error);
}

TEST_CASE("spawned population follows the environment") {
  SeededRandom r(11);
  SUBCASE("high, 20 nodes") {
    const auto pop = spawn_population(20, EnvironmentProfile::preset(Environment::HighMalicious), r);
    std::map<NodeClass, int> counts;
    for (const auto& n : pop) ++counts[n.node_class];
    // floor(0.875 * 20) = 17 malicious, 3 left: 2 honest, 1 selfish.
    CHECK(counts[NodeClass::Malicious] == 17);
    CHECK(counts[NodeClass::Honest] == 2);
    CHECK(counts[NodeClass::Selfish] == 1);
  }
  SUBCASE("medium, 1000 nodes lands inside the 40-45% band") {
    const auto pop =
        spawn_population(1000, EnvironmentProfile::preset(Environment::MediumMalicious), r);
    const auto mal = std::count_if(pop.begin(), pop.end(), [](const auto& n) {
      return n.node_class == NodeClass::Malicious;
    });
    CHECK(mal >= 400);
    CHECK(mal <= 450);
    std::set<std::uint32_t> ids;
    for (const auto& n : pop) ids.insert(n.id.value);
    CHECK(ids.size() == 1000);
    CHECK(*ids.begin() == 2);
  }
  SUBCASE("low") {
    const auto pop = spawn_population(50, EnvironmentProfile::preset(Environment::LowMalicious), r);
    const auto mal = std::count_if(pop.begin(), pop.end(), [](const auto& n) {
      return n.node_class == NodeClass::Malicious;
    });
    CHECK(mal == 5);
  }
}

TEST_CASE("drawn classes match environment proportions") {
  SeededRandom r(5);
  const auto env = EnvironmentProfile::preset(Environment::MediumMalicious);
  std::array<int, 3> counts{};
  const int n = 100000;
  for (int i = 0; i < n; ++i) ++counts[static_cast<int>(draw_class(env, r))];
  CHECK(counts[static_cast<int>(NodeClass::Malicious)] / double(n) == doctest::Approx(0.425).epsilon(0.02));
  CHECK(counts[static_cast<int>(NodeClass::Honest)] / double(n) == doctest::Approx(0.2875).epsilon(0.03));
}

TEST_CASE("misbehavior frequency converges to the failure rate") {
  SeededRandom r(17);
  for (auto cls : {NodeClass::Honest, NodeClass::Selfish, NodeClass::Malicious}) {
    const auto node = make_node(NodeId{2}, cls, r);
    std::uint64_t bad = 0;
    const std::uint64_t ops = 20000;
    for (int i = 0; i < 1000; ++i) {
      const auto m = generate_misbehaviors(node, 20, r);
      CHECK(m <= 20);
      bad += m;
    }
    CHECK(std::abs(static_cast<double>(bad) / ops - node.failure_rate) <= 0.02);
  }
}
