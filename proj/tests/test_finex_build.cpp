#include <doctest.h>

#include <cmath>

#include "finex/baseline.hpp"
#include "finex/finex_build.hpp"
#include "support.hpp"

using namespace finex;
using fixture::sample_id;

namespace {

// Checks every attribute of a FINEX ordering against brute-force values.
void audit(const ClusterOrdering& o, const oracle::Distances& truth) {
  const double eps = o.params().epsilon;
  const auto m = o.params().min_pts;
  for (std::size_t i = 0; i < o.size(); ++i) {
    const auto& e = o[i];
    CAPTURE(e.object);
    REQUIRE(e.position == i + 1);
    REQUIRE(e.core == truth.core_distance(e.object, eps, m));
    REQUIRE(e.hood_size == truth.hood_weight(e.object, eps));

    const bool is_core = e.core <= eps;
    double best = kInfinity;
    std::uint64_t densest = 0;
    for (std::size_t j = 0; j < o.size(); ++j) {
      const auto& q = o[j];
      const double d = truth(q.object, e.object);
      if (d > eps) continue;
      densest = std::max(densest, q.hood_size);
      if (q.core <= eps && (!is_core || j < i)) best = std::min(best, std::max(q.core, d));
    }
    REQUIRE(e.reach == best);

    const bool noise = !is_core && std::isinf(best);
    if (noise) {
      REQUIRE(e.finder == e.object);
    } else {
      REQUIRE(truth(e.finder, e.object) <= eps);
      REQUIRE(o.entry_of(e.finder).hood_size == densest);
      REQUIRE(o.is_core(e.finder));
    }
  }
}

}  // namespace

TEST_CASE("FINEX ordering of the two-cluster fixture") {
  const auto data = fixture::sample_dataset();
  const auto p = build_provider(data, 1.0, Backend::kExplicitMatrix);
  BuildStats stats;
  const auto index = finex_build(*p, fixture::kSampleParams, {}, &stats);
  const auto& o = index.ordering();
  const double inf = kInfinity;
  const double h = 1.0 / std::sqrt(2.0);
  struct Row {
    char name;
    double reach;
    char finder;
  };
  const Row expect[] = {{'C', inf, 'C'}, {'B', 1.0, 'C'},  {'D', 1.0, 'C'},  {'A', 0.75, 'C'},
                        {'E', 0.75, 'C'}, {'H', inf, 'H'}, {'G', h, 'H'},    {'I', h, 'H'},
                        {'J', h, 'H'},    {'F', 0.75, 'D'}, {'K', 0.75, 'H'}};
  REQUIRE(o.size() == 11);
  for (std::size_t i = 0; i < 11; ++i) {
    CAPTURE(i);
    CHECK(fixture::sample_name(o[i].object) == expect[i].name);
    CHECK(o[i].reach == expect[i].reach);
    CHECK(fixture::sample_name(o[i].finder) == expect[i].finder);
  }
  CHECK(index.core_count() == 6);
  CHECK(stats.range_queries == 11);
  CHECK(stats.reinsertions[sample_id('A')] == 2);
  CHECK(stats.reinsertions[sample_id('B')] == 1);
  CHECK(stats.reinsertions[sample_id('G')] == 1);
  CHECK(stats.reinsertions[sample_id('F')] == 1);
  CHECK(stats.max_reinsertions() == 2);
  audit(o, oracle::Distances(data));
}

TEST_CASE("FINEX orderings satisfy the ordering definition on random data") {
  for (const auto& inst : harness::instances(16, 77)) {
    CAPTURE(inst.name);
    const oracle::Distances truth(inst.data);
    const auto p = build_provider(inst.data, inst.params.epsilon, default_backend(inst.data.metric()));
    for (auto options : {BuildOptions{}, BuildOptions{inst.data.size()}}) {
      BuildStats stats;
      const auto index = finex_build(*p, inst.params, options, &stats);
      audit(index.ordering(), truth);
      CHECK(stats.range_queries == inst.data.size());
      CHECK(stats.max_reinsertions() <= inst.params.min_pts - 1);
    }
  }
}

TEST_CASE("FINEX and OPTICS process core objects identically") {
  for (const auto& inst : harness::instances(12, 31)) {
    CAPTURE(inst.name);
    const auto p = build_provider(inst.data, inst.params.epsilon, default_backend(inst.data.metric()));
    const auto finex = finex_build(*p, inst.params).ordering();
    const auto optics = optics_build(*p, inst.params);
    std::vector<std::pair<ObjectId, double>> a;
    std::vector<std::pair<ObjectId, double>> b;
    for (const auto& e : finex.entries()) {
      if (finex.is_core(e.object)) a.emplace_back(e.object, e.reach);
    }
    for (const auto& e : optics.entries()) {
      if (optics.is_core(e.object)) b.emplace_back(e.object, e.reach);
    }
    CHECK(a == b);
  }
}

TEST_CASE("builds are deterministic") {
  const auto data = gen::sets(5, 300, 6, 40);
  const auto p = build_provider(data, 0.6, Backend::kSetInvertedList);
  CHECK(finex_build(*p, {0.6, 5}) == finex_build(*p, {0.6, 5}));
  CHECK(finex_build(*p, {0.6, 5}, BuildOptions{4}) == finex_build(*p, {0.6, 5}, BuildOptions{4}));
  const auto brute = build_provider(data, 0.6, Backend::kBruteForce);
  CHECK(finex_build(*p, {0.6, 5}) == finex_build(*brute, {0.6, 5}));
}

TEST_CASE("build contracts") {
  const auto data = gen::uniform(1, 30, 2);
  const auto p = build_provider(data, 0.3, Backend::kKdTree);
  CHECK_THROWS_AS(finex_build(*p, {0.4, 3}), ContractViolation);
  CHECK_THROWS_AS(finex_build(*p, {0.3, 0}), ContractViolation);
  CHECK_THROWS_AS(finex_build(*p, {-0.1, 3}), ContractViolation);

  const auto index = finex_build(*p, {0.3, 3});
  CHECK_NOTHROW(index.check_dataset(data));
  CHECK_THROWS_AS(index.check_dataset(gen::uniform(2, 30, 2)), DataError);
  CHECK_THROWS_AS(index.check_dataset(gen::uniform(1, 31, 2)), DataError);
  CHECK_THROWS_AS(index.check_dataset(fixture::sample_dataset()), DataError);

  const auto optics = optics_build(*p, {0.3, 3});
  CHECK_THROWS(FinexIndex(optics, MetricKind::kEuclidean, data.fingerprint()));
}

TEST_CASE("ordering builder removes a reinserted non-core from the sequence") {
  OrderingBuilder b(3, {1.0, 2});
  b.set_attributes(0, kInfinity, 1);
  b.append_unreached(0);
  b.set_attributes(1, 0.5, 2);
  b.append_unreached(1);
  CHECK(b.current_order() == std::vector<ObjectId>{0, 1});
  CHECK_THROWS_AS(b.finish(Flavor::kFinex), std::logic_error);

  Neighborhood hood{{{0, 0.5}, {1, 0.0}, {2, 0.9}}, 3};
  b.queue_update(1, hood);
  CHECK(b.current_order() == std::vector<ObjectId>{1});
  CHECK(b.reinsertions(0) == 1);
  CHECK(b.queued(0));
  CHECK(b.reach(0) == 0.5);
  CHECK(b.finder(0) == 1);
  CHECK(b.finder(2) == 1);
  CHECK(b.pop() == 0);
  b.append(0);
  CHECK(b.pop() == 2);
  b.set_attributes(2, kInfinity, 1);
  b.append(2);
  CHECK(b.queue_empty());
  const auto o = b.finish(Flavor::kFinex);
  CHECK(o[0].object == 1);
  CHECK(o[1].object == 0);
  CHECK(o[2].reach == 0.9);
  CHECK_THROWS_AS(b.queue_update(0, hood), ContractViolation);
}
