#include <doctest.h>

#include "finex/baseline.hpp"
#include "finex/extract.hpp"
#include "finex/finex_build.hpp"
#include "support.hpp"

using namespace finex;
using fixture::sample_id;

namespace {

std::string names(const Labeling& l, ClusterId c) {
  std::string out;
  for (ObjectId i = 0; i < l.size(); ++i) {
    if (l.cluster[i] == c) out += fixture::sample_name(i);
  }
  return out;
}

// Approximate-cluster shape: contiguous run, opened by an unreached core,
// interior reached within eps*, followed by an object not reached within eps*.
void check_shape(const ClusterOrdering& o, const ScanResult& scan, double eps_star) {
  const auto& l = scan.labeling;
  l.check_invariants();
  REQUIRE(scan.segments.size() == static_cast<std::size_t>(l.num_clusters));
  std::size_t clustered = 0;
  for (std::size_t s = 0; s < scan.segments.size(); ++s) {
    const auto [first, last] = scan.segments[s];
    REQUIRE(first <= last);
    if (s > 0) REQUIRE(scan.segments[s - 1].last < first);
    REQUIRE(o[first].reach > eps_star);
    REQUIRE(o[first].core <= eps_star);
    for (std::size_t i = first; i <= last; ++i) {
      REQUIRE(l.cluster[o[i].object] == static_cast<ClusterId>(s));
      if (i > first) REQUIRE(o[i].reach <= eps_star);
    }
    if (last + 1 < o.size()) REQUIRE(o[last + 1].reach > eps_star);
    clustered += last - first + 1;
  }
  REQUIRE(clustered == l.size() - l.noise_count());
}

}  // namespace

TEST_CASE("linear scan over the fixture orderings") {
  const auto data = fixture::sample_dataset();
  const auto p = build_provider(data, 1.0, Backend::kExplicitMatrix);
  const auto finex = finex_build(*p, fixture::kSampleParams).ordering();
  const auto optics = optics_build(*p, fixture::kSampleParams);

  SUBCASE("FINEX at 0.75 keeps all of the yellow cluster and three blue objects") {
    const auto scan = query_clustering(finex, 0.75);
    CHECK(scan.labeling.num_clusters == 2);
    CHECK(names(scan.labeling, 0) == "ADE");
    CHECK(names(scan.labeling, 1) == "FGHIJK");
    CHECK(names(scan.labeling, kNoise) == "BC");
    CHECK(scan.segments[0].first == 2);
    CHECK(scan.segments[0].last == 4);
    CHECK(scan.segments[1].first == 5);
    CHECK(scan.segments[1].last == 10);
    check_shape(finex, scan, 0.75);
  }
  SUBCASE("OPTICS at 0.75 loses half the blue and a third of the yellow cluster") {
    const auto scan = query_clustering(optics, 0.75);
    CHECK(names(scan.labeling, 0) == "DE");
    CHECK(names(scan.labeling, 1) == "HIJK");
    check_shape(optics, scan, 0.75);
  }
  SUBCASE("FINEX at epsilon reproduces the exact clustering") {
    const auto scan = query_clustering(finex, 1.0);
    CHECK(names(scan.labeling, 0) == "ABCDE");
    CHECK(names(scan.labeling, 1) == "FGHIJK");
    CHECK(exact_equivalent(scan.labeling, dbscan_exact(*p, 1.0, 4), *p, 1.0));
  }
  SUBCASE("border recall") {
    const auto exact = dbscan_exact(*p, 0.75, 4);
    CHECK(oracle::borders(exact).size() == 6);
    CHECK(border_recall(query_clustering(finex, 0.75).labeling, exact) == doctest::Approx(5.0 / 6.0).epsilon(1e-15));
    CHECK(border_recall(query_clustering(optics, 0.75).labeling, exact) == doctest::Approx(2.0 / 6.0).epsilon(1e-15));
    CHECK(border_recall(exact, exact) == 1.0);
  }
  SUBCASE("contracts") {
    CHECK_THROWS_AS(query_clustering(finex, 1.5), ContractViolation);
    CHECK_THROWS_AS(query_clustering(finex, -0.5), ContractViolation);
  }
}

TEST_CASE("border recall edge cases") {
  Labeling none{{0, kNoise}, {true, false}, 1};
  CHECK(border_recall(none, none) == 1.0);
  Labeling other{{0}, {true}, 1};
  CHECK_THROWS(border_recall(none, other));
}

TEST_CASE("singleton clusters are legal scan output") {
  const auto data = Dataset::from_vectors(1, {0.0, 5.0});
  const auto p = build_provider(data, 1.0, Backend::kBruteForce);
  const auto scan = query_clustering(finex_build(*p, {1.0, 1}).ordering(), 0.5);
  CHECK(scan.labeling.num_clusters == 2);
  CHECK(scan.labeling.noise_count() == 0);
}

TEST_CASE("scan properties on random data") {
  for (const auto& inst : harness::instances(16, 404)) {
    CAPTURE(inst.name);
    const oracle::Distances truth(inst.data);
    const auto p = build_provider(inst.data, inst.params.epsilon, default_backend(inst.data.metric()));
    const auto finex = finex_build(*p, inst.params).ordering();
    const auto optics = optics_build(*p, inst.params);
    const double eps = inst.params.epsilon;
    const auto m = inst.params.min_pts;
    for (double s : inst.epsilon_stars) {
      CAPTURE(s);
      const auto f = query_clustering(finex, s);
      const auto o = query_clustering(optics, s);
      check_shape(finex, f, s);
      check_shape(optics, o, s);
      const auto exact = oracle::dbscan(truth, s, m);
      for (ObjectId x = 0; x < f.labeling.size(); ++x) {
        // FINEX dominates OPTICS.
        if (o.labeling.cluster[x] != kNoise) REQUIRE(f.labeling.cluster[x] != kNoise);
        // Every eps*-core is found by both.
        if (exact.core[x]) {
          REQUIRE(f.labeling.cluster[x] != kNoise);
          REQUIRE(o.labeling.cluster[x] != kNoise);
        }
        // Borders that are not cores at epsilon are found by FINEX.
        if (exact.cluster[x] != kNoise && !exact.core[x] && !finex.is_core(x)) {
          REQUIRE(f.labeling.cluster[x] != kNoise);
        }
      }
      CHECK(border_recall(f.labeling, exact) >= border_recall(o.labeling, exact));
      if (s == eps) {
        CHECK(border_recall(f.labeling, exact) == 1.0);
        CHECK_FALSE(oracle::inequivalence(f.labeling, truth, s, m));
      }
    }
  }
}
