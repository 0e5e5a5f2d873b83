#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <cstdint>
#include <map>
#include <vector>

#include "pdslab/distributions.hpp"
#include "pdslab/labels.hpp"
#include "pdslab/moments.hpp"
#include "pdslab/named_distributions.hpp"
#include "pdslab/rng.hpp"
#include "pdslab/targets.hpp"

using namespace pdslab;

namespace {

// Oracle: moment by full 2^d summation against the exact density.
double brute_moment(const LabeledSource& src, int i) {
  const int d = dist_dim(src.dist);
  double acc = 0.0;
  for (std::uint64_t idx = 0; idx < (1ull << d); ++idx) {
    const HypercubeInput x = HypercubeInput::from_index(idx, d);
    double term = density(src.dist, x) * eval_target(src.target, x);
    if (i != 0) term *= x.bit(i);
    acc += term;
  }
  return (1.0 - 2.0 * src.noise.eta) * acc;
}

template <typename F>
ErrorCode thrown_code(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected a pdslab::Error");
  return ErrorCode::argument;
}

double total_mass(const InputDistribution& dist) {
  const int d = dist_dim(dist);
  double total = 0.0;
  for (std::uint64_t idx = 0; idx < (1ull << d); ++idx)
    total += density(dist, HypercubeInput::from_index(idx, d));
  return total;
}

}  // namespace

TEST_CASE("density sums to one for every variant") {
  Rng rng(1);
  REQUIRE(total_mass(make_uniform(10)) == Catch::Approx(1.0).epsilon(1e-9));
  REQUIRE(total_mass(make_slice_uniform(14)) == Catch::Approx(1.0).epsilon(1e-9));

  BiasVector mu(14);
  for (auto& m : mu) m = 2.0 * rng.uniform01() - 1.0;
  REQUIRE(total_mass(make_product_rademacher(mu)) == Catch::Approx(1.0).epsilon(1e-9));

  REQUIRE(total_mass(make_mixture({0.25, 0.35, 0.4},
                                  {make_uniform(8), make_slice_uniform(8),
                                   make_product_rademacher(BiasVector(8, 0.3))})) ==
          Catch::Approx(1.0).epsilon(1e-9));

  REQUIRE(total_mass(make_atoms(6, {0, 5, 63}, {0.25, 0.5, 0.25})) == Catch::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("density point values") {
  REQUIRE(density(make_uniform(4), HypercubeInput({1, -1, 1, -1})) == Catch::Approx(1.0 / 16));
  REQUIRE(density(make_product_rademacher({0.5, -0.5}), HypercubeInput({1, 1})) == Catch::Approx(0.1875));
  // Slice level l=2 at d=4: mass 1/((d+1) * C(4,3)) = 1/20.
  REQUIRE(density(make_slice_uniform(4), HypercubeInput({1, 1, 1, -1})) == Catch::Approx(1.0 / 20));
  const InputDistribution atoms = make_atoms(4, {3, 9}, {0.7, 0.3});
  REQUIRE(density(atoms, HypercubeInput::from_index(9, 4)) == Catch::Approx(0.3));
  REQUIRE(density(atoms, HypercubeInput::from_index(1, 4)) == 0.0);
}

TEST_CASE("degenerate bias sampling is constant") {
  Rng rng(2);
  const InputDistribution dist = make_product_rademacher(BiasVector(6, 1.0));
  for (const HypercubeInput& x : sample(dist, rng, 50))
    for (int i = 1; i <= 6; ++i) REQUIRE(x.bit(i) == 1);
}

TEST_CASE("slice samples sit on slices with a uniform level histogram") {
  Rng rng(3);
  const int d = 6, n = 100000;
  const InputDistribution dist = make_slice_uniform(d);
  std::map<int, int> level_count;
  for (const HypercubeInput& x : sample(dist, rng, n)) {
    const int l = x.coordinate_sum();
    REQUIRE((l + d) % 2 == 0);
    REQUIRE(std::abs(l) <= d);
    ++level_count[l];
  }
  const double expect = static_cast<double>(n) / (d + 1);
  const double sigma = std::sqrt(n * (1.0 / (d + 1)) * (1.0 - 1.0 / (d + 1)));
  REQUIRE(level_count.size() == static_cast<std::size_t>(d + 1));
  for (const auto& [l, c] : level_count) REQUIRE(std::abs(c - expect) <= 3.0 * sigma);
}

TEST_CASE("mixture of biased and uniform halves has the averaged mean") {
  Rng rng(4);
  const int d = 50, n = 100000;
  const InputDistribution dist = fig1_mixture(d, 0.96);
  std::vector<double> mean(static_cast<std::size_t>(d), 0.0);
  for (const HypercubeInput& x : sample(dist, rng, n))
    for (int i = 1; i <= d; ++i) mean[static_cast<std::size_t>(i - 1)] += x.bit(i);
  for (double& m : mean) m /= n;
  for (double m : mean) REQUIRE(m == Catch::Approx(0.48).margin(0.01));
}

TEST_CASE("sampled frequencies match the density pointwise") {
  Rng rng(5);
  const int d = 5, n = 1000000;
  BiasVector mu(static_cast<std::size_t>(d));
  for (auto& m : mu) m = 1.4 * rng.uniform01() - 0.7;
  const InputDistribution dist =
      make_mixture({0.5, 0.5}, {make_product_rademacher(mu), make_slice_uniform(d)});
  std::vector<int> count(1u << d, 0);
  for (const HypercubeInput& x : sample(dist, rng, n)) ++count[x.to_index()];
  for (std::uint64_t idx = 0; idx < (1ull << d); ++idx) {
    const double p = density(dist, HypercubeInput::from_index(idx, d));
    const double se = std::sqrt(n * p * (1.0 - p));
    REQUIRE(std::abs(count[idx] - n * p) <= 4.0 * se + 1.0);
  }
}

TEST_CASE("atom sampling follows the stored masses") {
  Rng rng(6);
  const InputDistribution dist = make_atoms(8, {1, 7, 200}, {0.2, 0.3, 0.5});
  const int n = 200000;
  std::map<std::uint64_t, int> count;
  for (const HypercubeInput& x : sample(dist, rng, n)) ++count[x.to_index()];
  REQUIRE(count.size() == 3);
  REQUIRE(std::abs(count[1] - 0.2 * n) < 4.0 * std::sqrt(n * 0.2 * 0.8));
  REQUIRE(std::abs(count[7] - 0.3 * n) < 4.0 * std::sqrt(n * 0.3 * 0.7));
  REQUIRE(std::abs(count[200] - 0.5 * n) < 4.0 * std::sqrt(n * 0.25));
}

TEST_CASE("construction validates mixtures, atoms and noise") {
  REQUIRE(thrown_code([] { (void)make_mixture({0.5, 0.4}, {make_uniform(3), make_uniform(3)}); }) ==
          ErrorCode::argument);
  REQUIRE(thrown_code([] { (void)make_mixture({0.5, 0.5}, {make_uniform(3), make_uniform(4)}); }) ==
          ErrorCode::argument);
  REQUIRE(thrown_code([] { (void)make_mixture({1.5, -0.5}, {make_uniform(3), make_uniform(3)}); }) ==
          ErrorCode::argument);
  REQUIRE(thrown_code([] { (void)make_atoms(4, {3, 3}, {0.5, 0.5}); }) == ErrorCode::argument);
  REQUIRE(thrown_code([] { (void)make_atoms(4, {3, 99}, {0.5, 0.5}); }) == ErrorCode::argument);
  REQUIRE(thrown_code([] { (void)make_atoms(4, {3}, {0.9}); }) == ErrorCode::argument);
  REQUIRE(thrown_code([] { (void)make_noise(0.5); }) == ErrorCode::argument);
  REQUIRE(thrown_code([] { (void)make_noise(-0.01); }) == ErrorCode::argument);
  REQUIRE(thrown_code([] { (void)make_product_rademacher({0.0, 1.2}); }) == ErrorCode::argument);
}

TEST_CASE("noiseless labels equal the clean target") {
  Rng rng(7);
  const LabeledSource src = make_source(make_uniform(8), make_parity(8, {1, 4, 6}), make_noise(0.0));
  const auto xs = sample(src.dist, rng, 500);
  const auto ys = draw_labels(src, xs, rng);
  for (std::size_t i = 0; i < xs.size(); ++i) REQUIRE(ys[i] == eval_target(src.target, xs[i]));
  REQUIRE(draw_labels(src, {}, rng).empty());
}

TEST_CASE("noisy labels flip at the configured rate") {
  Rng rng(8);
  const LabeledSource src = make_source(make_uniform(8), make_parity(8, {2, 3}), make_noise(0.05));
  const int n = 100000;
  const auto xs = sample(src.dist, rng, n);
  const auto ys = draw_labels(src, xs, rng);
  int flips = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) flips += ys[i] != eval_target(src.target, xs[i]);
  REQUIRE(static_cast<double>(flips) / n == Catch::Approx(0.05).margin(0.003));
}

TEST_CASE("keyed labels are a pure function of the point") {
  const LabeledSource src = make_source(make_uniform(14), make_parity(14, {1, 2, 5}), make_noise(0.2));
  std::vector<HypercubeInput> xs;
  for (std::uint64_t idx = 0; idx < (1ull << 14); ++idx) xs.push_back(HypercubeInput::from_index(idx, 14));
  int flips = 0;
  for (const HypercubeInput& x : xs) {
    const int y1 = label_point_keyed(src, x, 1234);
    const int y2 = label_point_keyed(src, x, 1234);
    REQUIRE(y1 == y2);
    flips += y1 != eval_target(src.target, x);
  }
  // One flip decision per distinct point; 4 standard errors over 2^14 points.
  REQUIRE(static_cast<double>(flips) / static_cast<double>(xs.size()) == Catch::Approx(0.2).margin(0.0125));
  // A different noise seed re-rolls the flips.
  int disagree = 0;
  for (const HypercubeInput& x : xs) disagree += label_point_keyed(src, x, 1234) != label_point_keyed(src, x, 99);
  REQUIRE(disagree > 0);
}

TEST_CASE("moments match brute-force summation across supported combinations") {
  Rng rng(10);
  std::vector<InputDistribution> dists;
  dists.push_back(make_uniform(9));
  dists.push_back(make_slice_uniform(9));
  BiasVector mu(9);
  for (auto& m : mu) m = 1.6 * rng.uniform01() - 0.8;
  dists.push_back(make_product_rademacher(mu));
  dists.push_back(make_mixture({0.3, 0.3, 0.4},
                               {make_uniform(9), make_slice_uniform(9), make_product_rademacher(mu)}));
  dists.push_back(thm3_parity_train(9));
  dists.push_back(thm4_parity_slice_train(9));
  dists.push_back(fpds_parity_train(9, {2, 5, 7}));

  std::vector<Target> targets;
  targets.push_back(make_parity(9, {}));
  targets.push_back(make_parity(9, {3}));
  targets.push_back(make_parity(9, {1, 4}));
  targets.push_back(make_parity(9, {2, 5, 7}));
  targets.push_back(build_fk(3, 9));
  {
    std::vector<int8_t> table(16);
    for (auto& t : table) t = static_cast<int8_t>(rng.sign_unit(0.5));
    table[3] = static_cast<int8_t>(-table[2]);  // keep at least one coordinate relevant
    targets.push_back(make_junta(9, {1, 5, 8, 9}, table));
  }

  for (const auto& dist : dists)
    for (const auto& target : targets)
      for (double eta : {0.0, 0.1}) {
        const LabeledSource src = make_source(dist, target, make_noise(eta));
        REQUIRE(exact_mean_label(src) == Catch::Approx(brute_moment(src, 0)).margin(1e-10));
        for (int i : {1, 3, 5, 9})
          REQUIRE(exact_moment(src, i) == Catch::Approx(brute_moment(src, i)).margin(1e-10));
      }
}

TEST_CASE("biased-half moments take the stated closed-form values") {
  const LabeledSource src = make_source(thm3_parity_train(4), make_parity(4, {1, 2}), make_noise(0.0));
  REQUIRE(exact_moment(src, 1) == Catch::Approx(0.25).margin(1e-12));
  REQUIRE(exact_moment(src, 3) == Catch::Approx(0.0625).margin(1e-12));
}

TEST_CASE("moments scale linearly in one minus twice the noise rate") {
  const LabeledSource clean = make_source(thm4_parity_slice_train(8), make_parity(8, {1, 2, 3}), make_noise(0.0));
  const LabeledSource noisy = make_source(thm4_parity_slice_train(8), make_parity(8, {1, 2, 3}), make_noise(0.25));
  for (int i = 1; i <= 8; ++i) REQUIRE(exact_moment(noisy, i) == Catch::Approx(0.5 * exact_moment(clean, i)).margin(1e-12));
}

TEST_CASE("even parities have zero correlation with every coordinate on the slice") {
  const LabeledSource src = make_source(make_slice_uniform(10), make_parity(10, {2, 7}), make_noise(0.0));
  for (int i = 1; i <= 10; ++i) REQUIRE(exact_moment(src, i) == Catch::Approx(0.0).margin(1e-15));
  // The label mean itself is 1/(|S|+1) for even |S|.
  REQUIRE(exact_mean_label(src) == Catch::Approx(1.0 / 3).margin(1e-12));
}

TEST_CASE("moment computation rejects unsupported pairings") {
  const LabeledSource atoms =
      make_source(make_atoms(4, {0, 15}, {0.5, 0.5}), make_parity(4, {1}), make_noise(0.0));
  REQUIRE(thrown_code([&] { (void)exact_moment(atoms, 1); }) == ErrorCode::unsupported_combination);

  const Target c = make_circuit_target(4, make_circuit({{GateKind::INPUT, 1, 0}}, 1));
  const LabeledSource circ = make_source(make_uniform(4), c, make_noise(0.0));
  REQUIRE(thrown_code([&] { (void)exact_moment(circ, 1); }) == ErrorCode::unsupported_combination);
  REQUIRE(thrown_code([&] { (void)exact_moment(circ, 0); }) == ErrorCode::argument);
}

TEST_CASE("named distributions take their documented shapes") {
  // fig1-mixture: half biased, half uniform.
  const InputDistribution fig1 = fig1_mixture(4, 0.96);
  std::vector<int8_t> ones(4, 1);
  REQUIRE(density(fig1, HypercubeInput(ones)) ==
          Catch::Approx(0.5 * std::pow(0.98, 4) + 0.5 / 16).margin(1e-12));

  // thm3-parity: biased half has per-coordinate mass (1 + (1-2/d))/2 = 1 - 1/d.
  const InputDistribution t3 = thm3_parity_train(4);
  REQUIRE(density(t3, HypercubeInput(ones)) == Catch::Approx(0.5 * std::pow(0.75, 4) + 0.5 / 16).margin(1e-12));

  // thm4: slice half replaces the uniform half.
  const InputDistribution t4 = thm4_parity_slice_train(4);
  REQUIRE(density(t4, HypercubeInput(ones)) == Catch::Approx(0.5 * std::pow(0.75, 4) + 0.5 / 5).margin(1e-12));

  // fpds support component forces x1 = x2; points with x1 != x2 carry only
  // the uniform half's mass.
  const InputDistribution fp = fpds_parity_train(3, {1, 2});
  REQUIRE(density(fp, HypercubeInput({1, -1, 1})) == Catch::Approx(0.5 / 8).margin(1e-15));
  REQUIRE(density(fp, HypercubeInput({1, 1, 1})) == Catch::Approx(0.5 / 8 + 0.5 * 0.25).margin(1e-15));

  // rdspac meta-draw is deterministic in the generator.
  Rng r1(42), r2(42);
  const InputDistribution m1 = rdspac_junta_meta(6, r1);
  const InputDistribution m2 = rdspac_junta_meta(6, r2);
  for (std::uint64_t idx = 0; idx < 64; ++idx) {
    const HypercubeInput x = HypercubeInput::from_index(idx, 6);
    REQUIRE(density(m1, x) == Catch::Approx(density(m2, x)).margin(1e-15));
  }
  REQUIRE(total_mass(m1) == Catch::Approx(1.0).epsilon(1e-9));

  Rng rng(0);
  REQUIRE(thrown_code([&] { (void)build_named_distribution("nope", 4, {}, 0.5, rng); }) == ErrorCode::argument);
  REQUIRE(dist_dim(build_named_distribution("uniform", 7, {}, 0.0, rng)) == 7);
}
