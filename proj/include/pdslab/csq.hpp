#pragma once

#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <string>
#include <variant>
#include <vector>

#include "pdslab/chebyshev.hpp"
#include "pdslab/distributions.hpp"
#include "pdslab/errors.hpp"
#include "pdslab/labels.hpp"
#include "pdslab/moments.hpp"
#include "pdslab/rng.hpp"
#include "pdslab/targets.hpp"

namespace pdslab {

enum class CsqMode : std::uint8_t {
  EXACT,    // closed-form moments, tolerance 0
  SAMPLED,  // empirical mean over m fresh draws per query
  NOISY     // closed-form plus a uniform perturbation in [-tau, tau]
};

/// How statistical queries reach the node distributions: NODE queries each
/// D_r directly; DENSITY_RATIO rewrites the query as phi = p_r/(k p) * psi
/// against the uniform mixture D' = (1/k) sum_r D_r, scaling answers by 1/k.
enum class CsqQueryStyle : std::uint8_t { NODE, DENSITY_RATIO };

struct CsqTranscriptRow {
  std::uint64_t id = 0;
  std::string type;  // "mean" | "coord" | "cell"
  int coordinate = 0;  // 0 when not applicable
  int node = 0;        // 0 when not applicable
  double answer = 0.0;
};

/// Statistical-query oracle for a noisy target over the node distributions
/// D_r = ProductRademacher(mu_r * ones). Every answer a to a query with true
/// value E satisfies |a - E| <= tau (tau = 0 in EXACT mode).
class CsqOracle {
 public:
  CsqOracle(Target target, double eta, int d, int k, CsqMode mode, CsqQueryStyle style, std::size_t sample_size,
            double tau, Rng rng)
      : target_(std::move(target)),
        noise_(make_noise(eta)),
        d_(d),
        k_(k),
        mode_(mode),
        style_(style),
        sample_size_(sample_size),
        tau_(tau),
        rng_(rng),
        nodes_(chebyshev_nodes(k)) {
    require(d >= 1, ErrorCode::argument, "oracle needs d >= 1");
    require(target_dim(target_) == d, ErrorCode::dimension_mismatch, "target dim mismatch");
    require(tau >= 0.0, ErrorCode::argument, "tolerance must be nonnegative");
    if (mode == CsqMode::SAMPLED) require(sample_size >= 1, ErrorCode::argument, "sampled mode needs m >= 1");
  }

  [[nodiscard]] static CsqOracle exact(Target target, double eta, int d, int k,
                                       CsqQueryStyle style = CsqQueryStyle::NODE) {
    return CsqOracle(std::move(target), eta, d, k, CsqMode::EXACT, style, 0, 0.0, Rng(0));
  }
  [[nodiscard]] static CsqOracle sampled(Target target, double eta, int d, int k, std::size_t m, Rng rng,
                                         CsqQueryStyle style = CsqQueryStyle::NODE) {
    return CsqOracle(std::move(target), eta, d, k, CsqMode::SAMPLED, style, m, 0.0, rng);
  }
  [[nodiscard]] static CsqOracle noisy(Target target, double eta, int d, int k, double tau, Rng rng,
                                       CsqQueryStyle style = CsqQueryStyle::NODE) {
    return CsqOracle(std::move(target), eta, d, k, CsqMode::NOISY, style, 0, tau, rng);
  }

  [[nodiscard]] int d() const { return d_; }
  [[nodiscard]] int k() const { return k_; }
  [[nodiscard]] CsqMode mode() const { return mode_; }
  [[nodiscard]] double eta() const { return noise_.eta; }
  [[nodiscard]] double tau() const { return mode_ == CsqMode::NOISY ? tau_ : 0.0; }
  [[nodiscard]] CsqQueryStyle style() const { return style_; }
  [[nodiscard]] const std::vector<double>& nodes() const { return nodes_; }
  [[nodiscard]] std::uint64_t query_count() const { return next_id_; }
  [[nodiscard]] const std::vector<CsqTranscriptRow>& transcript() const { return transcript_; }

  /// E_{D_r}[y] (NODE style) or its 1/k-scaled mixture form (DENSITY_RATIO).
  [[nodiscard]] double query_mean(int r) {
    const double exact = node_moment(r, 0);
    return log_answer("mean", 0, r, answer(exact, [&](Rng& g) { return sample_node(r, 0, g); }));
  }

  /// E_{D_r}[y x_i], same style scaling as query_mean.
  [[nodiscard]] double query_coord(int r, int i) {
    require(i >= 1 && i <= d_, ErrorCode::argument, "coordinate out of range");
    const double exact = node_moment(r, i);
    return log_answer("coord", i, r, answer(exact, [&](Rng& g) { return sample_node(r, i, g); }));
  }

  /// E_{D'}[1(x_S = z) y] against the mixture D' = (1/k) sum_r D_r; z packs
  /// the restriction of x to `support` (bit j of z = {0,1} view of
  /// support[j]). Issued identically in both query styles.
  [[nodiscard]] double query_cell(const std::vector<int>& support, std::uint64_t z) {
    double exact = 0.0;
    for (int r = 1; r <= k_; ++r) exact += cell_moment(r, support, z) / k_;
    return log_answer("cell", 0, 0, answer(exact, [&](Rng& g) { return sample_cell(support, z, g); }));
  }

  /// Writes the transcript as CSV.
  void write_transcript(std::FILE* out) const {
    std::fputs("query_id,type,coordinate,node,answer\n", out);
    for (const CsqTranscriptRow& row : transcript_) {
      char buf[160];
      std::snprintf(buf, sizeof buf, "%llu,%s,%d,%d,%.17g\n", static_cast<unsigned long long>(row.id),
                    row.type.c_str(), row.coordinate, row.node, row.answer);
      std::fputs(buf, out);
    }
  }

 private:
  template <class SampleFn>
  [[nodiscard]] double answer(double exact, SampleFn&& sampler) {
    switch (mode_) {
      case CsqMode::EXACT: return exact;
      case CsqMode::NOISY: return exact + tau_ * (2.0 * rng_.uniform01() - 1.0);
      case CsqMode::SAMPLED: return sampler(rng_);
    }
    fail(ErrorCode::argument, "unreachable oracle mode");
  }

  [[nodiscard]] double log_answer(const char* type, int coordinate, int node, double a) {
    transcript_.push_back({next_id_++, type, coordinate, node, a});
    return a;
  }

  [[nodiscard]] LabeledSource node_source(int r) const {
    require(r >= 1 && r <= k_, ErrorCode::argument, "node index out of range");
    return make_source(
        make_product_rademacher(BiasVector(static_cast<std::size_t>(d_), nodes_[static_cast<std::size_t>(r - 1)])),
        target_, noise_);
  }

  [[nodiscard]] InputDistribution mixture() const {
    std::vector<double> w(static_cast<std::size_t>(k_), 1.0 / k_);
    std::vector<InputDistribution> comps;
    for (int r = 1; r <= k_; ++r)
      comps.push_back(make_product_rademacher(
          BiasVector(static_cast<std::size_t>(d_), nodes_[static_cast<std::size_t>(r - 1)])));
    return make_mixture(std::move(w), std::move(comps));
  }

  // Exact E[y * x_i] (i = 0: E[y]) under node r; DENSITY_RATIO scales by 1/k.
  [[nodiscard]] double node_moment(int r, int i) const {
    const LabeledSource src = node_source(r);
    const double e = i == 0 ? exact_mean_label(src) : exact_moment(src, i);
    return style_ == CsqQueryStyle::NODE ? e : e / k_;
  }

  // Exact E_{D_r}[1(x_S = z) y]: the indicator fixes z's cell mass, the free
  // target coordinates are integrated out.
  [[nodiscard]] double cell_moment(int r, const std::vector<int>& support, std::uint64_t z) const {
    const double mu = nodes_[static_cast<std::size_t>(r - 1)];
    double mass = 1.0;
    for (std::size_t j = 0; j < support.size(); ++j) {
      const double zj = (z >> j) & 1ull ? 1.0 : -1.0;
      mass *= 0.5 * (1.0 + zj * mu);
    }

    double cond = 0.0;
    if (std::holds_alternative<ParityTarget>(target_)) {
      cond = 1.0;
      for (int i : std::get<ParityTarget>(target_).support) {
        const auto it = std::find(support.begin(), support.end(), i);
        if (it == support.end()) {
          cond *= mu;
        } else {
          cond *= (z >> (it - support.begin())) & 1ull ? 1.0 : -1.0;
        }
      }
    } else {
      const JuntaTarget& t = std::get<JuntaTarget>(target_);
      std::vector<std::size_t> free_pos;  // positions of t.support outside `support`
      std::uint64_t fixed_cell = 0;
      for (std::size_t p = 0; p < t.support.size(); ++p) {
        const auto it = std::find(support.begin(), support.end(), t.support[p]);
        if (it == support.end()) {
          free_pos.push_back(p);
        } else if ((z >> (it - support.begin())) & 1ull) {
          fixed_cell |= 1ull << p;
        }
      }
      for (std::uint64_t f = 0; f < (1ull << free_pos.size()); ++f) {
        std::uint64_t cell = fixed_cell;
        double w = 1.0;
        for (std::size_t q = 0; q < free_pos.size(); ++q) {
          const bool plus = (f >> q) & 1ull;
          if (plus) cell |= 1ull << free_pos[q];
          w *= 0.5 * (1.0 + (plus ? mu : -mu));
        }
        cond += w * t.table[cell];
      }
    }
    return (1.0 - 2.0 * noise_.eta) * mass * cond;
  }

  [[nodiscard]] double sample_node(int r, int i, Rng& g) {
    if (style_ == CsqQueryStyle::NODE) {
      const LabeledSource src = node_source(r);
      double acc = 0.0;
      for (std::size_t s = 0; s < sample_size_; ++s) {
        const HypercubeInput x = sample_one(src.dist, g);
        const int y = (g.bernoulli(noise_.eta) ? -1 : 1) * eval_target(target_, x);
        acc += i == 0 ? y : y * x.bit(i);
      }
      return acc / static_cast<double>(sample_size_);
    }
    // Mixture draw; the weight p_r/(k p) re-targets the node distribution.
    const InputDistribution mix = mixture();
    const InputDistribution node = make_product_rademacher(
        BiasVector(static_cast<std::size_t>(d_), nodes_[static_cast<std::size_t>(r - 1)]));
    double acc = 0.0;
    for (std::size_t s = 0; s < sample_size_; ++s) {
      const HypercubeInput x = sample_one(mix, g);
      const int y = (g.bernoulli(noise_.eta) ? -1 : 1) * eval_target(target_, x);
      const double phi = density(node, x) / (k_ * density(mix, x));
      acc += phi * (i == 0 ? y : y * x.bit(i));
    }
    return acc / static_cast<double>(sample_size_);
  }

  [[nodiscard]] double sample_cell(const std::vector<int>& support, std::uint64_t z, Rng& g) {
    const InputDistribution mix = mixture();
    double acc = 0.0;
    for (std::size_t s = 0; s < sample_size_; ++s) {
      const HypercubeInput x = sample_one(mix, g);
      std::uint64_t cell = 0;
      for (std::size_t j = 0; j < support.size(); ++j)
        if (x.bit(support[j]) > 0) cell |= 1ull << j;
      if (cell != z) continue;
      acc += (g.bernoulli(noise_.eta) ? -1 : 1) * eval_target(target_, x);
    }
    return acc / static_cast<double>(sample_size_);
  }

  Target target_;
  NoiseChannel noise_;
  int d_, k_;
  CsqMode mode_;
  CsqQueryStyle style_;
  std::size_t sample_size_;
  double tau_;
  Rng rng_;
  std::vector<double> nodes_;
  std::uint64_t next_id_ = 0;
  std::vector<CsqTranscriptRow> transcript_;
};

}  // namespace pdslab
