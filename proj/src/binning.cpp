#include "cognipleasure/binning.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "cognipleasure/error.hpp"

namespace cognipleasure {

namespace {

void check_scale(double v) {
  if (!(v >= kScaleMin && v <= kScaleMax)) {
    throw InvalidArgument("binning value " + std::to_string(v) + " is outside [0, 5]");
  }
}

}  // namespace

Level bin_binary(double v) { return v < 3.0 ? Level::Low : Level::High; }

Level bin_soft(double v) {
  if (v < 2.5) return Level::Low;
  if (v <= 3.5) return Level::Medium;
  return Level::High;
}

Level bin_strict(double v) {
  const double r = std::floor(v + 0.5);
  if (r <= 2.0) return Level::Low;
  if (r == 3.0) return Level::Medium;
  return Level::High;
}

Level bin_boundaries(double v, double b1, double b2) {
  if (v < b1) return Level::Low;
  if (v < b2) return Level::Medium;
  return Level::High;
}

Binner Binner::boundaries(double b1, double b2) {
  if (!(b1 >= kScaleMin && b1 < b2 && b2 <= kScaleMax)) {
    throw InvalidArgument("binner boundaries must satisfy 0 <= b1 < b2 <= 5");
  }
  Binner b(Kind::Boundaries);
  b.cuts_ = std::make_pair(b1, b2);
  return b;
}

Level Binner::operator()(double v) const {
  check_scale(v);
  switch (kind_) {
    case Kind::Binary: return bin_binary(v);
    case Kind::Soft: return bin_soft(v);
    case Kind::Strict: return bin_strict(v);
    case Kind::Boundaries: return bin_boundaries(v, cuts_->first, cuts_->second);
  }
  return Level::Low;
}

KMeansResult kmeans1d(std::span<const double> data, int k) {
  if (data.empty()) throw InvalidArgument("k-means needs at least one value");
  if (k < 1) throw InvalidArgument("k-means needs k >= 1");
  std::vector<double> x(data.begin(), data.end());
  for (double v : x) {
    if (!std::isfinite(v)) throw InvalidArgument("k-means data must be finite");
  }
  std::sort(x.begin(), x.end());
  const std::size_t n = x.size();

  // Valid cluster starts: index 0 and every position where the value changes.
  std::vector<bool> cut(n + 1, false);
  cut[0] = cut[n] = true;
  std::size_t distinct = 1;
  for (std::size_t i = 1; i < n; ++i) {
    if (x[i - 1] < x[i]) {
      cut[i] = true;
      ++distinct;
    }
  }
  if (static_cast<std::size_t>(k) > distinct) {
    throw InvalidArgument("k = " + std::to_string(k) + " exceeds the " +
                          std::to_string(distinct) + " distinct values");
  }

  // Prefix sums of mean-centred data keep the SSE differences well conditioned.
  long double mean = 0.0L;
  for (double v : x) mean += v;
  mean /= static_cast<long double>(n);
  std::vector<long double> s1(n + 1, 0.0L), s2(n + 1, 0.0L);
  for (std::size_t i = 0; i < n; ++i) {
    const long double c = x[i] - mean;
    s1[i + 1] = s1[i] + c;
    s2[i + 1] = s2[i] + c * c;
  }
  auto cost = [&](std::size_t i, std::size_t j) -> double {
    const long double m = static_cast<long double>(j - i);
    const long double s = s1[j] - s1[i];
    const long double v = (s2[j] - s2[i]) - s * s / m;
    return static_cast<double>(std::max(v, 0.0L));
  };

  constexpr double inf = std::numeric_limits<double>::infinity();
  const auto kk = static_cast<std::size_t>(k);
  // best[j][i]: minimal SSE of x[i..n) split into j clusters.
  std::vector<std::vector<double>> best(kk + 1, std::vector<double>(n + 1, inf));
  best[0][n] = 0.0;
  for (std::size_t j = 1; j <= kk; ++j) {
    for (std::size_t i = 0; i < n; ++i) {
      if (!cut[i]) continue;
      for (std::size_t e = i + 1; e <= n; ++e) {
        if (!cut[e] || best[j - 1][e] == inf) continue;
        best[j][i] = std::min(best[j][i], cost(i, e) + best[j - 1][e]);
      }
    }
  }

  KMeansResult out;
  out.sse = best[kk][0];
  const double tol = 1e-9 * (1.0 + out.sse);
  std::size_t i = 0;
  for (std::size_t j = kk; j >= 1; --j) {
    for (std::size_t e = i + 1; e <= n; ++e) {
      if (!cut[e] || best[j - 1][e] == inf) continue;
      if (cost(i, e) + best[j - 1][e] <= best[j][i] + tol) {
        long double sum = 0.0L;
        for (std::size_t t = i; t < e; ++t) sum += x[t];
        out.centroids.push_back(static_cast<double>(sum / static_cast<long double>(e - i)));
        out.cluster_sizes.push_back(e - i);
        i = e;
        break;
      }
    }
  }
  for (std::size_t c = 1; c < out.centroids.size(); ++c) {
    out.boundaries.push_back((out.centroids[c - 1] + out.centroids[c]) / 2.0);
  }
  return out;
}

}  // namespace cognipleasure
