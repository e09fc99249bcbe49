#pragma once

// Discretization schemes shared by evaluation: fixed binary / soft / strict
// cuts and boundaries fitted by exact 1-D k-means.

#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "cognipleasure/appraisal.hpp"

namespace cognipleasure {

/// Low below 3, High from 3 up.
Level bin_binary(double v);
/// Low below 2.5, Medium on [2.5, 3.5], High above 3.5.
Level bin_soft(double v);
/// Rounds half-up to an integer r: r <= 2 Low, r == 3 Medium, r >= 4 High.
Level bin_strict(double v);
/// Low below b1, Medium on [b1, b2), High from b2.
Level bin_boundaries(double v, double b1, double b2);

class Binner {
 public:
  enum class Kind { Binary, Soft, Strict, Boundaries };

  static Binner binary() { return Binner(Kind::Binary); }
  static Binner soft() { return Binner(Kind::Soft); }
  static Binner strict() { return Binner(Kind::Strict); }
  /// Throws InvalidArgument unless 0 <= b1 < b2 <= 5.
  static Binner boundaries(double b1, double b2);

  Kind kind() const noexcept { return kind_; }
  std::optional<std::pair<double, double>> cuts() const noexcept { return cuts_; }

  /// Throws InvalidArgument for values outside [0,5].
  Level operator()(double v) const;

 private:
  explicit Binner(Kind kind) : kind_(kind) {}
  Kind kind_;
  std::optional<std::pair<double, double>> cuts_;
};

struct KMeansResult {
  std::vector<double> centroids;          // ascending
  std::vector<double> boundaries;         // midpoints of adjacent centroids
  std::vector<std::size_t> cluster_sizes; // in sorted-data order
  double sse = 0.0;
};

/// Exact k-means on the real line by dynamic programming over the sorted
/// data. Clusters are contiguous runs of sorted values and never split equal
/// values. Among partitions whose SSE is within 1e-9 (relative) of the
/// optimum, the one with the lexicographically smallest cluster-size
/// sequence wins. Throws InvalidArgument for empty data, non-finite values,
/// k < 1 or k greater than the number of distinct values.
KMeansResult kmeans1d(std::span<const double> data, int k);

}  // namespace cognipleasure
