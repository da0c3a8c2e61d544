#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace gencert {

/// Per-sample losses of a fixed model evaluated on a dataset.
struct SampleTable {
  std::vector<std::string> ids;
  std::vector<double> losses;

  std::size_t size() const noexcept { return losses.size(); }
};

/// n x d feature matrix, row-major, one row per sample id.
struct FeatureTable {
  std::vector<std::string> ids;
  std::size_t dim = 0;
  std::vector<double> values;

  std::size_t size() const noexcept { return ids.size(); }
  std::span<const double> row(std::size_t i) const {
    return {values.data() + i * dim, dim};
  }
  std::span<double> row(std::size_t i) { return {values.data() + i * dim, dim}; }
};

/// Cell index per sample id.
struct Assignment {
  std::vector<std::string> ids;
  std::vector<std::uint32_t> cells;

  std::size_t size() const noexcept { return cells.size(); }
};

/// Throws invalid_input on duplicate ids, a ragged matrix, d = 0, or a
/// non-finite entry.
void validate(const FeatureTable& features);

/// Throws invalid_input on duplicate ids or a size mismatch.
void validate(const SampleTable& samples);

/// Cell of every sample, in sample order. Every sample id must appear exactly
/// once in the assignment; extra assignment rows are an error as well.
std::vector<std::uint32_t> cells_for(const SampleTable& samples, const Assignment& assignment);

/// Rows of `features` reordered to follow `ids`.
FeatureTable select_rows(const FeatureTable& features, std::span<const std::string> ids);

}  // namespace gencert
