#include "gencert/tables.hpp"

#include <cmath>
#include <unordered_map>
#include <unordered_set>

#include "gencert/error.hpp"

namespace gencert {
namespace {

void check_unique(const std::vector<std::string>& ids, const char* what) {
  std::unordered_set<std::string_view> seen;
  seen.reserve(ids.size());
  for (const auto& id : ids)
    if (!seen.insert(id).second)
      throw Error(ErrorKind::invalid_input, std::string("duplicate id '") + id + "' in " + what);
}

std::unordered_map<std::string_view, std::size_t> index_of(const std::vector<std::string>& ids) {
  std::unordered_map<std::string_view, std::size_t> index;
  index.reserve(ids.size());
  for (std::size_t i = 0; i < ids.size(); ++i) index.emplace(ids[i], i);
  return index;
}

}  // namespace

void validate(const FeatureTable& features) {
  if (features.dim == 0) throw Error(ErrorKind::invalid_input, "feature dimension must be >= 1");
  if (features.values.size() != features.ids.size() * features.dim)
    throw Error(ErrorKind::invalid_input, "feature matrix is not n x d");
  check_unique(features.ids, "feature table");
  for (double v : features.values)
    if (!std::isfinite(v)) throw Error(ErrorKind::invalid_input, "non-finite feature value");
}

void validate(const SampleTable& samples) {
  if (samples.ids.size() != samples.losses.size())
    throw Error(ErrorKind::invalid_input, "sample ids and losses differ in length");
  check_unique(samples.ids, "sample table");
}

std::vector<std::uint32_t> cells_for(const SampleTable& samples, const Assignment& assignment) {
  if (assignment.ids.size() != assignment.cells.size())
    throw Error(ErrorKind::invalid_input, "assignment ids and cells differ in length");
  check_unique(assignment.ids, "assignment");
  if (assignment.size() != samples.size())
    throw Error(ErrorKind::invalid_input,
                "assignment has " + std::to_string(assignment.size()) + " rows but there are " +
                    std::to_string(samples.size()) + " samples");
  const auto index = index_of(assignment.ids);
  std::vector<std::uint32_t> cells(samples.size());
  for (std::size_t i = 0; i < samples.size(); ++i) {
    auto it = index.find(samples.ids[i]);
    if (it == index.end())
      throw Error(ErrorKind::invalid_input, "sample '" + samples.ids[i] + "' has no cell assignment");
    cells[i] = assignment.cells[it->second];
  }
  return cells;
}

FeatureTable select_rows(const FeatureTable& features, std::span<const std::string> ids) {
  const auto index = index_of(features.ids);
  FeatureTable out;
  out.dim = features.dim;
  out.ids.assign(ids.begin(), ids.end());
  out.values.reserve(ids.size() * features.dim);
  for (const auto& id : ids) {
    auto it = index.find(id);
    if (it == index.end())
      throw Error(ErrorKind::invalid_input, "sample '" + id + "' has no feature row");
    auto r = features.row(it->second);
    out.values.insert(out.values.end(), r.begin(), r.end());
  }
  return out;
}

}  // namespace gencert
