#pragma once

// File formats. CSV headers are exact and mandatory; numbers use a decimal
// point regardless of locale. Parse errors carry the 1-based line number.

#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "gencert/bound_core.hpp"
#include "gencert/conclab.hpp"
#include "gencert/optimize.hpp"
#include "gencert/partition.hpp"
#include "gencert/synth.hpp"
#include "gencert/tables.hpp"

namespace gencert::io {

std::string read_text(const std::string& path);
void write_text(const std::string& path, const std::string& content);

/// `id,loss`
SampleTable parse_losses(std::istream& in);
/// `id,f1,...,fd`
FeatureTable parse_features(std::istream& in);
/// `id,cell`
Assignment parse_assignments(std::istream& in);
/// `cell,p`; returns K masses indexed by cell (missing cells are 0).
std::vector<double> parse_masses(std::istream& in, std::size_t K);

SampleTable read_losses(const std::string& path);
FeatureTable read_features(const std::string& path);
Assignment read_assignments(const std::string& path);
std::vector<double> read_masses(const std::string& path, std::size_t K);

std::string losses_csv(const SampleTable& t);
std::string features_csv(const FeatureTable& t);
std::string assignments_csv(const Assignment& a);

/// Shortest decimal text that parses back to the same double.
std::string format_double(double v);

/// Replay information stored next to the numbers.
struct ReportContext {
  std::string command;
  std::map<std::string, std::string> inputs;
  std::map<std::string, std::uint64_t> seeds;
};

std::string report_json(const BoundReport& r, const ReportContext& ctx);
/// Reads the fields written by report_json back into a report.
BoundReport parse_report(const std::string& json);
/// bound = (main_part if present, else train_loss) + unc, in the same
/// floating-point order as the certificate itself.
double reassemble_bound(const BoundReport& r);

std::string centroids_json(const Centroids& c);
Centroids parse_centroids(const std::string& json);

/// `K,alpha,gamma,u_hat,g,unc,bound,valid`
std::string grid_csv(const GridResult& g);
/// `check,params,estimate,bound,margin,pass`
std::string checks_csv(const std::vector<conclab::CheckResult>& rows);
/// One row per trial.
std::string coverage_csv(const synth::CoverageResult& r);

}  // namespace gencert::io
