#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "rfa/engine.hpp"

namespace rfa::io {

/// Contents of a result file.
struct SavedFit {
  std::string method;  // "barycentric", "thiele" or "parfrac"
  std::string fun;     // expression text, empty when unknown
  std::optional<Domain> domain;
  Fit fit;
  ConvergenceHistory history;
  std::optional<double> max_check_err;
  std::vector<complex> test_points;
  std::vector<double> params;
};

/// Result document with the fields method, degrees, nodes, values, weights, poles,
/// residues, history and max_check_err, plus fun, domain, test_points and params.
/// Complex numbers are [re, im] pairs; non-finite reals are written as null.
std::string to_json(const Approximation& a, std::string_view fun, std::optional<double> max_check_err,
                    int indent = 2);
std::string to_json(const SavedFit& s, int indent = 2);
/// Throws InvalidInput on malformed documents.
SavedFit from_json(std::string_view text);

/// Rebuilds an Approximation around a loaded fit. The domain must be present.
Approximation to_approximation(SavedFit s, Function f);

std::string domain_to_json(const Domain& d);
Domain domain_from_json(std::string_view text);

/// One row per history record: n,max_err,allowed (allowed is 1, 0 or empty when unchecked).
std::string history_csv(const ConvergenceHistory& h);
/// One row per pole, no header: re,im,res_re,res_im.
std::string poles_csv(const std::vector<PoleResidue>& p);
/// Columns re,im (a single column means real values, further columns are ignored);
/// an optional header line is skipped.
std::vector<complex> read_points_csv(std::string_view text);

std::string read_file(const std::string& path);
void write_file(const std::string& path, std::string_view content);

}  // namespace rfa::io
