// JSON file formats: matrices/states ({"dims": [...], "matrix": {"re", "im"}})
// written with 17 significant digits, and adaptive measurement trees stored as
// a manifest plus one matrix file per effect.
#pragma once

#include <string>
#include <utility>
#include <vector>

#include "qdf/measurement.hpp"
#include "qdf/state.hpp"

namespace qdf {

void write_matrix(const std::string& path, const std::vector<int>& dims, const Mat& m);
std::pair<std::vector<int>, Mat> read_matrix(const std::string& path);

void write_state(const std::string& path, const DensityOperator& rho);
DensityOperator read_state(const std::string& path, OnInvalid policy = OnInvalid::Reject);

// The tree is written into `dir` as manifest.json plus per-effect matrix
// files named by the outcome history ("node" for the root, "node_2_0" for the
// child reached by outcomes 2 then 0).
void write_tree(const std::string& dir, const AdaptiveMeasurementTree& tree);
AdaptiveMeasurementTree read_tree(const std::string& dir);

}  // namespace qdf
