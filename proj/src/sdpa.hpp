// SPDX-License-Identifier: MIT
//
// SDPA sparse-format (.dat-s) export of the performance-estimation duals.
//
// The exported problem is: minimize c^T x subject to X = sum_v x_v F_v - F_0,
// X >= 0 (blockwise). Block 1 is the (N+2)x(N+2) LMI; block 2 is diagonal and
// carries the nonnegativity slots plus every affine equality encoded as a
// pair of opposite inequalities. A sidecar JSON maps variable indices and
// diagonal slots to their meanings.
#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "pep.hpp"

namespace pepfo {

struct SdpaEntry {
  int mat = 0;  // 0 = F_0, otherwise the variable index 1..m
  int blk = 1;
  int i = 1;    // 1-indexed, upper triangle (i <= j)
  int j = 1;
  double value = 0.0;

  friend bool operator==(const SdpaEntry&, const SdpaEntry&) = default;
};

struct SdpaModel {
  int m = 0;
  std::vector<int> block_sizes;  // negative size marks a diagonal block
  std::vector<double> c;
  std::vector<SdpaEntry> entries;  // sorted by (mat, blk, i, j), zeros omitted
};

struct SdpaExport {
  PepKind kind = PepKind::D;
  int N = 0;
  SdpaModel model;
  std::vector<std::string> variable_names;  // index v-1 names variable v
  std::vector<std::string> slot_meanings;   // block-2 diagonal slots in order
};

SdpaExport build_dual_sdp(PepKind kind, const StepMatrix& h);

std::string render_sdpa(const SdpaModel& model, const std::string& comment);
std::string render_sidecar_json(const SdpaExport& ex);

// Writes <path> and <path>.json.
void export_sdpa(PepKind kind, const StepMatrix& h, const std::string& path);

SdpaModel parse_sdpa_text(const std::string& text);
SdpaModel parse_sdpa_file(const std::string& path);

// Exact equality of every coefficient, size, and objective entry.
bool models_identical(const SdpaModel& a, const SdpaModel& b, std::string* why = nullptr);

// Orders the certificate's multipliers to match the exported variable layout.
Eigen::VectorXd certificate_assignment(const SdpaExport& ex, const DualCertificate& cert);

struct AssignmentCheck {
  bool ok = false;
  double min_block_eigenvalue = 0.0;
  double worst_diag_violation = 0.0;  // positive = violated by this much
  std::string detail;
};

// Evaluates X = sum x_v F_v - F_0 and checks every block against zero at the
// given relative tolerance.
AssignmentCheck check_assignment(const SdpaModel& model, const Eigen::VectorXd& x, double tol);

}  // namespace pepfo
