// SPDX-License-Identifier: MIT
//
// Summary tables and exact worst-case replays. Cells are tagged by origin:
// analytic cells are recomputed from the bounds module, measured cells come
// from runs on the known worst-case functions, and cells whose reference
// values require an external SDP solve are marked "external".
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "methods.hpp"

namespace pepfo {

enum class CellTag { Label, Analytic, Measured, External };
const char* to_string(CellTag t);

struct TableCell {
  std::string text;
  CellTag tag = CellTag::Label;
};

struct Table {
  std::string title;  // states the reciprocal convention
  std::vector<std::string> header;
  std::vector<std::vector<TableCell>> rows;
};

// which = 1: asymptotic constants; 2: reciprocal cost at x_N;
// 3: reciprocal smallest gradient; 4: reciprocal final gradient.
Table make_table(int which, const std::vector<int>& Ns, double L = 1.0, double R = 1.0);

std::string table_to_csv(const Table& t);
std::string table_to_json(const Table& t);

struct WorstCaseReport {
  IterateTrace trace;
  double expected_final_grad = 0.0;
  double max_rel_gap = 0.0;  // worst deviation from the predicted trajectory
  bool ok = false;           // max_rel_gap <= 1e-9
};

// Momentum method with the doubled-final sequence on (L/2)||x||^2 from
// x_0 = R nu: iterates alternate x_i = (-1)^i R nu / theta_i and the final
// gradient meets its bound L R / theta_N with equality.
WorstCaseReport worstcase_ogm_quadratic(int N, double L, double R, int d, uint64_t seed);

// Plain gradient method on the radial Huber function with kink R/(N+1):
// iterates walk the ray, every gradient has norm exactly L R / (N+1).
WorstCaseReport worstcase_gm_huber(int N, double L, double R, int d, uint64_t seed);

}  // namespace pepfo
