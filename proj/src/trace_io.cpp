// SPDX-License-Identifier: MIT
#include "trace_io.hpp"

#include <charconv>
#include <fstream>
#include <stdexcept>

#include <json.hpp>

namespace pepfo {

std::string trace_to_csv(const IterateTrace& t) {
  std::string out = "i,f_x,f_y,grad_norm_x,grad_norm_y\n";
  for (int i = 0; i <= t.N; ++i) {
    out += std::to_string(i);
    out += ',';
    out += format_double(t.f_x[i]);
    out += ',';
    out += format_double(t.f_y[i]);
    out += ',';
    out += format_double(t.grad_norm_x(i));
    out += ',';
    out += format_double(t.grad_norm_y(i));
    out += '\n';
  }
  return out;
}

namespace {

nlohmann::json points_json(const std::vector<Eigen::VectorXd>& pts) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& p : pts) {
    nlohmann::json row = nlohmann::json::array();
    for (Eigen::Index k = 0; k < p.size(); ++k) row.push_back(p[k]);
    arr.push_back(std::move(row));
  }
  return arr;
}

}  // namespace

std::string trace_to_json(const IterateTrace& t, bool include_points) {
  nlohmann::json j;
  j["N"] = t.N;
  j["L"] = t.L;
  j["f_x"] = t.f_x;
  j["f_y"] = t.f_y;
  std::vector<double> gx, gy;
  for (int i = 0; i <= t.N; ++i) {
    gx.push_back(t.grad_norm_x(i));
    gy.push_back(t.grad_norm_y(i));
  }
  j["grad_norm_x"] = gx;
  j["grad_norm_y"] = gy;
  j["f_y_post"] = t.f_y_post;
  j["grad_norm_y_post"] = t.grad_y_post.norm();
  if (include_points) {
    nlohmann::json pts;
    pts["x"] = points_json(t.x);
    pts["y"] = points_json(t.y);
    if (!t.z.empty()) pts["z"] = points_json(t.z);
    nlohmann::json post = nlohmann::json::array();
    for (Eigen::Index k = 0; k < t.y_post.size(); ++k) post.push_back(t.y_post[k]);
    pts["y_post"] = post;
    j["points"] = std::move(pts);
  }
  return j.dump(2) + "\n";
}

void write_text_file(const std::string& path, const std::string& body) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::ios_base::failure("cannot open for writing: " + path);
  out << body;
  if (!out) throw std::ios_base::failure("write failed: " + path);
}

}  // namespace pepfo
