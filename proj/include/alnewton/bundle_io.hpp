// Copyright 2026 The alnewton Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Problem bundle: a directory holding
//
//   A.mtx              Matrix Market coordinate real general
//   b.txt, c.txt       one real per line
//   x_star.txt         optional certified primal point
//   u_star.txt         optional certified dual point
//   meta.json          {schema_version, m, n, nnz, density, seed, ...}
//
// meta.json is optional on read; when present its m/n must match A.

#pragma once

#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <utility>

#include "json.hpp"

#include "alnewton/errors.hpp"
#include "alnewton/lp_model.hpp"
#include "alnewton/lpgen.hpp"
#include "alnewton/matrix_market.hpp"

namespace alnewton {

inline constexpr int kBundleSchemaVersion = 1;

struct Bundle {
  LpProblem problem;
  std::optional<Vector> x_star;
  std::optional<Vector> u_star;
  nlohmann::json meta = nlohmann::json::object();
};

inline Vector read_vector_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  Vector out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto t = detail::trim(line);
    if (t.empty()) continue;
    double v = 0.0;
    if (!detail::parse_real(t, v) || !std::isfinite(v)) {
      throw ParseError(path.string() + ":" + std::to_string(lineno) +
                       ": expected one finite real, got '" + std::string(t) + "'");
    }
    out.push_back(v);
  }
  return out;
}

inline void write_vector_file(const std::filesystem::path& path,
                              std::span<const double> v) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  for (double x : v) out << detail::format_real(x) << '\n';
  if (!out) throw IoError("write failed for " + path.string());
}

inline void write_json_file(const std::filesystem::path& path, const nlohmann::json& j) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  out << j.dump(2) << '\n';
  if (!out) throw IoError("write failed for " + path.string());
}

inline nlohmann::json generator_meta(const GenSpec& spec, Index nnz) {
  return {{"schema_version", kBundleSchemaVersion},
          {"m", spec.m},
          {"n", spec.n},
          {"nnz", nnz},
          {"density", spec.density},
          {"seed", spec.seed},
          {"value_scale", spec.value_scale},
          {"zero_fraction", spec.zero_fraction},
          {"generator_version", kGeneratorVersion}};
}

inline void write_bundle(const std::filesystem::path& dir, const LpProblem& p,
                         const Vector* x_star, const Vector* u_star,
                         nlohmann::json meta) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw IoError("cannot create " + dir.string() + ": " + ec.message());
  write_matrix_market_file((dir / "A.mtx").string(), p.a());
  write_vector_file(dir / "b.txt", p.b());
  write_vector_file(dir / "c.txt", p.c());
  if (x_star) write_vector_file(dir / "x_star.txt", *x_star);
  if (u_star) write_vector_file(dir / "u_star.txt", *u_star);
  meta["schema_version"] = kBundleSchemaVersion;
  meta["m"] = p.rows();
  meta["n"] = p.cols();
  meta["nnz"] = p.a().nnz();
  if (!meta.contains("density")) {
    meta["density"] = p.density();
  }
  write_json_file(dir / "meta.json", meta);
}

inline void write_bundle(const std::filesystem::path& dir, const GeneratedInstance& inst) {
  write_bundle(dir, inst.problem, &inst.x_star, &inst.u_star,
               generator_meta(inst.spec, inst.problem.a().nnz()));
}

inline Bundle read_bundle(const std::filesystem::path& dir) {
  if (!std::filesystem::is_directory(dir)) {
    throw IoError("bundle directory not found: " + dir.string());
  }
  SparseMatrix a = read_matrix_market_file((dir / "A.mtx").string());
  Vector b = read_vector_file(dir / "b.txt");
  Vector c = read_vector_file(dir / "c.txt");
  if (static_cast<Index>(b.size()) != a.rows()) {
    throw ParseError((dir / "b.txt").string() + ": expected " +
                     std::to_string(a.rows()) + " values, found " + std::to_string(b.size()));
  }
  if (static_cast<Index>(c.size()) != a.cols()) {
    throw ParseError((dir / "c.txt").string() + ": expected " +
                     std::to_string(a.cols()) + " values, found " + std::to_string(c.size()));
  }

  nlohmann::json meta = nlohmann::json::object();
  std::optional<double> density;
  const auto meta_path = dir / "meta.json";
  if (std::filesystem::exists(meta_path)) {
    std::ifstream in(meta_path);
    try {
      meta = nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
      throw ParseError(meta_path.string() + ": " + e.what());
    }
    if (meta.contains("m") && meta["m"].get<Index>() != a.rows()) {
      throw ParseError(meta_path.string() + ": m disagrees with A.mtx");
    }
    if (meta.contains("n") && meta["n"].get<Index>() != a.cols()) {
      throw ParseError(meta_path.string() + ": n disagrees with A.mtx");
    }
    if (meta.contains("density") && meta["density"].is_number()) {
      const double d = meta["density"].get<double>();
      if (d > 0.0 && d <= 1.0) density = d;
    }
  }

  auto optional_vector = [&](const char* name, Index expected) -> std::optional<Vector> {
    const auto path = dir / name;
    if (!std::filesystem::exists(path)) return std::nullopt;
    Vector v = read_vector_file(path);
    if (static_cast<Index>(v.size()) != expected) {
      throw ParseError(path.string() + ": expected " + std::to_string(expected) +
                       " values, found " + std::to_string(v.size()));
    }
    return v;
  };
  auto x_star = optional_vector("x_star.txt", a.cols());
  auto u_star = optional_vector("u_star.txt", a.rows());
  if (a.nnz() == 0) {
    throw ParseError((dir / "A.mtx").string() + ": matrix has no stored entries");
  }
  return Bundle{LpProblem(std::move(a), std::move(b), std::move(c), density),
                std::move(x_star), std::move(u_star), std::move(meta)};
}

}  // namespace alnewton
