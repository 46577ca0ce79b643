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

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <random>

#include "alnewton/bundle_io.hpp"
#include "alnewton/lpgen.hpp"

namespace alnewton {
namespace {

namespace fs = std::filesystem;

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() /
                       ("alnewton_test_" + name + "_" + std::to_string(std::random_device{}()));
  fs::remove_all(dir);
  return dir;
}

TEST(Bundle, RoundTripWithCertificates) {
  const auto dir = scratch("bundle");
  auto inst = generate({12, 30, 0.3, 4});
  write_bundle(dir, inst);
  const auto b = read_bundle(dir);
  EXPECT_TRUE(b.problem.a() == inst.problem.a());
  EXPECT_EQ(b.problem.b(), inst.problem.b());
  EXPECT_EQ(b.problem.c(), inst.problem.c());
  ASSERT_TRUE(b.x_star && b.u_star);
  EXPECT_EQ(*b.x_star, inst.x_star);
  EXPECT_EQ(*b.u_star, inst.u_star);
  EXPECT_EQ(b.meta["schema_version"], kBundleSchemaVersion);
  EXPECT_EQ(b.meta["seed"], 4);
  EXPECT_EQ(b.problem.density(), 0.3);
  fs::remove_all(dir);
}

TEST(Bundle, MetaIsOptional) {
  const auto dir = scratch("nometa");
  LpProblem p(SparseMatrix::identity(2), Vector{1.0, 1.0}, Vector{1.0, 1.0});
  write_bundle(dir, p, nullptr, nullptr, nlohmann::json::object());
  fs::remove(dir / "meta.json");
  const auto b = read_bundle(dir);
  EXPECT_FALSE(b.x_star.has_value());
  EXPECT_EQ(b.problem.density(), 0.5);
  fs::remove_all(dir);
}

TEST(Bundle, LengthMismatchIsParseError) {
  const auto dir = scratch("mismatch");
  LpProblem p(SparseMatrix::identity(2), Vector{1.0, 1.0}, Vector{1.0, 1.0});
  write_bundle(dir, p, nullptr, nullptr, nlohmann::json::object());
  write_vector_file(dir / "b.txt", Vector{1.0});
  EXPECT_THROW(read_bundle(dir), ParseError);
  fs::remove_all(dir);
}

TEST(Bundle, BadVectorLineNamesFileAndLine) {
  const auto dir = scratch("badvec");
  LpProblem p(SparseMatrix::identity(2), Vector{1.0, 1.0}, Vector{1.0, 1.0});
  write_bundle(dir, p, nullptr, nullptr, nlohmann::json::object());
  std::ofstream(dir / "c.txt") << "1.0\nabc\n";
  try {
    read_bundle(dir);
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    const std::string what = e.what();
    EXPECT_NE(what.find("c.txt"), std::string::npos) << what;
    EXPECT_NE(what.find(":2"), std::string::npos) << what;
  }
  fs::remove_all(dir);
}

TEST(Bundle, MissingDirectoryIsIoError) {
  EXPECT_THROW(read_bundle(scratch("missing")), IoError);
}

TEST(Bundle, VectorTextIsExact) {
  const auto dir = scratch("exact");
  fs::create_directories(dir);
  const Vector v{0.1, 1.0 / 3.0, -2.5e-300, 12345678.90123};
  write_vector_file(dir / "v.txt", v);
  EXPECT_EQ(read_vector_file(dir / "v.txt"), v);
  fs::remove_all(dir);
}

}  // namespace
}  // namespace alnewton
