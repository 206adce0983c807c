// Copyright 2026 The PairRank Authors. All Rights Reserved.
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
//
// File formats. Matrices are header-less CSV with a `<stem>.meta.json`
// sidecar, datasets are `u,i,j,w` CSV and traces are
// `iter,objective,grad_norm,normalized_error` CSV. Every real number is
// written with 17 significant digits so that a round trip is exact.

#ifndef PAIRRANK_IO_H_
#define PAIRRANK_IO_H_

#include <cerrno>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "pairrank/core.h"
#include "pairrank/model.h"
#include "pairrank/optim.h"

namespace pairrank {

using Json = nlohmann::json;

inline std::string FormatDouble(double x) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

// "out/ztrue.csv" -> "out/ztrue.meta.json".
inline std::string MetaPathFor(const std::string& path) {
  std::filesystem::path p(path);
  p.replace_extension(".meta.json");
  return p.string();
}

namespace internal {

inline std::ofstream OpenForWrite(const std::string& path) {
  const std::filesystem::path p(path);
  if (p.has_parent_path()) {
    std::error_code ec;
    std::filesystem::create_directories(p.parent_path(), ec);
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  return out;
}

inline std::ifstream OpenForRead(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path + "' for reading");
  return in;
}

inline void Finish(std::ofstream& out, const std::string& path) {
  out.flush();
  if (!out) throw IoError("write to '" + path + "' failed");
}

inline std::vector<std::string> SplitCsv(const std::string& line) {
  std::vector<std::string> fields;
  std::stringstream ss(line);
  std::string field;
  while (std::getline(ss, field, ',')) fields.push_back(field);
  if (!line.empty() && line.back() == ',') fields.emplace_back();
  return fields;
}

inline void StripCr(std::string& line) {
  if (!line.empty() && line.back() == '\r') line.pop_back();
}

inline double ParseReal(const std::string& s, const std::string& where) {
  errno = 0;
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  // Underflow to a subnormal also sets ERANGE but round-trips fine, so
  // only overflow is rejected.
  if (s.empty() || end != s.c_str() + s.size() || !std::isfinite(v)) {
    throw IoError("bad number '" + s + "' in " + where);
  }
  return v;
}

inline long long ParseInt(const std::string& s, const std::string& where) {
  errno = 0;
  char* end = nullptr;
  const long long v = std::strtoll(s.c_str(), &end, 10);
  if (s.empty() || end != s.c_str() + s.size() || errno == ERANGE) {
    throw IoError("bad integer '" + s + "' in " + where);
  }
  return v;
}

}  // namespace internal

inline void WriteJson(const std::string& path, const Json& j) {
  std::ofstream out = internal::OpenForWrite(path);
  out << j.dump(2) << '\n';
  internal::Finish(out, path);
}

inline Json ReadJson(const std::string& path) {
  std::ifstream in = internal::OpenForRead(path);
  try {
    return Json::parse(in);
  } catch (const Json::exception& e) {
    throw IoError("malformed JSON in '" + path + "': " + e.what());
  }
}

inline void WriteMatrixCsv(const std::string& path, const MatrixXd& m) {
  std::ofstream out = internal::OpenForWrite(path);
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      if (j > 0) out << ',';
      out << FormatDouble(m(i, j));
    }
    out << '\n';
  }
  internal::Finish(out, path);
}

inline MatrixXd ReadMatrixCsv(const std::string& path) {
  std::ifstream in = internal::OpenForRead(path);
  std::vector<std::vector<double>> rows;
  std::string line;
  while (std::getline(in, line)) {
    internal::StripCr(line);
    if (line.empty()) continue;
    std::vector<double> row;
    for (const std::string& f : internal::SplitCsv(line)) {
      row.push_back(internal::ParseReal(f, path));
    }
    if (!rows.empty() && row.size() != rows.front().size()) {
      throw IoError("ragged matrix rows in '" + path + "'");
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw IoError("empty matrix file '" + path + "'");
  MatrixXd m(rows.size(), rows.front().size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t j = 0; j < rows[i].size(); ++j) m(i, j) = rows[i][j];
  }
  return m;
}

// A factor matrix plus `{n1, n2, r}` and any caller-supplied fields.
inline void WriteFactor(const std::string& path, const FactorMatrix& z,
                        Json meta = Json::object()) {
  meta["n1"] = z.n1();
  meta["n2"] = z.n2();
  meta["r"] = z.rank();
  WriteMatrixCsv(path, z.matrix());
  WriteJson(MetaPathFor(path), meta);
}

inline FactorMatrix ReadFactor(const std::string& path) {
  const Json meta = ReadJson(MetaPathFor(path));
  MatrixXd z = ReadMatrixCsv(path);
  try {
    const Dimensions dims(meta.at("n1").get<int>(), meta.at("n2").get<int>(),
                          meta.at("r").get<int>());
    if (z.rows() != dims.n() || z.cols() != dims.rank()) {
      throw IoError("matrix in '" + path + "' does not match its metadata");
    }
    return FactorMatrix(dims.n1(), std::move(z));
  } catch (const Json::exception& e) {
    throw IoError("bad metadata for '" + path + "': " + e.what());
  }
}

inline void WriteTruth(const std::string& path, const GroundTruth& truth,
                       std::uint64_t seed) {
  Json meta;
  meta["sigma"] = truth.sigma;
  meta["mu"] = truth.mu;
  meta["kappa"] = truth.kappa;
  meta["seed"] = seed;
  WriteFactor(path, truth.zstar, std::move(meta));
}

// mu and kappa are recomputed from the stored factor and spectrum.
inline GroundTruth ReadTruth(const std::string& path) {
  FactorMatrix z = ReadFactor(path);
  const Json meta = ReadJson(MetaPathFor(path));
  try {
    return MakeGroundTruth(std::move(z),
                           meta.at("sigma").get<std::vector<double>>());
  } catch (const Json::exception& e) {
    throw IoError("truth metadata for '" + path + "' lacks sigma: " +
                  std::string(e.what()));
  }
}

// `u,i,j,w` with a sidecar holding the dimensions and provenance.
inline void WriteDataset(const std::string& path, const Dataset& data,
                         Json meta = Json::object()) {
  std::ofstream out = internal::OpenForWrite(path);
  out << "u,i,j,w\n";
  for (const Comparison& c : data.comparisons()) {
    out << c.triplet.u << ',' << c.triplet.i << ',' << c.triplet.j << ','
        << FormatDouble(c.w) << '\n';
  }
  internal::Finish(out, path);
  meta["n1"] = data.dims().n1();
  meta["n2"] = data.dims().n2();
  meta["r"] = data.dims().rank();
  meta["m"] = data.size();
  WriteJson(MetaPathFor(path), meta);
}

inline Dataset ReadDataset(const std::string& path, const Dimensions& dims) {
  std::ifstream in = internal::OpenForRead(path);
  std::string line;
  if (!std::getline(in, line)) throw IoError("empty dataset '" + path + "'");
  internal::StripCr(line);
  if (line != "u,i,j,w") {
    throw IoError("dataset '" + path + "' must start with header u,i,j,w");
  }
  std::vector<Comparison> points;
  while (std::getline(in, line)) {
    internal::StripCr(line);
    if (line.empty()) continue;
    const std::vector<std::string> f = internal::SplitCsv(line);
    if (f.size() != 4) throw IoError("expected 4 fields in '" + path + "'");
    Comparison c;
    c.triplet.u = static_cast<int>(internal::ParseInt(f[0], path));
    c.triplet.i = static_cast<int>(internal::ParseInt(f[1], path));
    c.triplet.j = static_cast<int>(internal::ParseInt(f[2], path));
    c.w = internal::ParseReal(f[3], path);
    points.push_back(c);
  }
  try {
    return Dataset(dims, std::move(points));
  } catch (const std::logic_error& e) {
    throw IoError("invalid dataset '" + path + "': " + e.what());
  }
}

// Dimensions come from the sidecar.
inline Dataset ReadDataset(const std::string& path) {
  const Json meta = ReadJson(MetaPathFor(path));
  try {
    return ReadDataset(path, Dimensions(meta.at("n1").get<int>(),
                                        meta.at("n2").get<int>(),
                                        meta.at("r").get<int>()));
  } catch (const Json::exception& e) {
    throw IoError("bad metadata for '" + path + "': " + e.what());
  }
}

// The error column is left empty when the fit had no ground truth.
inline void WriteTrace(const std::string& path, const FitTrace& trace) {
  std::ofstream out = internal::OpenForWrite(path);
  out << "iter,objective,grad_norm,normalized_error\n";
  for (const TraceRecord& r : trace.records) {
    out << r.t << ',' << FormatDouble(r.objective) << ','
        << FormatDouble(r.grad_norm) << ',';
    if (r.normalized_error) out << FormatDouble(*r.normalized_error);
    out << '\n';
  }
  internal::Finish(out, path);
}

inline std::vector<TraceRecord> ReadTrace(const std::string& path) {
  std::ifstream in = internal::OpenForRead(path);
  std::string line;
  if (!std::getline(in, line)) throw IoError("empty trace '" + path + "'");
  std::vector<TraceRecord> records;
  while (std::getline(in, line)) {
    internal::StripCr(line);
    if (line.empty()) continue;
    const std::vector<std::string> f = internal::SplitCsv(line);
    if (f.size() != 4) throw IoError("expected 4 fields in '" + path + "'");
    TraceRecord r;
    r.t = static_cast<int>(internal::ParseInt(f[0], path));
    r.objective = internal::ParseReal(f[1], path);
    r.grad_norm = internal::ParseReal(f[2], path);
    if (!f[3].empty()) r.normalized_error = internal::ParseReal(f[3], path);
    records.push_back(r);
  }
  return records;
}

}  // namespace pairrank

#endif  // PAIRRANK_IO_H_
