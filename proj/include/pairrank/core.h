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
// Core value types shared by every pairrank module: problem dimensions,
// comparison triplets, datasets and the stacked (users; items) factor matrix.

#ifndef PAIRRANK_CORE_H_
#define PAIRRANK_CORE_H_

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace pairrank {

using Eigen::MatrixXd;
using Eigen::VectorXd;

// Error taxonomy. The CLI maps these onto exit codes.
class DomainError : public std::domain_error {
 public:
  explicit DomainError(const std::string& what) : std::domain_error(what) {}
};

class ConfigError : public std::invalid_argument {
 public:
  explicit ConfigError(const std::string& what)
      : std::invalid_argument(what) {}
};

// Raised by brute-force oracles when an instance exceeds their hard cap.
class SizeError : public std::length_error {
 public:
  explicit SizeError(const std::string& what) : std::length_error(what) {}
};

class IoError : public std::runtime_error {
 public:
  explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

// Users n1, items n2, latent rank r. Stacked row count is n = n1 + n2.
class Dimensions {
 public:
  Dimensions(int n1, int n2, int r) : n1_(n1), n2_(n2), r_(r) {
    if (n1 < 1) throw DomainError("n1 must be >= 1");
    if (n2 < 2) throw DomainError("n2 must be >= 2");
    if (r < 1 || r > std::min(n1, n2)) {
      throw DomainError("rank must lie in [1, min(n1, n2)]");
    }
  }

  int n1() const { return n1_; }
  int n2() const { return n2_; }
  int rank() const { return r_; }
  int n() const { return n1_ + n2_; }

  // Number of distinct (u; i, j) triplets with ordered i != j.
  std::int64_t NumTriplets() const {
    return static_cast<std::int64_t>(n1_) * n2_ * (n2_ - 1);
  }

  bool operator==(const Dimensions&) const = default;

 private:
  int n1_;
  int n2_;
  int r_;
};

// User u compares the ordered item pair (i, j). Indices are 0-based.
struct Triplet {
  int u = 0;
  int i = 0;
  int j = 1;

  Triplet Reversed() const { return {u, j, i}; }
  bool operator==(const Triplet&) const = default;
};

// A triplet with its observed outcome w in [0, 1]. In noisy mode w is 0.0
// or 1.0; in noiseless mode it is the choice probability itself.
struct Comparison {
  Triplet triplet;
  double w = 0.5;
};

inline void CheckTriplet(const Dimensions& dims, const Triplet& t) {
  if (t.u < 0 || t.u >= dims.n1()) throw DomainError("user index out of range");
  if (t.i < 0 || t.i >= dims.n2() || t.j < 0 || t.j >= dims.n2()) {
    throw DomainError("item index out of range");
  }
  if (t.i == t.j) throw DomainError("triplet items must be distinct");
}

class Dataset {
 public:
  Dataset(Dimensions dims, std::vector<Comparison> comparisons)
      : dims_(dims), comparisons_(std::move(comparisons)) {
    if (comparisons_.empty()) throw DomainError("dataset must be non-empty");
    for (const Comparison& c : comparisons_) {
      CheckTriplet(dims_, c.triplet);
      if (!(c.w >= 0.0 && c.w <= 1.0)) {
        throw DomainError("comparison outcome w must lie in [0, 1]");
      }
    }
  }

  const Dimensions& dims() const { return dims_; }
  const std::vector<Comparison>& comparisons() const { return comparisons_; }
  std::size_t size() const { return comparisons_.size(); }
  const Comparison& operator[](std::size_t k) const { return comparisons_[k]; }

 private:
  Dimensions dims_;
  std::vector<Comparison> comparisons_;
};

// Z in R^{n x r}: rows [0, n1) hold user features Z_U, rows [n1, n) hold
// item features Z_V.
class FactorMatrix {
 public:
  FactorMatrix(int n1, MatrixXd z) : n1_(n1), z_(std::move(z)) {
    if (n1 < 1 || z_.rows() <= n1 || z_.cols() < 1) {
      throw DomainError("factor matrix shape does not split into users/items");
    }
    if (!z_.allFinite()) throw DomainError("factor matrix entries must be finite");
  }

  static FactorMatrix Zero(const Dimensions& dims) {
    return FactorMatrix(dims.n1(), MatrixXd::Zero(dims.n(), dims.rank()));
  }

  static FactorMatrix FromBlocks(const MatrixXd& users, const MatrixXd& items) {
    if (users.cols() != items.cols()) {
      throw DomainError("user and item blocks must share a rank");
    }
    MatrixXd z(users.rows() + items.rows(), users.cols());
    z << users, items;
    return FactorMatrix(static_cast<int>(users.rows()), std::move(z));
  }

  int n1() const { return n1_; }
  int n2() const { return static_cast<int>(z_.rows()) - n1_; }
  int n() const { return static_cast<int>(z_.rows()); }
  int rank() const { return static_cast<int>(z_.cols()); }

  const MatrixXd& matrix() const { return z_; }
  MatrixXd& mutable_matrix() { return z_; }

  auto users() const { return z_.topRows(n1_); }
  auto items() const { return z_.bottomRows(n2()); }
  auto user(int u) const { return z_.row(u); }
  auto item(int i) const { return z_.row(n1_ + i); }

  bool Matches(const Dimensions& dims) const {
    return n1_ == dims.n1() && n2() == dims.n2() && rank() == dims.rank();
  }

 private:
  int n1_;
  MatrixXd z_;
};

inline void CheckShape(const FactorMatrix& z, const Dimensions& dims) {
  if (!z.Matches(dims)) throw DomainError("factor matrix shape mismatch");
}

inline void CheckSameShape(const FactorMatrix& a, const FactorMatrix& b) {
  if (a.n1() != b.n1() || a.n() != b.n() || a.rank() != b.rank()) {
    throw DomainError("factor matrix shape mismatch");
  }
}

// Largest row l2 norm, ||Z||_{2,inf}.
inline double RowNormMax(const MatrixXd& z) {
  return z.rows() == 0 ? 0.0 : z.rowwise().norm().maxCoeff();
}

// The planted model: Z* = (U*; V*) Sigma*^{1/2} plus its spectrum.
struct GroundTruth {
  FactorMatrix zstar;
  std::vector<double> sigma;  // descending singular values of X*
  double mu = 1.0;
  double kappa = 1.0;

  int rank() const { return zstar.rank(); }
  double sigma_r() const { return sigma.back(); }
  Dimensions dims() const { return {zstar.n1(), zstar.n2(), zstar.rank()}; }
  // X* = Z*_U Z*_V^T.
  MatrixXd Scores() const { return zstar.users() * zstar.items().transpose(); }
};

}  // namespace pairrank

#endif  // PAIRRANK_CORE_H_
