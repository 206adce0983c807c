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

#ifndef PAIRRANK_LINK_H_
#define PAIRRANK_LINK_H_

#include <cmath>
#include <functional>
#include <string>
#include <utility>

#include "pairrank/core.h"

namespace pairrank {

// Maps a utility difference x = x_{u,i} - x_{u,j} to the probability that
// item i is chosen. Every link satisfies g(-x) = 1 - g(x) and is strictly
// increasing into (0, 1).
class LinkFunction {
 public:
  enum class Kind { kLogistic, kCustom };
  using Fn = std::function<double(double)>;

  // Bradley-Terry-Luce: g(x) = 1 / (1 + exp(-x)).
  static LinkFunction Logistic() { return LinkFunction(Kind::kLogistic); }

  // A user-supplied link. The callables must agree with each other; the
  // shape requirements are checked on a sample grid and violations throw
  // DomainError.
  static LinkFunction Custom(Fn g, Fn derivative, Fn log_g, Fn log_one_minus_g,
                             std::string name = "custom") {
    LinkFunction link(Kind::kCustom);
    link.g_ = std::move(g);
    link.dg_ = std::move(derivative);
    link.log_g_ = std::move(log_g);
    link.log_1mg_ = std::move(log_one_minus_g);
    link.name_ = std::move(name);
    link.ValidateShape();
    return link;
  }

  Kind kind() const { return kind_; }
  const std::string& name() const { return name_; }

  double operator()(double x) const {
    CheckFinite(x);
    if (kind_ == Kind::kLogistic) return Sigmoid(x);
    return g_(x);
  }

  double Derivative(double x) const {
    CheckFinite(x);
    if (kind_ == Kind::kLogistic) return Sigmoid(x) * Sigmoid(-x);
    return dg_(x);
  }

  // log g(x), accurate where g(x) is tiny.
  double LogProb(double x) const {
    CheckFinite(x);
    if (kind_ == Kind::kLogistic) return LogSigmoid(x);
    return log_g_(x);
  }

  // log(1 - g(x)), accurate where g(x) is close to one.
  double LogComplement(double x) const {
    CheckFinite(x);
    if (kind_ == Kind::kLogistic) return LogSigmoid(-x);
    return log_1mg_(x);
  }

  // Branch-stable logistic sigmoid; never overflows.
  static double Sigmoid(double x) {
    if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
    const double e = std::exp(x);
    return e / (1.0 + e);
  }

  static double LogSigmoid(double x) {
    if (x >= 0.0) return -std::log1p(std::exp(-x));
    return x - std::log1p(std::exp(x));
  }

 private:
  explicit LinkFunction(Kind kind)
      : kind_(kind), name_(kind == Kind::kLogistic ? "logistic" : "custom") {}

  static void CheckFinite(double x) {
    if (!std::isfinite(x)) throw DomainError("link argument must be finite");
  }

  void ValidateShape() const {
    if (!g_ || !dg_ || !log_g_ || !log_1mg_) {
      throw DomainError("custom link requires g, g', log g and log(1-g)");
    }
    double previous = -1.0;
    for (int k = -40; k <= 40; ++k) {
      const double x = 0.125 * k;
      const double gx = g_(x);
      if (!(gx > 0.0 && gx < 1.0)) {
        throw DomainError("custom link must map into (0, 1)");
      }
      if (!(gx > previous)) {
        throw DomainError("custom link must be strictly increasing");
      }
      if (std::abs(g_(-x) - (1.0 - gx)) > 1e-12) {
        throw DomainError("custom link must satisfy g(-x) = 1 - g(x)");
      }
      previous = gx;
    }
  }

  Kind kind_;
  std::string name_;
  Fn g_;
  Fn dg_;
  Fn log_g_;
  Fn log_1mg_;
};

}  // namespace pairrank

#endif  // PAIRRANK_LINK_H_
