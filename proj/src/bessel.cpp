/*
 * Copyright 2026 The locinfer Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 *
 */

#include "locinfer/bessel.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <string>

#include "locinfer/errors.hpp"

namespace locinfer {

namespace {

constexpr double kEps = 1.0e-16;
constexpr double kTemmeLimit = 2.0;
constexpr int kMaxIterations = 100000;

// Taylor coefficients of 1/Gamma(z) = sum_k c[k] z^k, k >= 1.
constexpr std::array<double, 15> kRecipGamma = {
  0.0,
  1.0,
  0.5772156649015329,
  -0.6558780715202538,
  -0.0420026350340952,
  0.1665386113822915,
  -0.0421977345555443,
  -0.0096219715278770,
  0.0072189432466630,
  -0.0011651675918591,
  -0.0002152416741149,
  0.0001280502823882,
  -0.0000201348547807,
  -0.0000012504934821,
  0.0000011330272320,
};

struct TemmeGammas
{
  double gam1;  // (1/G(1-mu) - 1/G(1+mu)) / (2 mu)
  double gam2;  // (1/G(1-mu) + 1/G(1+mu)) / 2
  double gampl; // 1/G(1+mu)
  double gammi; // 1/G(1-mu)
};

TemmeGammas temme_gammas(double mu)
{
  TemmeGammas g{};
  g.gampl = 1.0 / std::tgamma(1.0 + mu);
  g.gammi = 1.0 / std::tgamma(1.0 - mu);
  g.gam2 = 0.5 * (g.gammi + g.gampl);
  if (std::abs(mu) > 0.1) {
    g.gam1 = (g.gammi - g.gampl) / (2.0 * mu);
  } else {
    // Odd part of 1/Gamma(1+z) = sum_k c[k+1] z^k, summed in mu^2.
    const double mu2 = mu * mu;
    double acc = 0.0;
    for (int k = 14; k >= 2; k -= 2)
      acc = acc * mu2 + kRecipGamma[static_cast<std::size_t>(k)];
    g.gam1 = -acc;
  }
  return g;
}

// K_mu(x) and K_{mu+1}(x) for |mu| <= 1/2.
std::array<double, 2> bessel_k_pair(double mu, double x)
{
  const double pi = std::numbers::pi;
  const double mu2 = mu * mu;
  const double xi = 1.0 / x;

  if (x < kTemmeLimit) {
    const double x2 = 0.5 * x;
    const double pimu = pi * mu;
    const double fact = std::abs(pimu) < kEps ? 1.0 : pimu / std::sin(pimu);
    double d = -std::log(x2);
    double e = mu * d;
    const double fact2 = std::abs(e) < kEps ? 1.0 : std::sinh(e) / e;
    const TemmeGammas g = temme_gammas(mu);

    double ff = fact * (g.gam1 * std::cosh(e) + g.gam2 * fact2 * d);
    double sum = ff;
    e = std::exp(e);
    double p = 0.5 * e / g.gampl;
    double q = 0.5 / (e * g.gammi);
    double c = 1.0;
    d = x2 * x2;
    double sum1 = p;
    for (int i = 1; i <= kMaxIterations; ++i) {
      const double di = static_cast<double>(i);
      ff = (di * ff + p + q) / (di * di - mu2);
      c *= d / di;
      p /= di - mu;
      q /= di + mu;
      const double del = c * ff;
      sum += del;
      sum1 += c * (p - di * ff);
      if (std::abs(del) < std::abs(sum) * kEps)
        return {sum, sum1 * 2.0 * xi};
    }
    throw NumericalError("bessel_k: series failed to converge");
  }

  double b = 2.0 * (1.0 + x);
  double d = 1.0 / b;
  double h = d;
  double delh = d;
  double q1 = 0.0;
  double q2 = 1.0;
  const double a1 = 0.25 - mu2;
  double q = a1;
  double c = a1;
  double a = -a1;
  double s = 1.0 + q * delh;
  for (int i = 2; i <= kMaxIterations; ++i) {
    const double di = static_cast<double>(i);
    a -= 2.0 * (di - 1.0);
    c = -a * c / di;
    const double qnew = (q1 - b * q2) / a;
    q1 = q2;
    q2 = qnew;
    q += c * qnew;
    b += 2.0;
    d = 1.0 / (b + a * d);
    delh = (b * d - 1.0) * delh;
    h += delh;
    const double dels = q * delh;
    s += dels;
    if (std::abs(dels / s) < kEps) {
      h *= a1;
      const double kmu = std::sqrt(pi / (2.0 * x)) * std::exp(-x) / s;
      return {kmu, kmu * (mu + x + 0.5 - h) * xi};
    }
  }
  throw NumericalError("bessel_k: continued fraction failed to converge");
}

} // namespace

double bessel_k(double nu, double x)
{
  if (!std::isfinite(nu) || !std::isfinite(x) || nu < 0.0 || x <= 0.0)
    throw InputError("bessel_k: requires finite nu >= 0 and x > 0 (nu=" + std::to_string(nu) +
                     ", x=" + std::to_string(x) + ")");

  const int steps = static_cast<int>(nu + 0.5);
  const double mu = nu - steps;
  auto [kmu, k1] = bessel_k_pair(mu, x);
  const double two_over_x = 2.0 / x;
  for (int i = 1; i <= steps; ++i) {
    const double next = (mu + i) * two_over_x * k1 + kmu;
    kmu = k1;
    k1 = next;
  }
  return kmu;
}

} // namespace locinfer
