// SPDX-License-Identifier: Apache-2.0
//
// ddfb: limited-feedback sparse channel estimation for massive MIMO
// Copyright (C) 2026 The ddfb authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------
#include "ddfb/dictionary.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace ddfb {

namespace {

constexpr double kLn10 = 2.30258509299404568402;

// Constants of the closed form; amplitude gain at boresight, floor level,
// and the Gaussian rate k = sqrt(0.6 ln 10) / phi_3db.
struct ThreeGppShape {
  double peak;
  double floor;
  double rate;
  double knee;

  explicit ThreeGppShape(const ThreeGppPattern& p)
      : peak(std::pow(10.0, p.max_gain_dbi / 20.0)),
        floor(std::pow(10.0, (p.max_gain_dbi - p.front_back_db) / 20.0)),
        rate(std::sqrt(0.6 * kLn10) / p.phi_3db),
        knee(p.knee()) {}

  // Integral of the parabolic region from 0 to |phi|.
  double half_bell(double abs_phi) const {
    return peak * std::sqrt(kPi) / (2.0 * rate) * std::erf(rate * abs_phi);
  }
  double y_minus(double a) const { return (-knee - a) * floor; }
  double y_zero(double a) const { return y_minus(a) + half_bell(knee); }
  double y_plus(double a) const { return y_zero(a) + half_bell(knee); }
};

bool closed_form_applies(const ThreeGppPattern& p, double a, double b) {
  const double k = p.knee();
  return a <= -k && b >= k;
}

double cumulative_3gpp_unchecked(double phi, const ThreeGppShape& s, double a) {
  if (phi < -s.knee) return (phi - a) * s.floor;
  if (phi < s.knee) {
    const double sgn = phi >= 0.0 ? 1.0 : -1.0;
    return s.y_minus(a) + s.half_bell(s.knee) + sgn * s.half_bell(std::abs(phi));
  }
  return s.y_plus(a) + (phi - s.knee) * s.floor;
}

double inverse_cumulative_3gpp_unchecked(double y, const ThreeGppShape& s, double a) {
  const double ym = s.y_minus(a);
  const double y0 = s.y_zero(a);
  const double yp = s.y_plus(a);
  const double scale = 2.0 * s.rate / (std::sqrt(kPi) * s.peak);
  if (y < ym) return y / s.floor + a;
  if (y < y0) return -erfinv(std::min(scale * (y0 - y), std::nextafter(1.0, 0.0))) / s.rate;
  if (y < yp) return erfinv(std::min(scale * (y - y0), std::nextafter(1.0, 0.0))) / s.rate;
  return s.knee + (y - yp) / s.floor;
}

void check_interval(double a, double b) {
  if (!(a < b)) throw std::invalid_argument("angle interval must satisfy a < b");
}

}  // namespace

AngleDictionary uniform_grid(double a, double b, int n) {
  check_interval(a, b);
  if (n < 1) throw std::invalid_argument("uniform_grid: n must be >= 1");
  AngleDictionary d;
  d.construction = GridConstruction::Uniform;
  d.lower = a;
  d.upper = b;
  d.angles.resize(static_cast<std::size_t>(n));
  for (int j = 1; j <= n; ++j) d.angles[static_cast<std::size_t>(j - 1)] = a + j * (b - a) / (n + 1);
  return d;
}

double cumulative_3gpp(double phi, const ThreeGppPattern& pattern, double a, double b) {
  check_interval(a, b);
  if (!closed_form_applies(pattern, a, b))
    throw std::domain_error("cumulative_3gpp: interval must contain [-knee, knee]");
  if (!(phi >= a && phi < b)) throw std::domain_error("cumulative_3gpp: phi outside [a, b)");
  return cumulative_3gpp_unchecked(phi, ThreeGppShape(pattern), a);
}

double inverse_cumulative_3gpp(double y, const ThreeGppPattern& pattern, double a, double b) {
  check_interval(a, b);
  if (!closed_form_applies(pattern, a, b))
    throw std::domain_error("inverse_cumulative_3gpp: interval must contain [-knee, knee]");
  const ThreeGppShape s(pattern);
  const double total = cumulative_3gpp_unchecked(b, s, a);
  if (!(y >= 0.0 && y < total)) throw std::domain_error("inverse_cumulative_3gpp: y outside [0, G(b))");
  return inverse_cumulative_3gpp_unchecked(y, s, a);
}

PatternCumulative::PatternCumulative(DirectivityPattern pattern, double a, double b)
    : pattern_(std::move(pattern)), a_(a), b_(b) {
  check_interval(a, b);
  validate(pattern_);
  if (const auto* p = std::get_if<ThreeGppPattern>(&pattern_)) closed_form_ = closed_form_applies(*p, a, b);
  total_ = closed_form_ ? cumulative_3gpp_unchecked(b_, ThreeGppShape(std::get<ThreeGppPattern>(pattern_)), a_)
                       : integrate(a_, b_);
}

double PatternCumulative::integrate(double lo, double hi) const {
  if (hi <= lo) return 0.0;
  auto f = [this](double x) { return directivity(pattern_, x); };
  double err = 0.0;
  // Split at the knees so the integrand is smooth on every piece.
  std::vector<double> cuts{lo};
  if (const auto* p = std::get_if<ThreeGppPattern>(&pattern_)) {
    for (double k : {-p->knee(), 0.0, p->knee()})
      if (k > lo && k < hi) cuts.push_back(k);
  }
  cuts.push_back(hi);
  double sum = 0.0;
  // Each piece is smooth, so a few bisections reach machine precision; deeper
  // recursion only chases the estimator's rounding floor on short pieces.
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i)
    sum += boost::math::quadrature::gauss_kronrod<double, 31>::integrate(f, cuts[i], cuts[i + 1], 5, 1e-13, &err);
  return sum;
}

double PatternCumulative::operator()(double phi) const {
  if (!(phi >= a_ && phi <= b_)) throw std::domain_error("PatternCumulative: phi outside [a, b]");
  if (closed_form_) return cumulative_3gpp_unchecked(phi, ThreeGppShape(std::get<ThreeGppPattern>(pattern_)), a_);
  return integrate(a_, phi);
}

double PatternCumulative::inverse(double y) const {
  if (!(y >= 0.0 && y <= total_)) throw std::domain_error("PatternCumulative: y outside [0, G(b)]");
  if (closed_form_)
    return inverse_cumulative_3gpp_unchecked(y, ThreeGppShape(std::get<ThreeGppPattern>(pattern_)), a_);
  // Newton on G(x) - y (G' is the pattern itself), falling back to bisection
  // whenever the step leaves the bracket.
  double lo = a_;
  double hi = b_;
  double x = a_ + (b_ - a_) * (total_ > 0.0 ? y / total_ : 0.5);
  for (int it = 0; it < 200 && hi - lo > 1e-12; ++it) {
    const double r = integrate(a_, x) - y;
    if (r == 0.0) return x;
    (r < 0.0 ? lo : hi) = x;
    const double d = directivity(pattern_, x);
    const double step = d > 0.0 ? r / d : 0.0;
    if (d > 0.0 && std::abs(step) <= 4.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(x)))
      return x - step;
    const double next = x - step;
    if (d > 0.0 && next > lo && next < hi) {
      x = next;
    } else {
      x = 0.5 * (lo + hi);
    }
  }
  return x;
}

AngleDictionary companded_grid(const DirectivityPattern& pattern, double a, double b, int n) {
  check_interval(a, b);
  if (n < 1) throw std::invalid_argument("companded_grid: n must be >= 1");
  constexpr int kProbes = 1000;
  for (int i = 0; i < kProbes; ++i) {
    const double phi = a + (b - a) * i / kProbes;
    if (!(directivity(pattern, phi) > 0.0))
      throw std::invalid_argument("companded_grid: pattern must be positive on [a, b)");
  }
  const PatternCumulative cum(pattern, a, b);
  AngleDictionary d;
  d.construction = GridConstruction::Companded;
  d.lower = a;
  d.upper = b;
  d.angles.reserve(static_cast<std::size_t>(n));
  for (int j = 1; j <= n; ++j) d.angles.push_back(cum.inverse(j * cum.total() / (n + 1)));
  return d;
}

std::pair<ComplexMatrix, ComplexMatrix> build_dictionary_matrices(const AngleDictionary& dict_tx,
                                                                  const AngleDictionary& dict_rx,
                                                                  const Antenna& tx, const Antenna& rx) {
  auto build = [](const AngleDictionary& dict, const Antenna& ant) {
    ComplexMatrix a(ant.array.num_elements, dict.size());
    for (Index k = 0; k < dict.size(); ++k) {
      const double phi = dict.angles[static_cast<std::size_t>(k)];
      a.col(k) = directivity(ant.pattern, phi) * steering_vector(ant.array, phi);
    }
    return a;
  };
  return {build(dict_tx, tx), build(dict_rx, rx)};
}

ComplexMatrix build_sensing(const ComplexMatrix& s, const ComplexMatrix& a_tx, const ComplexMatrix& a_rx) {
  if (s.rows() != a_tx.rows()) throw std::invalid_argument("build_sensing: S and A_T not conformable");
  const ComplexMatrix left = s.transpose() * a_tx.conjugate();
  return kron(left, a_rx);
}

ComplexVector dft_column(Index n, Index k) {
  ComplexVector col(n);
  const double scale = 1.0 / std::sqrt(static_cast<double>(n));
  for (Index i = 0; i < n; ++i) {
    // Reduce the product modulo n before scaling to keep the phase exact.
    const Index r = (i * k) % n;
    col(i) = std::polar(scale, -2.0 * kPi * static_cast<double>(r) / static_cast<double>(n));
  }
  return col;
}

ComplexMatrix build_compression(Index n, Index n_fb, Rng& rng) {
  if (n_fb < 1 || n_fb > n) throw std::invalid_argument("build_compression: need 1 <= N_fb <= M_R N_tr");
  std::vector<Index> idx(static_cast<std::size_t>(n));
  std::iota(idx.begin(), idx.end(), Index{0});
  // Partial Fisher-Yates with an explicit uniform draw per step.
  for (Index i = 0; i < n_fb; ++i) {
    std::uniform_int_distribution<Index> pick(i, n - 1);
    std::swap(idx[static_cast<std::size_t>(i)], idx[static_cast<std::size_t>(pick(rng))]);
  }
  idx.resize(static_cast<std::size_t>(n_fb));
  std::sort(idx.begin(), idx.end());
  return build_compression(n, idx);
}

ComplexMatrix build_compression(Index n, const std::vector<Index>& columns) {
  if (columns.empty() || static_cast<Index>(columns.size()) > n)
    throw std::invalid_argument("build_compression: need 1 <= N_fb <= M_R N_tr");
  std::vector<Index> sorted = columns;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end() || sorted.front() < 0 ||
      sorted.back() >= n)
    throw std::invalid_argument("build_compression: column selection must be distinct and in range");
  ComplexMatrix p(n, static_cast<Index>(columns.size()));
  for (std::size_t j = 0; j < columns.size(); ++j) p.col(static_cast<Index>(j)) = dft_column(n, columns[j]);
  return p;
}

RealMatrix build_real_stacked(const ComplexMatrix& q, const ComplexMatrix& p) {
  if (q.rows() != p.rows()) throw std::invalid_argument("build_real_stacked: Q and P not conformable");
  const ComplexMatrix qp = q.adjoint() * p;  // G x N_fb
  const Index g = qp.rows();
  const Index nfb = qp.cols();
  RealMatrix c(2 * g, 2 * nfb);
  c.topLeftCorner(g, nfb) = qp.real();
  c.bottomLeftCorner(g, nfb) = qp.imag();
  c.topRightCorner(g, nfb) = -qp.imag();
  c.bottomRightCorner(g, nfb) = qp.real();
  return c;
}

IndexList stacked_support(const IndexList& support_g, Index dictionary_size) {
  IndexList out;
  out.reserve(2 * support_g.size());
  for (Index s : support_g) out.push_back(s);
  for (Index s : support_g) out.push_back(dictionary_size + s);
  std::sort(out.begin(), out.end());
  return out;
}

RealMatrix real_stacked_rows(const ComplexMatrix& q, const ComplexMatrix& p, const IndexList& support_g) {
  if (q.rows() != p.rows()) throw std::invalid_argument("real_stacked_rows: Q and P not conformable");
  IndexList sorted = support_g;
  std::sort(sorted.begin(), sorted.end());
  const Index k = static_cast<Index>(sorted.size());
  const Index nfb = p.cols();
  RealMatrix c(2 * k, 2 * nfb);
  for (Index i = 0; i < k; ++i) {
    const Index col = sorted[static_cast<std::size_t>(i)];
    if (col < 0 || col >= q.cols()) throw std::invalid_argument("real_stacked_rows: index out of range");
    const Eigen::RowVectorXcd row = q.col(col).adjoint() * p;
    c.row(i).head(nfb) = row.real();
    c.row(i).tail(nfb) = -row.imag();
    c.row(k + i).head(nfb) = row.imag();
    c.row(k + i).tail(nfb) = row.real();
  }
  return c;
}

}  // namespace ddfb
