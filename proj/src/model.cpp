#include "slt/model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace slt {

namespace {

constexpr double kTieTol = 1e-12;
constexpr double kRowTol = 1e-10;

void check_metric(const std::vector<std::vector<double>>& d, std::size_t n) {
  if (d.size() != n) throw std::invalid_argument("metric: wrong dimension");
  for (std::size_t i = 0; i < n; ++i) {
    if (d[i].size() != n) throw std::invalid_argument("metric: ragged matrix");
    if (std::abs(d[i][i]) > kTieTol)
      throw std::invalid_argument("metric: nonzero diagonal");
    for (std::size_t j = 0; j < n; ++j) {
      if (d[i][j] < 0.0) throw std::invalid_argument("metric: negative entry");
      if (std::abs(d[i][j] - d[j][i]) > kTieTol)
        throw std::invalid_argument("metric: not symmetric");
      for (std::size_t k = 0; k < n; ++k)
        if (d[i][j] > d[i][k] + d[k][j] + kTieTol)
          throw std::invalid_argument("metric: triangle inequality violated");
    }
  }
}

}  // namespace

std::vector<std::vector<double>> discrete_metric(std::size_t n) {
  std::vector<std::vector<double>> d(n, std::vector<double>(n, 1.0));
  for (std::size_t i = 0; i < n; ++i) d[i][i] = 0.0;
  return d;
}

std::vector<double> stationary_distribution(
    const std::vector<std::vector<double>>& P, double tol) {
  const std::size_t n = P.size();
  // Solve pi (P - I) = 0 with the normalization sum(pi) = 1: transpose
  // to (P^T - I) pi = 0 and replace the last row by the all-ones row.
  std::vector<std::vector<double>> A(n, std::vector<double>(n + 1, 0.0));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) A[i][j] = P[j][i] - (i == j ? 1.0 : 0.0);
  }
  for (std::size_t j = 0; j < n; ++j) A[n - 1][j] = 1.0;
  A[n - 1][n] = 1.0;

  // Gaussian elimination with partial pivoting.
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = col;
    for (std::size_t r = col + 1; r < n; ++r)
      if (std::abs(A[r][col]) > std::abs(A[piv][col])) piv = r;
    if (std::abs(A[piv][col]) < 1e-14)
      throw std::invalid_argument("stationary: singular system (chain not irreducible?)");
    std::swap(A[col], A[piv]);
    for (std::size_t r = 0; r < n; ++r) {
      if (r == col) continue;
      double f = A[r][col] / A[col][col];
      for (std::size_t c = col; c <= n; ++c) A[r][c] -= f * A[col][c];
    }
  }
  std::vector<double> pi(n);
  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    pi[i] = A[i][n] / A[i][i];
    total += pi[i];
  }
  for (auto& v : pi) v /= total;  // renormalize against roundoff
  for (std::size_t i = 0; i < n; ++i) {
    if (pi[i] <= 0.0)
      throw std::invalid_argument("stationary: pi not strictly positive");
    double row = 0.0;
    for (std::size_t j = 0; j < n; ++j) row += pi[j] * P[j][i];
    if (std::abs(row - pi[i]) > tol)
      throw std::invalid_argument("stationary: pi P != pi beyond tolerance");
  }
  return pi;
}

TransitionModel validate_model(
    const std::vector<std::vector<double>>& stochastic_matrix,
    std::optional<std::vector<double>> pi, std::optional<std::vector<double>> nu,
    double gamma, std::vector<std::vector<double>> metric, double beta,
    std::optional<double> phi, std::vector<std::string> names) {
  const std::size_t n = stochastic_matrix.size();
  if (n == 0) throw std::invalid_argument("empty transition matrix");
  if (gamma <= 0.0 || gamma > 1.0)
    throw std::invalid_argument("gamma must lie in (0,1]");
  for (const auto& row : stochastic_matrix) {
    if (row.size() != n) throw std::invalid_argument("non-square matrix");
    double s = 0.0;
    for (double v : row) {
      if (v < 0.0) throw std::invalid_argument("negative transition probability");
      s += v;
    }
    if (std::abs(s - 1.0) > kRowTol)
      throw std::invalid_argument("non-stochastic row");
  }

  TransitionModel m;
  m.gamma = gamma;
  m.space.states = std::move(names);
  if (m.space.states.empty()) {
    for (std::size_t i = 0; i < n; ++i) m.space.states.push_back(std::to_string(i));
  }
  if (m.space.states.size() != n)
    throw std::invalid_argument("state-name list has wrong length");
  m.space.metric = metric.empty() ? discrete_metric(n) : std::move(metric);
  check_metric(m.space.metric, n);
  m.space.beta = beta;
  m.space.phi = phi.value_or(static_cast<double>(n));
  if (m.space.phi < 1.0) throw std::invalid_argument("phi must be >= 1");
  if (m.space.beta < 0.0) throw std::invalid_argument("beta must be >= 0");

  m.space.pi = pi ? *pi : stationary_distribution(stochastic_matrix);
  if (m.space.pi.size() != n) throw std::invalid_argument("pi has wrong length");
  double psum = 0.0;
  for (double v : m.space.pi) {
    if (v <= 0.0) throw std::invalid_argument("pi not strictly positive");
    psum += v;
  }
  if (std::abs(psum - 1.0) > 1e-12)
    throw std::invalid_argument("pi does not sum to 1");
  if (pi) {
    for (std::size_t j = 0; j < n; ++j) {
      double row = 0.0;
      for (std::size_t i = 0; i < n; ++i)
        row += m.space.pi[i] * stochastic_matrix[i][j];
      if (std::abs(row - m.space.pi[j]) > kRowTol)
        throw std::invalid_argument("supplied pi is not stationary");
    }
  }

  m.nu = nu ? *nu : std::vector<double>(n, 1.0);
  if (m.nu.size() != n) throw std::invalid_argument("nu has wrong length");
  double nusum = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    if (m.nu[j] < 0.0) throw std::invalid_argument("nu has a negative entry");
    nusum += m.nu[j] * m.space.pi[j];
  }
  if (std::abs(nusum - 1.0) > kRowTol)
    throw std::invalid_argument("nu does not integrate to 1 under pi");

  m.density.assign(n, std::vector<double>(n, 0.0));
  double sup_dev = 0.0;
  m.alpha = std::numeric_limits<double>::infinity();
  for (std::size_t x = 0; x < n; ++x) {
    for (std::size_t y = 0; y < n; ++y) {
      m.density[x][y] = stochastic_matrix[x][y] / m.space.pi[y];
      sup_dev = std::max(sup_dev, std::abs(m.density[x][y] - 1.0));
      m.alpha = std::min(m.alpha, m.density[x][y]);
    }
  }
  for (double v : m.nu) sup_dev = std::max(sup_dev, std::abs(v - 1.0));
  // roundoff-level deviation counts as the flat model; otherwise mu
  // would amplify noise through the 1/epsilon factor
  m.epsilon = sup_dev <= 1e-12 ? 0.0 : sup_dev;
  if (m.epsilon >= 1.0)
    throw std::invalid_argument(
        "epsilon >= 1: regeneration decomposition breaks (alpha <= 0)");
  m.q = 1.0 - m.epsilon;

  m.mu.assign(n, std::vector<double>(n, 1.0));
  if (m.epsilon > 0.0) {
    for (std::size_t x = 0; x < n; ++x)
      for (std::size_t y = 0; y < n; ++y)
        m.mu[x][y] = 1.0 + (m.density[x][y] - 1.0) / m.epsilon;
  }
  m.kappa = holder_constant(m);
  return m;
}

bool covering_check(const StateSpace& space, const std::vector<double>& radii) {
  if (radii.empty()) throw std::invalid_argument("covering_check: empty radii");
  const std::size_t n = space.size();
  for (double r : radii) {
    if (r <= 0.0 || r > 1.0)
      throw std::invalid_argument("covering_check: radius outside (0,1]");
    std::vector<bool> covered(n, false);
    std::size_t balls = 0;
    for (std::size_t c = 0; c < n; ++c) {
      if (covered[c]) continue;
      ++balls;
      for (std::size_t y = 0; y < n; ++y)
        if (space.metric[c][y] < r) covered[y] = true;
    }
    if (static_cast<double>(balls) > space.phi * std::pow(r, -space.beta))
      return false;
  }
  return true;
}

double holder_constant(const TransitionModel& model) {
  const std::size_t n = model.size();
  double kappa = 0.0;
  for (std::size_t x = 0; x < n; ++x)
    for (std::size_t z = 0; z < n; ++z)
      for (std::size_t zp = 0; zp < n; ++zp) {
        if (z == zp) continue;
        double d = model.space.metric[z][zp];
        if (d <= 0.0) continue;
        kappa = std::max(kappa, std::abs(model.density[x][z] - model.density[x][zp]) /
                                    std::pow(d, model.gamma));
      }
  return kappa;
}

TransitionModel two_state_model(double stay, double gamma) {
  std::vector<std::vector<double>> P = {{stay, 1.0 - stay}, {1.0 - stay, stay}};
  return validate_model(P, std::vector<double>{0.5, 0.5}, std::nullopt, gamma);
}

}  // namespace slt
