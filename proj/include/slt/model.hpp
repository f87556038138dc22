#pragma once

#include <optional>
#include <string>
#include <vector>

namespace slt {

/// Finite metric state space with invariant law and covering-class
/// parameters (beta, phi).
struct StateSpace {
  std::vector<std::string> states;
  std::vector<std::vector<double>> metric;  // d(x,y), symmetric, zero diagonal
  std::vector<double> pi;
  double beta = 0.0;
  double phi = 1.0;

  std::size_t size() const { return states.size(); }
};

/// Validated transition model: density p(x,y) w.r.t. pi, initial
/// density nu, and the regeneration decomposition p = q + (1-q) mu.
struct TransitionModel {
  StateSpace space;
  std::vector<std::vector<double>> density;  // p(x,y)
  std::vector<double> nu;
  double epsilon = 0.0;  // max(sup|p-1|, sup|nu-1|)
  double q = 1.0;        // 1 - epsilon
  double alpha = 1.0;    // inf p(x,y)
  std::vector<std::vector<double>> mu;
  double kappa = 0.0;  // Hoelder constant for exponent gamma
  double gamma = 1.0;

  std::size_t size() const { return space.size(); }
};

/// Build the discrete metric 1{x != y}.
std::vector<std::vector<double>> discrete_metric(std::size_t n);

/// Unique stationary vector of a row-stochastic matrix (dense solve).
/// Throws if the matrix is not irreducible enough for a unique
/// strictly positive solution.
std::vector<double> stationary_distribution(
    const std::vector<std::vector<double>>& P, double tol = 1e-10);

/// Validate a row-stochastic matrix and derive the full model.
/// pi defaults to the computed stationary vector, nu to the constant 1.
TransitionModel validate_model(
    const std::vector<std::vector<double>>& stochastic_matrix,
    std::optional<std::vector<double>> pi = std::nullopt,
    std::optional<std::vector<double>> nu = std::nullopt, double gamma = 1.0,
    std::vector<std::vector<double>> metric = {}, double beta = 0.0,
    std::optional<double> phi = std::nullopt,
    std::vector<std::string> names = {});

/// Greedy ball-cover feasibility of (beta, phi) for each radius r:
/// cover count must be <= phi * r^{-beta}.
bool covering_check(const StateSpace& space, const std::vector<double>& radii);

/// Minimal kappa with |p(x,z)-p(x,z')| <= kappa d^gamma(z,z') everywhere.
double holder_constant(const TransitionModel& model);

/// Convenience: symmetric two-state chain with the given stay
/// probability, pi = (1/2, 1/2).
TransitionModel two_state_model(double stay, double gamma = 1.0);

}  // namespace slt
