#pragma once

#include <cmath>
#include <stdexcept>
#include <vector>

namespace ctop {

// Rating state for one player: rating/deviation live on the familiar
// 1500-centred scale, volatility captures how erratic past results were.
struct Glicko2State {
  double rating = 1500.0;
  double deviation = 350.0;
  double volatility = 0.06;
};

// One game from the player's perspective. Fractional scores are allowed so
// callers can fold tie-breaking bonuses into the result.
struct GameResult {
  double opponent_rating = 1500.0;
  double opponent_deviation = 350.0;
  double score = 0.5;  // 1 win, 0.5 draw, 0 loss
};

namespace glicko_detail {

constexpr double kScale = 173.7178;

inline double g(double phi) {
  constexpr double pi = 3.14159265358979323846;
  return 1.0 / std::sqrt(1.0 + 3.0 * phi * phi / (pi * pi));
}

inline double expected_score(double mu, double mu_j, double phi_j) {
  return 1.0 / (1.0 + std::exp(-g(phi_j) * (mu - mu_j)));
}

inline double volatility_f(double x, double delta_sq, double phi_sq, double v,
                           double a, double tau) {
  const double ex = std::exp(x);
  const double num = ex * (delta_sq - phi_sq - v - ex);
  const double den = 2.0 * (phi_sq + v + ex) * (phi_sq + v + ex);
  return num / den - (x - a) / (tau * tau);
}

inline double update_volatility(double sigma, double delta_sq, double phi_sq,
                                double v, double tau, double tol) {
  const double a = std::log(sigma * sigma);
  double big_a = a;
  double big_b;
  if (delta_sq > phi_sq + v) {
    big_b = std::log(delta_sq - phi_sq - v);
  } else {
    double k = 1.0;
    while (volatility_f(a - k * tau, delta_sq, phi_sq, v, a, tau) < 0.0) {
      k += 1.0;
    }
    big_b = a - k * tau;
  }
  double f_a = volatility_f(big_a, delta_sq, phi_sq, v, a, tau);
  double f_b = volatility_f(big_b, delta_sq, phi_sq, v, a, tau);
  int guard = 0;
  while (std::abs(big_b - big_a) > tol) {
    if (++guard > 1000) {
      throw std::runtime_error("volatility iteration failed to converge");
    }
    const double big_c = big_a + (big_a - big_b) * f_a / (f_b - f_a);
    const double f_c = volatility_f(big_c, delta_sq, phi_sq, v, a, tau);
    if (f_c * f_b <= 0.0) {
      big_a = big_b;
      f_a = f_b;
    } else {
      f_a /= 2.0;
    }
    big_b = big_c;
    f_b = f_c;
  }
  return std::exp(big_a / 2.0);
}

}  // namespace glicko_detail

// Applies one rating period. With no games the deviation grows by the
// volatility and nothing else changes.
inline Glicko2State glicko2_update(const Glicko2State& player,
                                   const std::vector<GameResult>& games,
                                   double tau = 0.5, double tol = 1e-6) {
  using namespace glicko_detail;
  if (!(player.deviation > 0.0) || !(player.volatility > 0.0)) {
    throw std::invalid_argument("rating state needs positive deviation and volatility");
  }
  if (!(tau > 0.0) || !(tol > 0.0)) {
    throw std::invalid_argument("tau and tolerance must be positive");
  }
  for (const GameResult& game : games) {
    if (!(game.opponent_deviation > 0.0)) {
      throw std::invalid_argument("opponent deviation must be positive");
    }
    if (!(game.score >= 0.0) || !(game.score <= 1.0)) {
      throw std::invalid_argument("game score must lie in [0, 1]");
    }
  }

  const double mu = (player.rating - 1500.0) / kScale;
  const double phi = player.deviation / kScale;

  if (games.empty()) {
    const double phi_star =
        std::sqrt(phi * phi + player.volatility * player.volatility);
    return {player.rating, phi_star * kScale, player.volatility};
  }

  double v_inv = 0.0;
  double delta_sum = 0.0;
  for (const GameResult& game : games) {
    const double mu_j = (game.opponent_rating - 1500.0) / kScale;
    const double phi_j = game.opponent_deviation / kScale;
    const double gj = g(phi_j);
    const double e = expected_score(mu, mu_j, phi_j);
    v_inv += gj * gj * e * (1.0 - e);
    delta_sum += gj * (game.score - e);
  }
  const double v = 1.0 / v_inv;
  const double delta = v * delta_sum;

  const double sigma_prime = update_volatility(
      player.volatility, delta * delta, phi * phi, v, tau, tol);
  const double phi_star = std::sqrt(phi * phi + sigma_prime * sigma_prime);
  const double phi_prime = 1.0 / std::sqrt(1.0 / (phi_star * phi_star) + 1.0 / v);
  const double mu_prime = mu + phi_prime * phi_prime * delta_sum;

  return {mu_prime * kScale + 1500.0, phi_prime * kScale, sigma_prime};
}

}  // namespace ctop
