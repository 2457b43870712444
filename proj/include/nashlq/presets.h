#ifndef NASHLQ_PRESETS_H_
#define NASHLQ_PRESETS_H_

#include <Eigen/Dense>

#include "nashlq/game.h"

namespace nashlq {

// The published five-player experiment: state matrix, tradeoffs, the two
// initializations and the reported 250-stage actions.
struct PaperExperiment {
  Eigen::MatrixXd a;
  Eigen::VectorXd rho;
  Eigen::VectorXd round1_k0;
  Eigen::VectorXd round2_k0;
  Eigen::VectorXd round1_final;  // as printed, two decimals
  Eigen::VectorXd round2_final;
  Eigen::VectorXd k_upper;  // large enough never to bind
  int stages = 250;
  int batch_size = 500;
  double horizon = 200.0;

  GameSpec Game() const;
};

const PaperExperiment& PaperPreset();

// a = -1, rho = 1 on [0, 10]; the equilibrium is sqrt(2) - 1.
GameSpec ScalarPreset();

// Three decoupled players, A = diag(-1, -2, -3), rho = (0.5, 1, 2).
GameSpec DiagonalPreset();

// A = [[-2, -0.5], [-0.5, -2]], rho = 0, box [0, 20]^2.
GameSpec TwoPlayerPreset();

}  // namespace nashlq

#endif  // NASHLQ_PRESETS_H_
