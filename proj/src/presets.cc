#include "nashlq/presets.h"

namespace nashlq {

GameSpec PaperExperiment::Game() const {
  return GameSpec::Create(a, rho, k_upper);
}

const PaperExperiment& PaperPreset() {
  static const PaperExperiment preset = [] {
    PaperExperiment p;
    p.a.resize(5, 5);
    p.a << -0.0342, -0.0111, 0.0095, -0.0012, 0.0118,  //
        -0.0111, -0.0627, 0.0098, 0.0155, 0.0254,      //
        0.0095, 0.0098, -0.0341, -0.0065, -0.0081,     //
        -0.0012, 0.0155, -0.0065, -0.0323, -0.0081,    //
        0.0118, 0.0254, -0.0081, -0.0081, -0.1086;
    p.rho.resize(5);
    p.rho << 0.5542, 0.2642, 0.4526, 0.0664, 0.7990;
    p.round1_k0.resize(5);
    p.round1_k0 << 0.69, 4.41, 3.69, 2.39, 4.24;
    p.round2_k0.resize(5);
    p.round2_k0 << 1.15, 0.53, 2.82, 1.59, 0.54;
    p.round1_final.resize(5);
    p.round1_final << 1.31, 1.89, 1.46, 3.85, 1.03;
    p.round2_final.resize(5);
    p.round2_final << 1.29, 1.88, 1.49, 3.85, 1.03;
    p.k_upper = Eigen::VectorXd::Constant(5, 10.0);
    return p;
  }();
  return preset;
}

GameSpec ScalarPreset() {
  return GameSpec::Create(Eigen::MatrixXd::Constant(1, 1, -1.0),
                          Eigen::VectorXd::Ones(1),
                          Eigen::VectorXd::Constant(1, 10.0));
}

GameSpec DiagonalPreset() {
  Eigen::VectorXd rho(3);
  rho << 0.5, 1.0, 2.0;
  return GameSpec::Create(Eigen::Vector3d(-1.0, -2.0, -3.0).asDiagonal(), rho,
                          Eigen::VectorXd::Constant(3, 10.0));
}

GameSpec TwoPlayerPreset() {
  Eigen::MatrixXd a(2, 2);
  a << -2.0, -0.5, -0.5, -2.0;
  return GameSpec::Create(a, Eigen::VectorXd::Zero(2),
                          Eigen::VectorXd::Constant(2, 20.0));
}

}  // namespace nashlq
