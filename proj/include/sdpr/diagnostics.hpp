#pragma once

#include "sdpr/linalg.hpp"
#include "sdpr/problem.hpp"
#include "sdpr/recovery.hpp"

#include <optional>
#include <vector>

namespace sdpr {

struct QualityReport {
  double primal_objective = 0.0;     // tr(C X)
  double g_alpha = 0.0;              // penalized dual value at y
  double primal_subopt_bound = 0.0;  // tr(C X) + g_alpha(y)
  double primal_infeas = 0.0;        // ||A(X) - b||
  double dual_infeas = 0.0;          // (-lambda_min(Z(y)))_+
  double dimacs_feas = 0.0;
  double dimacs_gap = 0.0;
  std::optional<double> distance_bound;
};

double dimacs_feasibility(double residual_norm, double b_norm);
double dimacs_gap(double primal_objective, double g_alpha);

// Everything is recomputed from the factors: tr(C V S V') with r cost calls
// and A(V S V') with r rank-one forward calls. lambda_min is the smallest
// eigenvalue of Z(y), as returned by eval_penalized.
QualityReport quality(const SdpProblem& problem, const CompressedSolution& solution,
                      const Vector& y, double alpha, double lambda_min);

struct SigmaMin {
  double value = 0.0;
  bool structural_zero = false;  // r(r+1)/2 > m
};

SigmaMin sigma_min_AV(const CompressedOperators& ops);

struct ConditioningReport {
  double T = 0.0;
  double sigma_min_AV = 0.0;
  double sigma_max_A = 0.0;
  double kappa_V = 0.0;
  bool kappa_infinite = false;
  bool clustered = false;
};

ConditioningReport conditioning(const CompressedOperators& ops, double sigma_max_A);

// Upper bound on ||X_star||_op from a MinFeas point S with residual delta_S:
// the largest x solving x - ||S||_op <= (1 + kappa)(eps/T + sqrt(2 x eps/T))
// + delta_S / sigma_min. Returns nullopt when T <= 0 or sigma_min <= 0.
std::optional<double> bound_B(double eps, double T, double kappa_V, double S_op, double delta_S,
                              double sigma_min_AV);

struct DistanceBound {
  std::optional<double> value;  // empty when ill-posed
  bool ill_posed = false;
  double B = 0.0;
};

// (1 + kappa_V)(eps/T + sqrt(2 (eps/T) B)). When B is not supplied it comes
// from bound_B with S_op and delta_S.
DistanceBound distance_bound_minfeas(double eps, double T, double kappa_V,
                                     std::optional<double> B, double S_op, double delta_S,
                                     double sigma_min_AV);

enum class DeltaConstant {
  Theorem,   // sigma_max (eps/T + sqrt(2 eps B / T))
  Appendix,  // sigma_max (eps/T + 2 sqrt(2 eps B / T))
};

struct MinObjParameters {
  double delta0 = 0.0;
  double eps0 = 0.0;
  bool ill_posed = false;
};

MinObjParameters minobj_parameters(double eps, double T, double B, double sigma_max_A,
                                   Eigen::Index r, double C_fro, double C_op,
                                   DeltaConstant constant = DeltaConstant::Appendix);

struct RegularityReport {
  double strong_duality_gap = 0.0;        // tr(C X*) - b'y*
  double complementarity_residual = 0.0;  // ||X* Z(y*)||_F
  int rank_X = 0;
  int rank_Z = 0;
  int rank_sum = 0;
  Eigen::Index n = 0;
  bool strictly_complementary = false;
  // sigma_min of A restricted to matrices supported on null(Z(y*)).
  double sigma_min_primal_face = 0.0;
  bool primal_unique = false;
  // sigma_min of the map in the quadratic growth inequality.
  double sigma_min_D = 0.0;
  bool dual_unique = false;
};

// Dense, n <= 50. Numerical ranks use the relative threshold rank_tol.
RegularityReport regularity_probe(const SdpProblem& problem, const Matrix& X_star,
                                  const Vector& y_star, double rank_tol = 1e-7);

// Dense matrix of (Z, y) -> (Z - U U' Z U U', Z + A'y) in svec coordinates.
Matrix growth_operator(const SdpProblem& problem, const Matrix& U);

struct GrowthSample {
  bool skipped = false;  // y infeasible
  double lhs = 0.0;
  double rhs = 0.0;
  bool holds = false;
};

struct GrowthReport {
  double sigma_min_D = 0.0;
  double lambda_min_pos_X = 0.0;
  std::vector<GrowthSample> samples;
  int violations = 0;
  int skipped = 0;
};

// Checks the quadratic growth inequality for each sample y, n <= 10.
// Samples with lambda_min(Z(y)) < -feas_tol are skipped.
GrowthReport quadratic_growth_check(const SdpProblem& problem, const Matrix& X_star,
                                    const Vector& y_star, const std::vector<Vector>& samples,
                                    double rank_tol = 1e-7, double feas_tol = 1e-12);

}  // namespace sdpr
