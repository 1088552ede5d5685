#pragma once

#include <string>
#include <vector>

#include "gcruin/measures.hpp"

namespace gcruin {

enum class AlgebraKind { classical, symmetric, alpha_stable, max, kendall, kingman, kendall_type };

/// One generalized convolution: its kind, parameters and the auxiliary laws
/// its point-mass rule needs.
class ConvolutionAlgebra {
 public:
  static ConvolutionAlgebra classical();
  static ConvolutionAlgebra symmetric();
  static ConvolutionAlgebra alpha_stable(double alpha);
  static ConvolutionAlgebra max();
  static ConvolutionAlgebra kendall(double alpha);
  /// s > -1/2.
  static ConvolutionAlgebra kingman(double s);
  /// p >= 2 and c = 1/(p - 1); validates that both auxiliary laws have unit mass.
  static ConvolutionAlgebra kendall_type(double c, double p);
  static ConvolutionAlgebra kendall_type(double p);

  AlgebraKind kind() const { return kind_; }
  /// alpha for alpha_stable and kendall; 1 for every other kind.
  double alpha() const { return alpha_; }
  double s() const { return s_; }
  double c() const { return c_; }
  double p() const { return p_; }
  std::string name() const;

  /// Pareto-type laws of the kendall_type point rule (null otherwise).
  const LawPtr& lambda1() const { return lambda1_; }
  const LawPtr& lambda2() const { return lambda2_; }

 private:
  explicit ConvolutionAlgebra(AlgebraKind k) : kind_(k) {}
  AlgebraKind kind_;
  double alpha_ = 1.0;
  double s_ = 0.0;
  double c_ = 0.0;
  double p_ = 0.0;
  LawPtr lambda1_, lambda2_;
};

std::string to_string(AlgebraKind k);

/// Omega(t); Omega(0) = 1 for every kind.
double kernel(const ConvolutionAlgebra& alg, double t);

/// The law delta_x <> delta_y.
Distribution convolve_points(const ConvolutionAlgebra& alg, double x, double y);

/// Law of a X; a = 0 gives delta_0.
Distribution dilate(const Distribution& d, double a);

/// Phi_d(t) = int Omega(x t) d(dx).
double char_fn(const ConvolutionAlgebra& alg, const Distribution& d, double t);

namespace laws {

/// Law of sqrt(1 + r^2 + 2 r theta) with theta of density ~ (1 - theta^2)^{s - 1/2}.
LawPtr kingman_radial(double r, double s);
/// Continuous parts of delta_x <> delta_1 for the kendall_type algebra, c = 1/(p - 1).
LawPtr kendall_type_lambda1(double p);
LawPtr kendall_type_lambda2(double p);

}  // namespace laws

}  // namespace gcruin
