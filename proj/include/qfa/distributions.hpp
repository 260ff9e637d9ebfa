#pragma once

#include <limits>
#include <memory>
#include <string>

namespace qfa {

enum class Family { hyperbolic, vg, gig, stable };
enum class Side { left, right };

std::string family_name(Family f);
Family family_from_name(const std::string& s);

// Hyp(alpha, beta, delta, mu) stored through alpha1 = delta*alpha, beta1 = delta*beta.
struct HypParams {
  double alpha1 = 1.0, beta1 = 0.0, delta = 1.0, mu = 0.0;

  static HypParams from_standard(double alpha, double beta, double delta, double mu);
  double gamma1() const;
  double n0() const;  // 2 alpha1 K_1(gamma1) / gamma1
  void validate() const;
};

struct VGParams {
  double lambda = 1.0, alpha = 1.0, beta = 0.0, mu = 0.0;

  double gamma() const;  // sqrt(alpha^2 - beta^2)
  void validate() const;
};

struct GIGParams {
  double lambda = 1.0, eta = 1.0, omega = 1.0;
  void validate() const;
};

enum class StableParametrization { P1, P2 };

struct StableParams {
  double alpha = 2.0, beta2 = 0.0, mu2 = 0.0, sigma2 = 1.0;
  StableParametrization tag = StableParametrization::P2;

  double k_alpha() const;  // alpha - 1 + sgn(1 - alpha)
  void validate() const;
};

// Continuous univariate distribution with an exact density and a
// quadrature-based CDF anchored at the mode.
class Distribution {
 public:
  virtual ~Distribution() = default;

  virtual Family family() const = 0;
  virtual double pdf(double x) const = 0;
  // F(x) and 1 - F(x); each accurate in its own tail.
  virtual double cdf(double x) const;
  virtual double sf(double x) const;
  virtual double mode() const = 0;
  virtual double support_lo() const { return -std::numeric_limits<double>::infinity(); }
  // Characteristic width used to scale quadrature and bracketing.
  virtual double width() const = 0;
  // Leading-order tail estimate of Q(u), used to seed the bracket.
  virtual double tail_guess(double u) const;

  // Root-finding quantile: bracket then safeguarded Newton.
  double quantile(double u) const;
  // kappa_Q(u) = u / (f(Q(u)) |Q(u)|); throws ParameterError when Q(u) = 0
  // (|Q(u)| below 1e-12 widths).
  double condition_number(double u) const;

 protected:
  double lower_mass(double x) const;  // int_{lo}^{x} f
  double upper_mass(double x) const;  // int_x^inf f
};

class Hyperbolic final : public Distribution {
 public:
  explicit Hyperbolic(const HypParams& p);
  const HypParams& params() const { return p_; }

  Family family() const override { return Family::hyperbolic; }
  double pdf(double x) const override;
  double mode() const override;
  double width() const override;
  double tail_guess(double u) const override;

  // Standardized (delta = 1, mu = 0) density.
  double pdf_std(double x) const;

 private:
  HypParams p_;
  double log_norm_;  // ln(gamma1 / (2 alpha1 K_1(gamma1)))
};

class VarianceGamma final : public Distribution {
 public:
  explicit VarianceGamma(const VGParams& p);
  const VGParams& params() const { return p_; }

  Family family() const override { return Family::vg; }
  // Returns +inf at x = mu when lambda <= 1/2.
  double pdf(double x) const override;
  double cdf(double x) const override;
  double sf(double x) const override;
  double mode() const override;
  double width() const override;
  double tail_guess(double u) const override;

  double log_n0() const { return log_n0_; }  // ln((2a)^{l-1/2} sqrt(pi) Gamma(l) / gamma^{2l})

 private:
  VGParams p_;
  double log_n0_;
  double mode_;
  double p_minus_;  // F(mu)
};

class GIG final : public Distribution {
 public:
  explicit GIG(const GIGParams& p);
  const GIGParams& params() const { return p_; }

  Family family() const override { return Family::gig; }
  double pdf(double x) const override;
  double mode() const override;
  double support_lo() const override { return 0.0; }
  double width() const override;
  double tail_guess(double u) const override;

  double log_kl() const { return log_kl_; }  // ln K_lambda(omega)

 private:
  GIGParams p_;
  double log_kl_;
};

class StableCdfSeries;

class Stable final : public Distribution {
 public:
  explicit Stable(const StableParams& p);
  ~Stable() override;
  const StableParams& params() const { return p_; }  // always P2

  Family family() const override { return Family::stable; }
  double pdf(double x) const override;
  double cdf(double x) const override;
  double sf(double x) const override;
  double mode() const override;
  double width() const override;
  double tail_guess(double u) const override;

  // Standard form (mu2 = 0, sigma2 = 1).
  double cdf_std(double x) const;
  double pdf_std(double x) const;
  double scale() const;     // sigma2^{1/alpha}
  double location() const;  // mu2 sigma2

 private:
  StableParams p_;
  std::unique_ptr<StableCdfSeries> pos_, neg_;  // beta2 and -beta2
  double mode_;
};

std::unique_ptr<Distribution> make_distribution(const HypParams& p);
std::unique_ptr<Distribution> make_distribution(const VGParams& p);
std::unique_ptr<Distribution> make_distribution(const GIGParams& p);
std::unique_ptr<Distribution> make_distribution(const StableParams& p);

// Maximizer of pdf on [a, b] by golden-section search on ln pdf.
double argmax_pdf(const Distribution& d, double a, double b);

}  // namespace qfa
