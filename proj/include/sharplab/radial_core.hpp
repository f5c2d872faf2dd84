#pragma once

// Radial profiles on R^N, their norms, and the Trudinger-Moser / Adams
// functionals. Everything is parametrized by rho = log r; dilation
// u(x) -> u(lambda x) is then a shift of rho by -log(lambda).

#include <array>
#include <iosfwd>
#include <string>
#include <vector>

namespace sharplab {

enum class Order { First, Second };

struct FunctionalParams {
  int N = 2;
  double beta = 0.0;
  double alpha = 0.0;
  Order order = Order::First;

  /// Throws DomainError unless 0 <= beta < N, alpha >= 0, N >= 2 (3 for Second).
  void validate() const;
};

struct QuadratureOptions {
  int order = 16;                // Gauss-Legendre points per piece
  double split_log_range = 20;   // bisect when max-min of log integrand exceeds this
  int max_depth = 60;
  double rel_tol = 1e-13;        // panel error allowed, relative to the whole integral
};

class RadialGrid {
 public:
  explicit RadialGrid(std::vector<double> rho);

  const std::vector<double>& rho() const { return rho_; }
  std::size_t size() const { return rho_.size(); }
  double r_min() const;
  double r_max() const;
  RadialGrid shifted(double delta) const;

 private:
  std::vector<double> rho_;
};

/// Continuous, piecewise linear in rho between the grid nodes, equal to
/// values[0] on the core ball r <= r_min and zero beyond r_max.
class RadialProfile {
 public:
  RadialProfile(int N, RadialGrid grid, std::vector<double> values);

  int dimension() const { return N_; }
  const RadialGrid& grid() const { return grid_; }
  const std::vector<double>& values() const { return values_; }
  double core_value() const { return values_.front(); }

  double value(double r) const;
  /// Slope du/drho on segment i (between nodes i and i+1).
  double slope(std::size_t i) const;

  /// x -> u(lambda x).
  RadialProfile dilated(double lambda) const;
  RadialProfile scaled(double c) const;
  bool is_zero() const;

 private:
  int N_;
  RadialGrid grid_;
  std::vector<double> values_;
};

/// u(rho) = c[0] + c[1] s + c[2] s^2 + c[3] s^3 with s = rho - rho0.
struct LogPolyPiece {
  double rho0 = 0.0;
  double rho1 = 0.0;
  std::array<double, 4> c{};

  double value(double rho) const;
  double d1(double rho) const;
  double d2(double rho) const;
  bool is_linear() const { return c[2] == 0.0 && c[3] == 0.0; }
};

/// u = c0 - a r^2 on r <= e^{rho_c}. a = 0 gives a flat core.
struct QuadraticCap {
  double c0 = 0.0;
  double a = 0.0;
  double rho_c = 0.0;
};

/// Closed-form profile: a quadratic cap followed by contiguous pieces that are
/// cubic in rho, zero beyond the last piece. Derivatives are exact.
class ParametricProfile {
 public:
  ParametricProfile(int N, std::string family, QuadraticCap cap, std::vector<LogPolyPiece> pieces);

  int dimension() const { return N_; }
  const std::string& family() const { return family_; }
  const QuadraticCap& cap() const { return cap_; }
  const std::vector<LogPolyPiece>& pieces() const { return pieces_; }

  double value(double r) const;
  double derivative(double r) const;
  /// u'' + (N-1) u' / r, branchwise (no singular part at kinks).
  double laplacian(double r) const;
  double support_radius() const;
  /// Whether u' is continuous at every junction (relative tolerance 1e-9).
  bool is_c1() const { return c1_; }

  ParametricProfile dilated(double lambda) const;
  ParametricProfile scaled(double c) const;

 private:
  int N_;
  std::string family_;
  QuadraticCap cap_;
  std::vector<LogPolyPiece> pieces_;
  bool c1_ = false;
};

ParametricProfile to_parametric(const RadialProfile& u);

double lebesgue_norm(const RadialProfile& u, double p, const QuadratureOptions& q = {});
double lebesgue_norm(const ParametricProfile& u, double p, const QuadratureOptions& q = {});
/// Exact: omega * sum |s_i|^N d(rho_i), then the 1/N-th power.
double gradient_norm_N(const RadialProfile& u);
double gradient_norm_N(const ParametricProfile& u, const QuadratureOptions& q = {});
/// (omega int |Delta u|^p r^{N-1} dr)^{1/p}, branchwise.
double laplacian_norm(const ParametricProfile& u, double p, const QuadratureOptions& q = {});

/// log of omega int phi_N(alpha (1 - beta/N) |u|^{N/(N-1)}) r^{N-1-beta} dr.
double log_tm_functional(const RadialProfile& u, const FunctionalParams& fp, const QuadratureOptions& q = {});
double log_tm_functional(const ParametricProfile& u, const FunctionalParams& fp,
                         const QuadratureOptions& q = {});
/// log of omega int phi_{N,2}(alpha (1 - beta/N) |u|^{N/(N-2)}) r^{N-1-beta} dr.
double log_adams_functional(const ParametricProfile& u, const FunctionalParams& fp,
                            const QuadratureOptions& q = {});

/// exp of the log forms; NumericalError when the value overflows a double.
double tm_functional(const RadialProfile& u, const FunctionalParams& fp, const QuadratureOptions& q = {});
double tm_functional(const ParametricProfile& u, const FunctionalParams& fp, const QuadratureOptions& q = {});
double adams_functional(const ParametricProfile& u, const FunctionalParams& fp, const QuadratureOptions& q = {});

/// tm_functional / ||u||_N^{N-beta}; requires ||grad u||_N <= 1 + 1e-9.
double log_at_objective(const RadialProfile& u, double alpha, double beta, const QuadratureOptions& q = {});
double at_objective(const RadialProfile& u, double alpha, double beta, const QuadratureOptions& q = {});
/// adams_functional / ||u||_{N/2}^{(N/2)(1-beta/N)}; requires a C^1 profile
/// with ||Delta u||_{N/2} <= 1 + 1e-9.
double log_ata_objective(const ParametricProfile& u, double alpha, double beta, const QuadratureOptions& q = {});
double ata_objective(const ParametricProfile& u, double alpha, double beta, const QuadratureOptions& q = {});

/// |{x : u(x) > threshold}|.
double levelset_volume(const RadialProfile& u, double threshold);
double levelset_volume(const ParametricProfile& u, double threshold);

/// Text format: "radial-profile v1 N=<int>" then one "rho value" pair per line.
void write_profile(std::ostream& os, const RadialProfile& u);
RadialProfile read_profile(std::istream& is);

}  // namespace sharplab
