#include "bergman/kernel.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "bergman/error.hpp"

namespace bergman {
namespace {

constexpr double kDependenceThreshold = 1e-13;

// S_j = sum_k x^k / ((j+1)(j+2)...(j+1+k)), all terms positive.
double fock_series(int j, double x) {
  double term = 1.0 / (j + 1);
  double sum = term;
  for (int k = 1; k < 100000; ++k) {
    term *= x / (j + 1 + k);
    sum += term;
    if (term < 1e-18 * sum) break;
  }
  return sum;
}

}  // namespace

KernelApprox KernelApprox::build(Region region, Weight weight, int degree,
                                 const KernelBuildOptions& options) {
  if (degree < 0) throw Error(ErrorKind::InvalidArgument, "kernel degree must be >= 0");
  if (!(options.rel_tol > 0.0)) throw Error(ErrorKind::InvalidArgument, "rel_tol must be positive");

  KernelApprox k;
  k.region_ = std::make_shared<const Region>(std::move(region));
  k.weight_ = std::move(weight);
  k.degree_ = degree;
  k.center_ = k.region_->centroid();
  k.scale_ = 0.5 * k.region_->diameter();
  k.boundary_offset_ =
      options.boundary_offset.value_or(kDefaultBoundaryFraction * k.region_->diameter());

  const Complex center = k.center_;
  const double scale = k.scale_;
  const Weight& w = k.weight_;
  const int n = degree;

  // Probes: int |b_j|^2 e^{-phi}, j = 0..N.
  ProbeSet probes = [&](const QuadratureRule& rule) {
    std::vector<double> sums(static_cast<std::size_t>(n + 1), 0.0);
    std::vector<double> comp(sums.size(), 0.0);
    for (std::size_t i = 0; i < rule.size(); ++i) {
      const double base = rule.weights[i] * std::exp(-w.eval(rule.nodes[i]));
      const double r2 = std::norm((rule.nodes[i] - center) / scale);
      double term = base;
      for (std::size_t j = 0; j < sums.size(); ++j) {
        const double t = sums[j] + term;
        comp[j] += std::abs(sums[j]) >= std::abs(term) ? (sums[j] - t) + term
                                                       : (term - t) + sums[j];
        sums[j] = t;
        term *= r2;
      }
    }
    for (std::size_t j = 0; j < sums.size(); ++j) sums[j] += comp[j];
    return sums;
  };
  RefineOptions refine{options.degree_step, options.max_degree};
  k.stable_ = refine_until_stable(*k.region_, options.start_degree.value_or(2 * n + 2), w, probes,
                                  options.rel_tol, refine);

  const QuadratureRule& rule = k.stable_.rule;
  const auto m = static_cast<Eigen::Index>(rule.size());
  Eigen::VectorXcd zeta(m);
  Eigen::VectorXcd sqrt_w(m);
  for (Eigen::Index i = 0; i < m; ++i) {
    const auto ii = static_cast<std::size_t>(i);
    const double mass = rule.weights[ii] * std::exp(-w.eval(rule.nodes[ii]));
    if (!std::isfinite(mass)) throw Error(ErrorKind::NonFiniteIntegrand, "non-finite weight mass");
    sqrt_w(i) = std::sqrt(mass);
    zeta(i) = (rule.nodes[ii] - center) / scale;
  }

  Eigen::MatrixXcd q(m, n + 1);
  k.hessenberg_ = Eigen::MatrixXcd::Zero(n + 1, n);
  k.h00_ = sqrt_w.norm();
  q.col(0) = sqrt_w / k.h00_;
  for (int j = 0; j < n; ++j) {
    Eigen::VectorXcd v = zeta.cwiseProduct(q.col(j));
    const double before = v.norm();
    for (int pass = 0; pass < 2; ++pass) {
      const Eigen::VectorXcd h = q.leftCols(j + 1).adjoint() * v;
      v -= q.leftCols(j + 1) * h;
      k.hessenberg_.col(j).head(j + 1) += h;
    }
    const double next = v.norm();
    if (!(next > kDependenceThreshold * before)) {
      std::ostringstream os;
      os << "basis numerically dependent; reduce N (Arnoldi step " << j + 1 << " retained "
         << next / before << " of the column norm)";
      throw Error(ErrorKind::BasisDependent, os.str());
    }
    k.hessenberg_(j + 1, j) = next;
    q.col(j + 1) = v / next;
  }

  k.r_factor_ = Eigen::MatrixXcd::Zero(n + 1, n + 1);
  Eigen::VectorXcd column = sqrt_w;
  for (int j = 0; j <= n; ++j) {
    k.r_factor_.col(j).head(j + 1) = q.leftCols(j + 1).adjoint() * column;
    column = column.cwiseProduct(zeta);
  }
  return k;
}

void KernelApprox::check_interior(Complex z) const {
  const double d = region_->signed_distance(z);
  if (d < boundary_offset_ * (1.0 - 1e-12)) {
    std::ostringstream os;
    os << "probe too close to boundary: (" << z.real() << ", " << z.imag() << ") has distance "
       << d << " < offset " << boundary_offset_;
    throw Error(ErrorKind::ProbeTooCloseToBoundary, os.str());
  }
}

void KernelApprox::basis_into(Complex z, std::span<Complex> e) const {
  const Complex zeta = (z - center_) / scale_;
  e[0] = 1.0 / h00_;
  for (int j = 0; j < degree_; ++j) {
    Complex v = zeta * e[static_cast<std::size_t>(j)];
    for (int i = 0; i <= j; ++i) v -= hessenberg_(i, j) * e[static_cast<std::size_t>(i)];
    e[static_cast<std::size_t>(j + 1)] = v / hessenberg_(j + 1, j).real();
  }
}

std::vector<Complex> KernelApprox::basis(Complex z) const {
  check_interior(z);
  std::vector<Complex> e(static_cast<std::size_t>(degree_ + 1));
  basis_into(z, e);
  return e;
}

double KernelApprox::eval(Complex z) const {
  double sum = 0.0;
  for (const Complex& v : basis(z)) sum += std::norm(v);
  return sum;
}

Complex KernelApprox::eval2(Complex zeta, Complex z) const {
  const auto a = basis(zeta);
  const auto b = basis(z);
  Complex sum{0.0, 0.0};
  for (std::size_t j = 0; j < a.size(); ++j) sum += a[j] * std::conj(b[j]);
  return sum;
}

double KernelApprox::reproducing_error(std::span<const Complex> coeffs, Complex z) const {
  const auto ez = basis(z);
  auto poly = [&](Complex x) {
    Complex acc{0.0, 0.0};
    for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) acc = acc * x + *it;
    return acc;
  };
  std::vector<Complex> e(ez.size());
  // <f, K(., z)> = sum_i m_i f(x_i) conj(K(x_i, z)) = sum_j e_j(z) <f, e_j>.
  std::vector<Complex> proj(ez.size(), Complex(0.0, 0.0));
  const QuadratureRule& rule = stable_.rule;
  for (std::size_t i = 0; i < rule.size(); ++i) {
    const double mass = rule.weights[i] * std::exp(-weight_.eval(rule.nodes[i]));
    basis_into(rule.nodes[i], e);
    const Complex fx = poly(rule.nodes[i]) * mass;
    for (std::size_t j = 0; j < e.size(); ++j) proj[j] += fx * std::conj(e[j]);
  }
  Complex reproduced{0.0, 0.0};
  for (std::size_t j = 0; j < ez.size(); ++j) reproduced += ez[j] * proj[j];
  const Complex fz = poly(z);
  return std::abs(reproduced - fz) / (1.0 + std::abs(fz));
}

// ---------------------------------------------------------------------------

ClosedFormKernel ClosedFormKernel::unit_disk() { return {}; }

ClosedFormKernel ClosedFormKernel::disk_fock(double radius, double alpha) {
  if (!(radius > 0.0) || !(alpha >= 0.0))
    throw Error(ErrorKind::InvalidArgument, "disk_fock needs radius > 0 and alpha >= 0");
  ClosedFormKernel k;
  k.kind_ = Kind::DiskFock;
  k.radius_ = radius;
  k.alpha_ = alpha;
  return k;
}

ClosedFormKernel ClosedFormKernel::gaussian_x(std::optional<double> normalization) {
  if (normalization && !(*normalization > 0.0))
    throw Error(ErrorKind::InvalidArgument, "gaussian_x normalization must be positive");
  ClosedFormKernel k;
  k.kind_ = Kind::GaussianX;
  k.normalization_ = normalization;
  return k;
}

ClosedFormKernel ClosedFormKernel::product(ClosedFormKernel left, ClosedFormKernel right) {
  ClosedFormKernel k;
  k.kind_ = Kind::Product;
  k.left_ = std::make_shared<const ClosedFormKernel>(std::move(left));
  k.right_ = std::make_shared<const ClosedFormKernel>(std::move(right));
  return k;
}

int ClosedFormKernel::dimension() const {
  return kind_ == Kind::Product ? left_->dimension() + right_->dimension() : 1;
}

bool ClosedFormKernel::normalization_known() const {
  switch (kind_) {
    case Kind::GaussianX: return normalization_.has_value();
    case Kind::Product: return left_->normalization_known() && right_->normalization_known();
    default: return true;
  }
}

std::vector<double> ClosedFormKernel::fock_moments(double radius, double alpha, int count) {
  const double x = alpha * radius * radius;
  std::vector<double> c(static_cast<std::size_t>(count));
  for (int j = 0; j < count; ++j)
    c[static_cast<std::size_t>(j)] =
        std::numbers::pi * std::pow(radius, 2 * j + 2) * std::exp(-x) * fock_series(j, x);
  return c;
}

double ClosedFormKernel::eval(std::span<const Complex> point) const {
  if (static_cast<int>(point.size()) != dimension())
    throw Error(ErrorKind::InvalidArgument, "point dimension does not match kernel");
  switch (kind_) {
    case Kind::UnitDisk: {
      const double r2 = std::norm(point[0]);
      if (r2 >= 1.0) throw Error(ErrorKind::DomainError, "unit disk kernel needs |z| < 1");
      return 1.0 / (std::numbers::pi * (1.0 - r2) * (1.0 - r2));
    }
    case Kind::DiskFock: {
      const double q = std::norm(point[0]) / (radius_ * radius_);
      if (q >= 1.0) throw Error(ErrorKind::DomainError, "disk_fock kernel needs |z| < radius");
      const double x = alpha_ * radius_ * radius_;
      const double base = std::numbers::pi * radius_ * radius_ * std::exp(-x);
      double sum = 0.0;
      double qj = 1.0;
      for (int j = 0; j < 1000000; ++j) {
        const double term = qj / (base * fock_series(j, x));
        sum += term;
        // term_{k+1} / term_k <= q (k + 2 + x) / (k + 1), decreasing in k.
        const double rho = q * (j + 2 + x) / (j + 1);
        if (rho < 1.0 && term * rho / (1.0 - rho) < 1e-16 * sum) break;
        qj *= q;
        if (qj == 0.0) break;
      }
      return sum;
    }
    case Kind::GaussianX: {
      const double x = point[0].real();
      return normalization_.value_or(1.0) * std::exp(x * x);
    }
    case Kind::Product: {
      const auto split = static_cast<std::size_t>(left_->dimension());
      return left_->eval(point.first(split)) * right_->eval(point.subspan(split));
    }
  }
  return 0.0;
}

ConvergenceTable converge_table(const Region& region, const Weight& weight, Complex z,
                                std::span<const int> degrees, double threshold,
                                const KernelBuildOptions& options) {
  ConvergenceTable table;
  table.threshold = threshold;
  for (std::size_t i = 0; i < degrees.size(); ++i) {
    if (i > 0 && degrees[i] <= degrees[i - 1])
      throw Error(ErrorKind::InvalidArgument, "degree list must be strictly increasing");
    const KernelApprox k = KernelApprox::build(region, weight, degrees[i], options);
    const double value = k.eval(z);
    const double delta = table.rows.empty()
                             ? std::numeric_limits<double>::quiet_NaN()
                             : std::abs(value - table.rows.back().value) / value;
    table.rows.push_back({degrees[i], value, delta});
  }
  table.converged = table.rows.size() >= 2 && table.rows.back().delta < threshold;
  return table;
}

}  // namespace bergman
