#include "aniso/sampler.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "aniso/errors.hpp"
#include "aniso/parallel.hpp"
#include "aniso/rng.hpp"

namespace aniso {

namespace {

void require_axis(const std::vector<double>& points, const char* name) {
  if (points.empty()) throw DomainError(std::string(name) + " must not be empty");
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (!(points[i] > 0.0) || !std::isfinite(points[i])) {
      throw DomainError(std::string(name) + " must hold positive finite values");
    }
    if (i > 0 && !(points[i] > points[i - 1])) throw DomainError(std::string(name) + " must be strictly increasing");
  }
}

std::size_t locate(const std::vector<double>& points, bool axes, double t, const char* name) {
  if (axes && t == 0.0) return 0;
  const auto it = std::lower_bound(points.begin(), points.end(), t);
  if (it == points.end() || *it != t) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%s = %.17g is not a grid coordinate", name, t);
    throw OffGridCorner(buf);
  }
  return static_cast<std::size_t>(it - points.begin()) + (axes ? 1 : 0);
}

std::string g17(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

}  // namespace

GridSpec::GridSpec(std::vector<double> t1_points, std::vector<double> t2_points, bool include_axes)
    : t1_(std::move(t1_points)), t2_(std::move(t2_points)), axes_(include_axes) {
  require_axis(t1_, "t1_points");
  require_axis(t2_, "t2_points");
  if (rows() * cols() > kMaxGridPoints) {
    throw DomainError("grid has " + std::to_string(rows() * cols()) + " points, limit is " +
                      std::to_string(kMaxGridPoints));
  }
}

double GridSpec::t1(std::size_t row) const {
  if (axes_) return row == 0 ? 0.0 : t1_.at(row - 1);
  return t1_.at(row);
}

double GridSpec::t2(std::size_t col) const {
  if (axes_) return col == 0 ? 0.0 : t2_.at(col - 1);
  return t2_.at(col);
}

std::vector<Point> GridSpec::interior_points() const {
  std::vector<Point> points;
  points.reserve(t1_.size() * t2_.size());
  for (double a : t1_) {
    for (double b : t2_) points.push_back({a, b});
  }
  return points;
}

std::size_t GridSpec::row_of(double t1) const { return locate(t1_, axes_, t1, "t1"); }
std::size_t GridSpec::col_of(double t2) const { return locate(t2_, axes_, t2, "t2"); }

Eigen::MatrixXd covariance_matrix(const FieldCovariance& fc, std::span<const Point> points) {
  const auto n = static_cast<Eigen::Index>(points.size());
  Eigen::MatrixXd cov(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j <= i; ++j) {
      cov(i, j) = field_cov(fc, points[static_cast<std::size_t>(i)], points[static_cast<std::size_t>(j)]);
      cov(j, i) = cov(i, j);
    }
  }
  return cov;
}

CovarianceFactor factorize_points(const FieldCovariance& fc, std::span<const Point> points,
                                  const ThetaCertificate& certificate, double clip_tol) {
  if (!certificate.covers(fc)) {
    throw NotCertified("no positive semidefiniteness certificate covers " + fc.descriptor());
  }
  if (points.empty()) throw DomainError("factorize_points needs at least one point");
  if (points.size() > kMaxGridPoints) throw DomainError("too many points to factorize");
  if (!(clip_tol >= 0.0)) throw DomainError("clip_tol must be non-negative");

  const Eigen::MatrixXd cov = covariance_matrix(fc, points);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(cov);
  if (solver.info() != Eigen::Success) throw EigenFailure("covariance eigendecomposition did not converge");

  Eigen::VectorXd lambda = solver.eigenvalues();
  const double lambda_min = lambda.minCoeff();
  const double lambda_max = lambda.maxCoeff();
  std::size_t clipped = 0;
  for (Eigen::Index i = 0; i < lambda.size(); ++i) {
    if (lambda(i) < clip_tol * lambda_max) {
      lambda(i) = 0.0;
      ++clipped;
    }
  }
  Eigen::MatrixXd factor = solver.eigenvectors() * lambda.cwiseSqrt().asDiagonal();
  return {std::vector<Point>(points.begin(), points.end()),
          std::move(factor),
          fc.hurst(),
          fc.descriptor(),
          lambda_min,
          lambda_max,
          clipped,
          clip_tol};
}

GridFactor factorize_covariance(const FieldCovariance& fc, const GridSpec& grid, const ThetaCertificate& certificate,
                                double clip_tol) {
  const std::vector<Point> points = grid.interior_points();
  return {grid, factorize_points(fc, points, certificate, clip_tol)};
}

Eigen::MatrixXd sample_block(const CovarianceFactor& factor, std::uint64_t seed, std::uint64_t first_path,
                             std::size_t count) {
  const NormalSource normals(seed);
  const auto d = static_cast<Eigen::Index>(factor.dimension());
  Eigen::MatrixXd z(d, static_cast<Eigen::Index>(count));
  for (std::size_t p = 0; p < count; ++p) {
    normals.fill(first_path + p, 0, std::span<double>(z.col(static_cast<Eigen::Index>(p)).data(),
                                                       static_cast<std::size_t>(d)));
  }
  return factor.matrix * z;
}

std::vector<GridSample> sample(const GridFactor& factor, std::uint64_t seed, std::size_t n_paths) {
  const GridSpec& grid = factor.grid;
  const std::size_t offset = grid.include_axes() ? 1 : 0;
  const std::size_t n2 = grid.t2_points().size();
  std::vector<GridSample> samples(n_paths, GridSample{grid, {}, seed, 0, factor.factor.kernel_descriptor});
  parallel_for(n_paths, [&](std::size_t p) {
    const Eigen::MatrixXd x = sample_block(factor.factor, seed, p, 1);
    Eigen::MatrixXd values = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(grid.rows()),
                                                   static_cast<Eigen::Index>(grid.cols()));
    for (std::size_t k = 0; k < factor.factor.dimension(); ++k) {
      values(static_cast<Eigen::Index>(k / n2 + offset), static_cast<Eigen::Index>(k % n2 + offset)) =
          x(static_cast<Eigen::Index>(k), 0);
    }
    samples[p].values = std::move(values);
    samples[p].path = p;
  });
  return samples;
}

void for_each_block(const CovarianceFactor& factor, std::uint64_t seed, std::uint64_t n_paths,
                    const std::function<void(std::uint64_t, const Eigen::MatrixXd&)>& visit,
                    std::size_t block_size) {
  if (block_size == 0) throw DomainError("block_size must be positive");
  const std::size_t workers = std::max<std::size_t>(1, worker_count());
  std::vector<Eigen::MatrixXd> blocks(workers);
  std::uint64_t next = 0;
  while (next < n_paths) {
    // One round generates up to `workers` consecutive blocks.
    std::vector<std::uint64_t> firsts;
    for (std::size_t w = 0; w < workers && next < n_paths; ++w) {
      firsts.push_back(next);
      next += std::min<std::uint64_t>(block_size, n_paths - next);
    }
    parallel_for(firsts.size(), [&](std::size_t w) {
      const std::uint64_t end = w + 1 < firsts.size() ? firsts[w + 1] : next;
      blocks[w] = sample_block(factor, seed, firsts[w], static_cast<std::size_t>(end - firsts[w]));
    });
    for (std::size_t w = 0; w < firsts.size(); ++w) visit(firsts[w], blocks[w]);
  }
}

double rectangular_increments(const GridSample& sample, const RectIncrement& rect) {
  const GridSpec& g = sample.grid;
  const auto u1 = static_cast<Eigen::Index>(g.row_of(rect.u.t1));
  const auto v1 = static_cast<Eigen::Index>(g.row_of(rect.v.t1));
  const auto u2 = static_cast<Eigen::Index>(g.col_of(rect.u.t2));
  const auto v2 = static_cast<Eigen::Index>(g.col_of(rect.v.t2));
  const Eigen::MatrixXd& x = sample.values;
  return x(v1, v2) - x(u1, v2) - x(v1, u2) + x(u1, u2);
}

std::string to_csv(const GridSample& sample) {
  const GridSpec& g = sample.grid;
  std::string out = "t1\\t2";
  for (std::size_t j = 0; j < g.cols(); ++j) out += "," + g17(g.t2(j));
  out += "\n";
  for (std::size_t i = 0; i < g.rows(); ++i) {
    out += g17(g.t1(i));
    for (std::size_t j = 0; j < g.cols(); ++j) {
      out += "," + g17(sample.values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)));
    }
    out += "\n";
  }
  return out;
}

nlohmann::json to_json(const GridSample& sample) {
  const GridSpec& g = sample.grid;
  nlohmann::json values = nlohmann::json::array();
  for (std::size_t i = 0; i < g.rows(); ++i) {
    nlohmann::json row = nlohmann::json::array();
    for (std::size_t j = 0; j < g.cols(); ++j) {
      row.push_back(sample.values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)));
    }
    values.push_back(std::move(row));
  }
  return {{"grid", {{"t1_points", g.t1_points()}, {"t2_points", g.t2_points()}, {"include_axes", g.include_axes()}}},
          {"values", std::move(values)},
          {"seed", sample.seed},
          {"path", sample.path},
          {"kernel", sample.kernel_descriptor}};
}

}  // namespace aniso
