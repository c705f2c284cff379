#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <json.hpp>

#include "aniso/lamperti.hpp"
#include "aniso/spectral.hpp"

namespace aniso {

inline constexpr std::size_t kMaxGridPoints = 4096;
inline constexpr double kDefaultClipTol = 1e-12;

/// Rectangular grid t1_points x t2_points. With include_axes the grid gains a
/// leading row t1 = 0 and a leading column t2 = 0 on which the field is 0.
class GridSpec {
 public:
  GridSpec(std::vector<double> t1_points, std::vector<double> t2_points, bool include_axes = false);

  const std::vector<double>& t1_points() const noexcept { return t1_; }
  const std::vector<double>& t2_points() const noexcept { return t2_; }
  bool include_axes() const noexcept { return axes_; }

  /// Matrix shape including axis row/column.
  std::size_t rows() const noexcept { return t1_.size() + (axes_ ? 1 : 0); }
  std::size_t cols() const noexcept { return t2_.size() + (axes_ ? 1 : 0); }
  double t1(std::size_t row) const;
  double t2(std::size_t col) const;

  /// Off-axis points in row-major order; these carry the randomness.
  std::vector<Point> interior_points() const;

  /// Row (or column) holding the coordinate exactly; OffGridCorner otherwise.
  std::size_t row_of(double t1) const;
  std::size_t col_of(double t2) const;

  friend bool operator==(const GridSpec&, const GridSpec&) = default;

 private:
  std::vector<double> t1_;
  std::vector<double> t2_;
  bool axes_;
};

/// Covariance matrix of the field at `points`, assembled from field_cov.
Eigen::MatrixXd covariance_matrix(const FieldCovariance& fc, std::span<const Point> points);

/// Square-root factor L with L L^T equal to the clipped covariance matrix.
struct CovarianceFactor {
  std::vector<Point> points;
  Eigen::MatrixXd matrix;
  HurstPair hurst;
  std::string kernel_descriptor;
  double lambda_min;  // smallest eigenvalue before clipping
  double lambda_max;
  std::size_t clipped;  // eigenvalues set to zero
  double clip_tol;

  std::size_t dimension() const noexcept { return points.size(); }
};

/// Eigendecomposition factor over an arbitrary point list. Requires a
/// certificate covering `fc`; eigenvalues below clip_tol * lambda_max are
/// clipped to 0.
CovarianceFactor factorize_points(const FieldCovariance& fc, std::span<const Point> points,
                                  const ThetaCertificate& certificate, double clip_tol = kDefaultClipTol);

struct GridFactor {
  GridSpec grid;
  CovarianceFactor factor;
};

GridFactor factorize_covariance(const FieldCovariance& fc, const GridSpec& grid, const ThetaCertificate& certificate,
                                double clip_tol = kDefaultClipTol);

struct GridSample {
  GridSpec grid;
  Eigen::MatrixXd values;  // rows follow t1, columns follow t2
  std::uint64_t seed;
  std::uint64_t path;
  std::string kernel_descriptor;
};

/// Paths 0..n_paths-1 for `seed`. Path p uses the normals (seed, p, 0..d-1).
std::vector<GridSample> sample(const GridFactor& factor, std::uint64_t seed, std::size_t n_paths);

/// Field values at factor.points for paths [first_path, first_path + count),
/// one column per path.
Eigen::MatrixXd sample_block(const CovarianceFactor& factor, std::uint64_t seed, std::uint64_t first_path,
                             std::size_t count);

/// Streams paths 0..n_paths-1 through `visit` in blocks. Blocks are generated
/// in parallel and visited in path order on the calling thread.
void for_each_block(const CovarianceFactor& factor, std::uint64_t seed, std::uint64_t n_paths,
                    const std::function<void(std::uint64_t first_path, const Eigen::MatrixXd& block)>& visit,
                    std::size_t block_size = 1 << 14);

/// Delta_u X(v) = X(v1,v2) - X(u1,v2) - X(v1,u2) + X(u1,u2).
double rectangular_increments(const GridSample& sample, const RectIncrement& rect);

/// Header "t1\t2,<t2 ...>", then one row per t1 value, 17 significant digits.
std::string to_csv(const GridSample& sample);
nlohmann::json to_json(const GridSample& sample);

}  // namespace aniso
