#pragma once

#include <array>
#include <cstddef>
#include <functional>
#include <iosfwd>
#include <span>
#include <utility>
#include <vector>

namespace llg {

using Vec3 = std::array<double, 3>;

inline constexpr Vec3 cross(const Vec3& a, const Vec3& b) noexcept {
  return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2],
          a[0] * b[1] - a[1] * b[0]};
}

inline constexpr double dot(const Vec3& a, const Vec3& b) noexcept {
  return a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
}

/// Uniform cell-centered grid on the unit interval or cube, one ghost layer
/// per face. Interior indices run 1..n along each active axis; 0 and n+1 are
/// ghosts. Axes a 1-D grid does not have use the single index 0.
class GridSpec {
 public:
  GridSpec(int dim, int n);

  int dim() const noexcept { return dim_; }
  int n() const noexcept { return n_; }
  double h() const noexcept { return h_; }
  /// h^dim, the weight of one cell in discrete inner products.
  double cell_volume() const noexcept { return volume_; }

  std::size_t padded_size() const noexcept { return padded_; }
  std::size_t interior_size() const noexcept { return interior_; }

  std::size_t stride(int axis) const noexcept {
    return axis == 0 ? 1 : (axis == 1 ? sy_ : sz_);
  }
  std::size_t index(int i, int j = 0, int k = 0) const noexcept {
    return static_cast<std::size_t>(i) + sy_ * static_cast<std::size_t>(j) +
           sz_ * static_cast<std::size_t>(k);
  }

  int first(int axis) const noexcept { return axis < dim_ ? 1 : 0; }
  int last(int axis) const noexcept { return axis < dim_ ? n_ : 0; }

  /// Interior x-lines: one in 1-D, n^2 in 3-D.
  int line_count() const noexcept { return dim_ == 1 ? 1 : n_ * n_; }
  /// (j, k) of interior x-line `l`.
  std::pair<int, int> line(int l) const noexcept {
    if (dim_ == 1) return {0, 0};
    return {1 + l % n_, 1 + l / n_};
  }

  /// Cell-center coordinates; unused axes report 0.
  Vec3 center(int i, int j = 0, int k = 0) const noexcept {
    return {(i - 0.5) * h_, dim_ == 3 ? (j - 0.5) * h_ : 0.0,
            dim_ == 3 ? (k - 0.5) * h_ : 0.0};
  }

  friend bool operator==(const GridSpec& a, const GridSpec& b) noexcept {
    return a.dim_ == b.dim_ && a.n_ == b.n_;
  }

 private:
  int dim_;
  int n_;
  double h_;
  double volume_;
  std::size_t sy_ = 0;
  std::size_t sz_ = 0;
  std::size_t padded_;
  std::size_t interior_;
};

/// Three magnetization components at every cell, ghosts included. Each
/// component is one contiguous x-fastest block.
class VectorField {
 public:
  explicit VectorField(const GridSpec& grid);
  VectorField(const GridSpec& grid, const Vec3& value);

  const GridSpec& grid() const noexcept { return grid_; }

  std::span<double> component(int c) noexcept {
    return {data_.data() + c * stride_, stride_};
  }
  std::span<const double> component(int c) const noexcept {
    return {data_.data() + c * stride_, stride_};
  }
  std::span<double> values() noexcept { return data_; }
  std::span<const double> values() const noexcept { return data_; }

  double& operator()(int c, int i, int j = 0, int k = 0) noexcept {
    return data_[c * stride_ + grid_.index(i, j, k)];
  }
  double operator()(int c, int i, int j = 0, int k = 0) const noexcept {
    return data_[c * stride_ + grid_.index(i, j, k)];
  }

  Vec3 cell(int i, int j = 0, int k = 0) const noexcept;
  void set_cell(const Vec3& v, int i, int j = 0, int k = 0) noexcept;

  /// this += a * x on every stored value. Ghost filling commutes with linear
  /// combinations, so combining ghost-filled fields keeps ghosts valid.
  VectorField& axpy(double a, const VectorField& x);
  VectorField& scale(double a) noexcept;
  /// Copies values from `other`, which must share the grid.
  void assign(const VectorField& other);

  bool all_finite() const noexcept;

 private:
  GridSpec grid_;
  std::size_t stride_;
  std::vector<double> data_;
};

/// One value per interior cell, x-fastest, indices 1..n like VectorField.
class ScalarField {
 public:
  explicit ScalarField(const GridSpec& grid);

  const GridSpec& grid() const noexcept { return grid_; }
  std::span<const double> values() const noexcept { return data_; }
  std::span<double> values() noexcept { return data_; }

  double& operator()(int i, int j = 0, int k = 0) noexcept {
    return data_[offset(i, j, k)];
  }
  double operator()(int i, int j = 0, int k = 0) const noexcept {
    return data_[offset(i, j, k)];
  }

 private:
  std::size_t offset(int i, int j, int k) const noexcept;

  GridSpec grid_;
  std::vector<double> data_;
};

struct Norms {
  double l2 = 0.0;
  double linf = 0.0;
  double h1 = 0.0;
};

/// Samples `fn` at interior cell centers and fills the ghosts.
VectorField sample(const GridSpec& grid,
                   const std::function<Vec3(const Vec3&)>& fn);

/// Homogeneous Neumann ghosts: each ghost copies its interior neighbour.
/// In 3-D the axes are processed x, y, z so edges and corners end up filled.
void fill_ghosts(VectorField& field);

/// Second-order centered Laplacian of the interior; the result's ghosts are
/// filled. `in` must already have its ghosts filled.
void laplacian(const VectorField& in, VectorField& out);
VectorField laplacian(const VectorField& in);

/// Per interior cell, the squared centered-difference Jacobian
/// sum_axes sum_components ((m_c)_{+1} - (m_c)_{-1})^2 / (2h)^2.
ScalarField avg_gradient_sq(const VectorField& field);

/// h^d sum_I f_I . g_I over interior cells.
double inner(const VectorField& f, const VectorField& g);
/// h^d sum over interior links of forward differences (f_{I+e} - f_I)/h.
double grad_inner(const VectorField& f, const VectorField& g);

Norms norms(const VectorField& field);
/// max over interior cells of | |m| - 1 |.
double unit_length_drift(const VectorField& field);

VectorField cross(const VectorField& a, const VectorField& b);

/// One CSV row per interior cell: i[,j,k], x[,y,z], m1, m2, m3.
void write_snapshot_csv(std::ostream& os, const VectorField& field);

}  // namespace llg
