#ifndef FSP_TENSOR_HPP
#define FSP_TENSOR_HPP

#include <cstddef>
#include <string>
#include <vector>

namespace fsp {

using Shape = std::vector<int>;

size_t shape_size(const Shape& s);
std::string shape_str(const Shape& s);

// Dense row-major f64 tensor. Rank 0 (scalar), 1 (vector) and 2 (matrix)
// cover everything in this codebase.
class Tensor {
 public:
  Tensor() = default;
  explicit Tensor(Shape shape);  // zero-filled
  Tensor(Shape shape, std::vector<double> data);

  static Tensor scalar(double v);
  static Tensor vec(std::vector<double> v);
  static Tensor matrix(int rows, int cols);
  static Tensor matrix(int rows, int cols, std::vector<double> data);

  const Shape& shape() const { return shape_; }
  int rank() const { return static_cast<int>(shape_.size()); }
  size_t size() const { return data_.size(); }
  bool same_shape(const Tensor& o) const { return shape_ == o.shape_; }

  int rows() const;  // rank-2 only
  int cols() const;

  double* data() { return data_.data(); }
  const double* data() const { return data_.data(); }
  double& operator[](size_t i) { return data_[i]; }
  double operator[](size_t i) const { return data_[i]; }
  double& at(int r, int c) { return data_[static_cast<size_t>(r) * cols_ + c]; }
  double at(int r, int c) const { return data_[static_cast<size_t>(r) * cols_ + c]; }
  double item() const;  // requires size() == 1

  void fill(double v);
  bool all_finite() const;

 private:
  Shape shape_;
  std::vector<double> data_;
  int cols_ = 0;  // cached for at()
};

}  // namespace fsp

#endif
