#include "fsp/tensor.hpp"

#include <cmath>
#include <sstream>

#include "fsp/error.hpp"

namespace fsp {

size_t shape_size(const Shape& s) {
  size_t n = 1;
  for (int d : s) {
    if (d < 0) raise(ErrorCode::dimension, "negative dimension in shape " + shape_str(s));
    n *= static_cast<size_t>(d);
  }
  return n;
}

std::string shape_str(const Shape& s) {
  std::ostringstream os;
  os << '[';
  for (size_t i = 0; i < s.size(); ++i) {
    if (i) os << 'x';
    os << s[i];
  }
  os << ']';
  return os.str();
}

Tensor::Tensor(Shape shape) : shape_(std::move(shape)) {
  data_.assign(shape_size(shape_), 0.0);
  cols_ = shape_.size() == 2 ? shape_[1] : 0;
}

Tensor::Tensor(Shape shape, std::vector<double> data) : shape_(std::move(shape)), data_(std::move(data)) {
  if (data_.size() != shape_size(shape_))
    raise(ErrorCode::dimension,
          "tensor data length " + std::to_string(data_.size()) + " does not match shape " + shape_str(shape_));
  cols_ = shape_.size() == 2 ? shape_[1] : 0;
}

Tensor Tensor::scalar(double v) { return Tensor(Shape{}, std::vector<double>{v}); }

Tensor Tensor::vec(std::vector<double> v) {
  int n = static_cast<int>(v.size());
  return Tensor(Shape{n}, std::move(v));
}

Tensor Tensor::matrix(int rows, int cols) { return Tensor(Shape{rows, cols}); }

Tensor Tensor::matrix(int rows, int cols, std::vector<double> data) {
  return Tensor(Shape{rows, cols}, std::move(data));
}

int Tensor::rows() const {
  if (rank() != 2) raise(ErrorCode::dimension, "rows() on tensor of shape " + shape_str(shape_));
  return shape_[0];
}

int Tensor::cols() const {
  if (rank() != 2) raise(ErrorCode::dimension, "cols() on tensor of shape " + shape_str(shape_));
  return shape_[1];
}

double Tensor::item() const {
  if (size() != 1) raise(ErrorCode::dimension, "item() on tensor of shape " + shape_str(shape_));
  return data_[0];
}

void Tensor::fill(double v) { data_.assign(data_.size(), v); }

bool Tensor::all_finite() const {
  for (double x : data_)
    if (!std::isfinite(x)) return false;
  return true;
}

}  // namespace fsp
