#include "mpf/matrix.hpp"

#include "mpf/error.hpp"

namespace mpf {

void Matrix::append_row(std::span<const double> values) {
  if (rows_ == 0 && cols_ == 0) cols_ = values.size();
  require(values.size() == cols_, "Matrix::append_row: width mismatch");
  data_.insert(data_.end(), values.begin(), values.end());
  ++rows_;
}

void Matrix::append_column(std::span<const double> values) {
  require(values.size() == rows_, "Matrix::append_column: height mismatch");
  std::vector<double> next;
  next.reserve(rows_ * (cols_ + 1));
  for (std::size_t r = 0; r < rows_; ++r) {
    auto src = row(r);
    next.insert(next.end(), src.begin(), src.end());
    next.push_back(values[r]);
  }
  data_ = std::move(next);
  ++cols_;
}

void Matrix::erase_column(std::size_t c) {
  require(c < cols_, "Matrix::erase_column: index out of range");
  std::vector<double> next;
  next.reserve(rows_ * (cols_ - 1));
  for (std::size_t r = 0; r < rows_; ++r) {
    for (std::size_t j = 0; j < cols_; ++j) {
      if (j != c) next.push_back((*this)(r, j));
    }
  }
  data_ = std::move(next);
  --cols_;
}

Matrix Matrix::select_rows(std::span<const std::size_t> indices) const {
  Matrix out(indices.size(), cols_);
  for (std::size_t i = 0; i < indices.size(); ++i) {
    require(indices[i] < rows_, "Matrix::select_rows: index out of range");
    auto src = row(indices[i]);
    std::copy(src.begin(), src.end(), out.row(i).begin());
  }
  return out;
}

}  // namespace mpf
