#pragma once

#include <cstddef>
#include <vector>

#include "amrt/geometry.hpp"

namespace amrt {

/// Per-node truncated sequences (w_0, w_-1, ..., w_-N); entry n holds w_{-n}.
class SeqField {
 public:
  SeqField() = default;
  SeqField(std::size_t nodes, int N);

  std::size_t nodes() const { return nodes_; }
  int truncation() const { return N_; }
  int length() const { return N_ + 1; }

  cplx& at(std::size_t node, int n) { return data_[node * length() + n]; }
  const cplx& at(std::size_t node, int n) const { return data_[node * length() + n]; }
  cplx* row(std::size_t node) { return data_.data() + node * length(); }
  const cplx* row(std::size_t node) const { return data_.data() + node * length(); }

  ComplexGrid entry(int n) const;
  void set_entry(int n, const ComplexGrid& values);

  std::vector<cplx>& raw() { return data_; }
  const std::vector<cplx>& raw() const { return data_; }

 private:
  std::size_t nodes_ = 0;
  int N_ = -1;
  std::vector<cplx> data_;
};

/// L^times: drops the first `times` entries; truncation becomes N - times.
SeqField left_shift(const SeqField& s, int times);
/// Zero-extends (or truncates) each sequence to truncation N.
SeqField resized(const SeqField& s, int N);
/// Entrywise sum, zero-padding the shorter operand.
SeqField add(const SeqField& a, const SeqField& b);
/// Largest |w_{-N}| over all nodes.
double tail_magnitude(const SeqField& s);

}  // namespace amrt
