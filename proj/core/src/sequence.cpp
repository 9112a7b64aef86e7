#include "amrt/sequence.hpp"

#include <algorithm>

#include "amrt/errors.hpp"

namespace amrt {

SeqField::SeqField(std::size_t nodes, int N) : nodes_(nodes), N_(N) {
  if (N < 0) throw ArgumentError("sequence truncation must be non-negative");
  data_.assign(nodes * static_cast<std::size_t>(N + 1), cplx{});
}

ComplexGrid SeqField::entry(int n) const {
  if (n < 0 || n > N_) throw ArgumentError("sequence entry out of range");
  ComplexGrid out(nodes_);
  for (std::size_t i = 0; i < nodes_; ++i) out[i] = at(i, n);
  return out;
}

void SeqField::set_entry(int n, const ComplexGrid& values) {
  if (n < 0 || n > N_) throw ArgumentError("sequence entry out of range");
  if (values.size() != nodes_) throw ArgumentError("entry grid size mismatch");
  for (std::size_t i = 0; i < nodes_; ++i) at(i, n) = values[i];
}

SeqField left_shift(const SeqField& s, int times) {
  if (times < 0 || times > s.truncation()) throw ArgumentError("left_shift: times must lie in [0, N]");
  SeqField out(s.nodes(), s.truncation() - times);
  for (std::size_t i = 0; i < s.nodes(); ++i)
    std::copy(s.row(i) + times, s.row(i) + s.length(), out.row(i));
  return out;
}

SeqField resized(const SeqField& s, int N) {
  SeqField out(s.nodes(), N);
  const int m = std::min(s.length(), out.length());
  for (std::size_t i = 0; i < s.nodes(); ++i) std::copy(s.row(i), s.row(i) + m, out.row(i));
  return out;
}

SeqField add(const SeqField& a, const SeqField& b) {
  if (a.nodes() != b.nodes()) throw ArgumentError("add: node counts differ");
  SeqField out = resized(a, std::max(a.truncation(), b.truncation()));
  for (std::size_t i = 0; i < b.nodes(); ++i)
    for (int n = 0; n < b.length(); ++n) out.at(i, n) += b.at(i, n);
  return out;
}

double tail_magnitude(const SeqField& s) {
  double m = 0.0;
  for (std::size_t i = 0; i < s.nodes(); ++i) m = std::max(m, std::abs(s.at(i, s.truncation())));
  return m;
}

}  // namespace amrt
