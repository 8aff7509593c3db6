#include "ellcfd/sparse.hpp"

#include <algorithm>
#include <iomanip>
#include <sstream>
#include <stdexcept>

#include "ellcfd/parallel.hpp"

namespace ellcfd {

SparsityPattern SparsityPattern::from_graph(const std::vector<std::vector<Index>>& neighbours, Index k_cap) {
  if (k_cap < 1) throw std::invalid_argument("k_cap must be at least 1");
  const auto n = static_cast<Index>(neighbours.size());
  if (n < 1) throw std::invalid_argument("pattern needs at least one row");

  std::vector<std::vector<Index>> rows(neighbours.size());
  std::size_t max_degree = 0;
  for (Index i = 0; i < n; ++i) {
    auto& r = rows[i];
    r = neighbours[i];
    for (Index j : r)
      if (j < 0 || j >= n) throw std::invalid_argument("column index out of range in row " + std::to_string(i));
    std::sort(r.begin(), r.end());
    r.erase(std::unique(r.begin(), r.end()), r.end());
    r.erase(std::remove(r.begin(), r.end(), i), r.end());
    max_degree = std::max(max_degree, r.size());
  }
  for (Index i = 0; i < n; ++i)
    for (Index j : rows[i])
      if (!std::binary_search(rows[j].begin(), rows[j].end(), i))
        throw std::invalid_argument("graph is not structurally symmetric at (" + std::to_string(i) + ", " +
                                    std::to_string(j) + ")");

  SparsityPattern p;
  p.n_ = n;
  p.k_ = std::min<Index>(static_cast<Index>(max_degree) + 1, k_cap);
  const Index k = p.k_;
  p.ell_col_.assign(p.ell_size(), kSentinel);
  p.ell_twin_.assign(p.ell_size(), kSentinel);
  p.diag_slot_.assign(n, 0);
  p.crs_row_ptr_.assign(static_cast<std::size_t>(n) + 1, 0);

  // Diagonal stays in ELL; the highest off-diagonal columns overflow.
  std::vector<std::vector<Index>> overflow(rows.size());
  for (Index i = 0; i < n; ++i) {
    const auto& r = rows[i];
    const std::size_t keep = std::min<std::size_t>(r.size(), static_cast<std::size_t>(k - 1));
    std::vector<Index> ell(r.begin(), r.begin() + static_cast<std::ptrdiff_t>(keep));
    ell.insert(std::upper_bound(ell.begin(), ell.end(), i), i);
    overflow[i].assign(r.begin() + static_cast<std::ptrdiff_t>(keep), r.end());
    for (std::size_t s = 0; s < ell.size(); ++s) {
      p.ell_col_[p.flat(i, static_cast<Index>(s))] = ell[s];
      if (ell[s] == i) p.diag_slot_[i] = static_cast<Index>(s);
    }
    p.crs_row_ptr_[i + 1] = p.crs_row_ptr_[i] + static_cast<Index>(overflow[i].size());
  }
  for (const auto& o : overflow) p.crs_col_.insert(p.crs_col_.end(), o.begin(), o.end());

  for (Index i = 0; i < n; ++i) {
    for (Index s = 0; s < k; ++s) {
      const Index j = p.col(i, s);
      if (j == kSentinel) continue;
      const EntryRef t = p.find(j, i);
      if (static_cast<std::size_t>(t.index) < p.ell_size())
        p.ell_twin_[p.flat(i, s)] = static_cast<Index>(static_cast<std::size_t>(t.index) % static_cast<std::size_t>(k));
    }
  }
  p.crs_twin_.resize(p.crs_col_.size());
  for (Index i = 0; i < n; ++i)
    for (Index e = p.crs_row_ptr_[i]; e < p.crs_row_ptr_[i + 1]; ++e) p.crs_twin_[e] = p.find(p.crs_col_[e], i);
  return p;
}

EntryRef SparsityPattern::find(Index row, Index col) const {
  if (row < 0 || row >= n_ || col < 0 || col >= n_) return {};
  const auto begin = ell_col_.begin() + static_cast<std::ptrdiff_t>(flat(row, 0));
  auto end = begin + k_;
  end = std::lower_bound(begin, end, kSentinel, [](Index a, Index) { return a != kSentinel; });
  auto it = std::lower_bound(begin, end, col);
  if (it != end && *it == col) return {static_cast<std::int64_t>(it - ell_col_.begin())};
  const auto cb = crs_col_.begin() + crs_row_ptr_[row];
  const auto ce = crs_col_.begin() + crs_row_ptr_[row + 1];
  auto c = std::lower_bound(cb, ce, col);
  if (c != ce && *c == col)
    return {static_cast<std::int64_t>(ell_size()) + static_cast<std::int64_t>(c - crs_col_.begin())};
  return {};
}

std::pair<Index, Index> SparsityPattern::coordinates(EntryRef r) const {
  const auto idx = static_cast<std::size_t>(r.index);
  if (idx < ell_size()) return {static_cast<Index>(idx / static_cast<std::size_t>(k_)), ell_col_[idx]};
  const auto e = static_cast<Index>(idx - ell_size());
  const auto row = static_cast<Index>(std::upper_bound(crs_row_ptr_.begin(), crs_row_ptr_.end(), e) - crs_row_ptr_.begin()) - 1;
  return {row, crs_col_[e]};
}

std::size_t SparsityPattern::nnz() const {
  return static_cast<std::size_t>(std::count_if(ell_col_.begin(), ell_col_.end(), [](Index c) { return c != kSentinel; })) +
         crs_col_.size();
}

std::string SparsityPattern::dump() const {
  std::ostringstream os;
  os << "N=" << n_ << " K=" << k_ << " crs=" << crs_col_.size() << '\n';
  auto table = [&](const char* name, const std::vector<Index>& a) {
    os << name << ":\n";
    for (Index i = 0; i < n_; ++i) {
      for (Index s = 0; s < k_; ++s) os << std::setw(4) << a[flat(i, s)];
      os << '\n';
    }
  };
  table("I", ell_col_);
  table("J", ell_twin_);
  if (!crs_col_.empty()) {
    os << "CRS:\n";
    for (Index i = 0; i < n_; ++i)
      for (Index e = crs_row_ptr_[i]; e < crs_row_ptr_[i + 1]; ++e)
        os << "  (" << i << ", " << crs_col_[e] << ") twin@" << crs_twin_[e].index << '\n';
  }
  return os.str();
}

SparsityPattern build_pattern(const Mesh& mesh, Index k_cap) {
  if (k_cap < 1) throw std::invalid_argument("k_cap must be at least 1");
  std::vector<std::vector<Index>> nbrs(static_cast<std::size_t>(mesh.n_cells()));
  const auto& owner = mesh.owner();
  const auto& neighbour = mesh.neighbour();
  for (Index f = 0; f < mesh.n_internal_faces(); ++f) {
    nbrs[owner[f]].push_back(neighbour[f]);
    nbrs[neighbour[f]].push_back(owner[f]);
  }
  SparsityPattern p = SparsityPattern::from_graph(nbrs, k_cap);
  p.face_slot_.resize(static_cast<std::size_t>(mesh.n_internal_faces()));
  for (Index f = 0; f < mesh.n_internal_faces(); ++f)
    p.face_slot_[f] = {p.find(owner[f], neighbour[f]), p.find(neighbour[f], owner[f])};
  return p;
}

SparsityPattern build_pattern_from_example() {
  // B_00 B_01 .    B_03
  // B_10 B_11 B_12 .
  // .    B_21 B_22 B_23
  // B_30 .    B_32 B_33
  return SparsityPattern::from_graph({{1, 3}, {0, 2}, {1, 3}, {0, 2}}, 3);
}

std::vector<std::int64_t> pack_q(const SparsityPattern& pattern, QPacking mode) {
  const auto& cols = pattern.ell_cols();
  const auto& twins = pattern.ell_twins();
  const std::int64_t mult = mode == QPacking::by_n ? pattern.n() : pattern.k();
  std::vector<std::int64_t> q(cols.size());
  for (std::size_t s = 0; s < cols.size(); ++s) {
    if (cols[s] == SparsityPattern::kSentinel)
      q[s] = -1;
    else if (twins[s] < 0)
      q[s] = -(static_cast<std::int64_t>(cols[s]) + 2);
    else
      q[s] = mult * cols[s] + twins[s];
  }
  return q;
}

UnpackedQ unpack_q(std::span<const std::int64_t> q, Index n, Index k, QPacking mode) {
  const std::int64_t mult = mode == QPacking::by_n ? n : k;
  UnpackedQ out;
  out.cols.resize(q.size());
  out.twins.resize(q.size());
  for (std::size_t s = 0; s < q.size(); ++s) {
    if (q[s] == -1) {
      out.cols[s] = SparsityPattern::kSentinel;
      out.twins[s] = SparsityPattern::kSentinel;
    } else if (q[s] < 0) {
      out.cols[s] = static_cast<Index>(-q[s] - 2);
      out.twins[s] = SparsityPattern::kSentinel;
    } else {
      out.cols[s] = static_cast<Index>(q[s] / mult);
      out.twins[s] = static_cast<Index>(q[s] % mult);
    }
  }
  return out;
}

HybridMatrix::HybridMatrix(std::shared_ptr<const SparsityPattern> pattern)
    : pattern_(std::move(pattern)), ell_val_(pattern_->ell_size(), 0.0), crs_val_(pattern_->crs_size(), 0.0) {}

double HybridMatrix::value(EntryRef r) const {
  const auto idx = static_cast<std::size_t>(r.index);
  return idx < ell_val_.size() ? ell_val_[idx] : crs_val_.at(idx - ell_val_.size());
}

void HybridMatrix::accumulate(EntryRef r, double v, bool add) {
  if (!r.valid() || static_cast<std::size_t>(r.index) >= ell_val_.size() + crs_val_.size())
    throw std::out_of_range("coefficient address outside the pattern");
  if (pattern_->is_padding(r)) throw std::invalid_argument("coefficient address is an ELL padding slot");
  const auto idx = static_cast<std::size_t>(r.index);
  double& slot = idx < ell_val_.size() ? ell_val_[idx] : crs_val_[idx - ell_val_.size()];
  slot = add ? slot + v : v;
}

void HybridMatrix::set_zero() {
  std::fill(ell_val_.begin(), ell_val_.end(), 0.0);
  std::fill(crs_val_.begin(), crs_val_.end(), 0.0);
}

void HybridMatrix::check_same_pattern(const HybridMatrix& o) const {
  if (pattern_ != o.pattern_ && !(*pattern_ == *o.pattern_))
    throw std::invalid_argument("matrices do not share a sparsity pattern");
}

HybridMatrix& HybridMatrix::operator+=(const HybridMatrix& o) {
  check_same_pattern(o);
  for (std::size_t i = 0; i < ell_val_.size(); ++i) ell_val_[i] += o.ell_val_[i];
  for (std::size_t i = 0; i < crs_val_.size(); ++i) crs_val_[i] += o.crs_val_[i];
  return *this;
}

HybridMatrix& HybridMatrix::operator-=(const HybridMatrix& o) {
  check_same_pattern(o);
  for (std::size_t i = 0; i < ell_val_.size(); ++i) ell_val_[i] -= o.ell_val_[i];
  for (std::size_t i = 0; i < crs_val_.size(); ++i) crs_val_[i] -= o.crs_val_[i];
  return *this;
}

HybridMatrix& HybridMatrix::operator*=(double s) {
  for (double& v : ell_val_) v *= s;
  for (double& v : crs_val_) v *= s;
  return *this;
}

void HybridMatrix::multiply(std::span<const double> x, std::span<double> y) const {
  const Index n = pattern_->n();
  if (x.size() != static_cast<std::size_t>(n) || y.size() != static_cast<std::size_t>(n))
    throw std::invalid_argument("smvp: dimension mismatch");
  const Index k = pattern_->k();
  const Index* cols = pattern_->ell_cols().data();
  const double* vals = ell_val_.data();
  const Index* rp = pattern_->crs_row_ptr().data();
  const Index* cc = pattern_->crs_cols().data();
  const double* cv = crs_val_.data();
  ELLCFD_PARALLEL_FOR
  for (Index i = 0; i < n; ++i) {
    const std::size_t base = static_cast<std::size_t>(i) * static_cast<std::size_t>(k);
    double sum = 0.0;
    for (Index s = 0; s < k; ++s) {
      const Index c = cols[base + s];
      if (c >= 0) sum += vals[base + s] * x[c];
    }
    for (Index e = rp[i]; e < rp[i + 1]; ++e) sum += cv[e] * x[cc[e]];
    y[i] = sum;
  }
}

void HybridMatrix::multiply_transposed(std::span<const double> x, std::span<double> y) const {
  const Index n = pattern_->n();
  if (x.size() != static_cast<std::size_t>(n) || y.size() != static_cast<std::size_t>(n))
    throw std::invalid_argument("stmvp: dimension mismatch");
  const auto k = static_cast<std::size_t>(pattern_->k());
  const Index* cols = pattern_->ell_cols().data();
  const Index* twins = pattern_->ell_twins().data();
  const double* vals = ell_val_.data();
  const auto& rp = pattern_->crs_row_ptr();
  const auto& cc = pattern_->crs_cols();
  const auto& ct = pattern_->crs_twins();
  const std::size_t ell = pattern_->ell_size();

  // Column j of B: rows I[j][*], values V[I[j][s]][J[j][s]].
  ELLCFD_PARALLEL_FOR
  for (Index j = 0; j < n; ++j) {
    const std::size_t base = static_cast<std::size_t>(j) * k;
    double sum = 0.0;
    for (std::size_t s = 0; s < k; ++s) {
      const Index i = cols[base + s];
      const Index t = twins[base + s];
      if (i >= 0 && t >= 0) sum += vals[static_cast<std::size_t>(i) * k + static_cast<std::size_t>(t)] * x[i];
    }
    // CRS row j lists columns i with A_ji in C; A_ij sits at the twin address.
    for (Index e = rp[j]; e < rp[j + 1]; ++e) sum += value(ct[e]) * x[cc[e]];
    y[j] = sum;
  }
  // A_ij stored in C whose twin A_ji is in B: not reachable from row j of B.
  for (Index i = 0; i < n; ++i)
    for (Index e = rp[i]; e < rp[i + 1]; ++e)
      if (static_cast<std::size_t>(ct[e].index) < ell) y[cc[e]] += crs_val_[e] * x[i];
}

std::vector<double> HybridMatrix::to_dense() const {
  const auto n = static_cast<std::size_t>(pattern_->n());
  const auto k = static_cast<std::size_t>(pattern_->k());
  std::vector<double> d(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t s = 0; s < k; ++s) {
      const Index c = pattern_->ell_cols()[i * k + s];
      if (c >= 0) d[i * n + static_cast<std::size_t>(c)] += ell_val_[i * k + s];
    }
  const auto& rp = pattern_->crs_row_ptr();
  for (std::size_t i = 0; i < n; ++i)
    for (Index e = rp[i]; e < rp[i + 1]; ++e) d[i * n + static_cast<std::size_t>(pattern_->crs_cols()[e])] += crs_val_[e];
  return d;
}

std::string HybridMatrix::dump() const {
  std::ostringstream os;
  const auto n = static_cast<std::size_t>(pattern_->n());
  os << pattern_->dump();
  os << "V:\n";
  for (std::size_t i = 0; i < n; ++i) {
    for (Index s = 0; s < pattern_->k(); ++s)
      os << std::setw(12) << std::setprecision(5) << ell_val_[i * static_cast<std::size_t>(pattern_->k()) + static_cast<std::size_t>(s)];
    os << '\n';
  }
  if (n <= 16) {
    os << "dense:\n";
    const auto d = to_dense();
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) os << std::setw(12) << std::setprecision(5) << d[i * n + j];
      os << '\n';
    }
  }
  return os.str();
}

std::vector<double> smvp(const HybridMatrix& a, std::span<const double> x) {
  std::vector<double> y(static_cast<std::size_t>(a.n()));
  a.multiply(x, y);
  return y;
}

std::vector<double> stmvp(const HybridMatrix& a, std::span<const double> x) {
  std::vector<double> y(static_cast<std::size_t>(a.n()));
  a.multiply_transposed(x, y);
  return y;
}

std::vector<double> diagonal(const HybridMatrix& a) {
  std::vector<double> d(static_cast<std::size_t>(a.n()));
  for (Index i = 0; i < a.n(); ++i) d[i] = a.diagonal_value(i);
  return d;
}

}  // namespace ellcfd
