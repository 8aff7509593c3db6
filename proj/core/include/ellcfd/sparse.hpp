#pragma once

// Hybrid ELL + CRS storage for structurally symmetric matrices.
//
// The matrix is split as A = B + C. B lives in an N x K ELL block with value
// array V and column array I; C holds the few rows longer than K in CRS form.
// A companion array J gives, for every ELL slot (i, k) holding A_ij, the ELL
// slot k' in row j that holds A_ji, which makes column access (and hence the
// transposed product) possible without storing a transpose. J is -1 when A_ji
// lives in the CRS part and at padding slots; padding also has I = -1.
//
// I, J and the face-to-slot map depend only on the mesh, so one pattern is
// shared by every matrix assembled on it.

#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "ellcfd/mesh.hpp"

namespace ellcfd {

/// Address of one stored coefficient. Values below ell_size() index the
/// row-major ELL block; the rest index the CRS value array after ell_size().
struct EntryRef {
  std::int64_t index = -1;
  bool valid() const { return index >= 0; }
  friend bool operator==(const EntryRef&, const EntryRef&) = default;
};

/// Coefficient addresses of one internal face.
struct FaceSlots {
  EntryRef upper;  ///< row = owner, column = neighbour
  EntryRef lower;  ///< row = neighbour, column = owner
  friend bool operator==(const FaceSlots&, const FaceSlots&) = default;
};

enum class QPacking {
  by_n,  ///< Q = N * I + J
  by_k,  ///< Q = K * I + J
};

class SparsityPattern {
 public:
  static constexpr Index kSentinel = -1;

  /// Builds the pattern of a structurally symmetric matrix whose off-diagonal
  /// columns in row i are `neighbours[i]`. The diagonal is always stored in
  /// ELL; when a row has more than K entries its highest off-diagonal columns
  /// go to CRS. K = min(1 + max row degree, k_cap).
  static SparsityPattern from_graph(const std::vector<std::vector<Index>>& neighbours, Index k_cap);

  Index n() const { return n_; }
  Index k() const { return k_; }
  std::size_t ell_size() const { return static_cast<std::size_t>(n_) * static_cast<std::size_t>(k_); }
  std::size_t crs_size() const { return crs_col_.size(); }

  /// Row-major N x K column indices (I) and transposed-slot indices (J).
  const std::vector<Index>& ell_cols() const { return ell_col_; }
  const std::vector<Index>& ell_twins() const { return ell_twin_; }
  Index col(Index row, Index slot) const { return ell_col_[flat(row, slot)]; }
  Index twin(Index row, Index slot) const { return ell_twin_[flat(row, slot)]; }
  const std::vector<Index>& diag_slots() const { return diag_slot_; }

  const std::vector<Index>& crs_row_ptr() const { return crs_row_ptr_; }
  const std::vector<Index>& crs_cols() const { return crs_col_; }
  /// Location of the transposed entry for every CRS entry.
  const std::vector<EntryRef>& crs_twins() const { return crs_twin_; }
  bool crs_twin_in_ell(std::size_t e) const { return static_cast<std::size_t>(crs_twin_[e].index) < ell_size(); }

  const std::vector<FaceSlots>& face_slots() const { return face_slot_; }

  EntryRef diagonal(Index row) const { return {static_cast<std::int64_t>(flat(row, diag_slot_[row]))}; }
  /// Address of A(row, col), invalid if the entry is not stored.
  EntryRef find(Index row, Index col) const;
  bool is_padding(EntryRef r) const {
    return static_cast<std::size_t>(r.index) < ell_size() && ell_col_[static_cast<std::size_t>(r.index)] == kSentinel;
  }
  /// Row and column of a stored entry.
  std::pair<Index, Index> coordinates(EntryRef r) const;

  /// Number of stored entries (ELL non-padding + CRS).
  std::size_t nnz() const;
  /// Human-readable I and J tables plus the CRS part.
  std::string dump() const;

  friend bool operator==(const SparsityPattern&, const SparsityPattern&) = default;

 private:
  friend SparsityPattern build_pattern(const Mesh& mesh, Index k_cap);

  std::size_t flat(Index row, Index slot) const {
    return static_cast<std::size_t>(row) * static_cast<std::size_t>(k_) + static_cast<std::size_t>(slot);
  }

  Index n_ = 0;
  Index k_ = 0;
  std::vector<Index> ell_col_;
  std::vector<Index> ell_twin_;
  std::vector<Index> diag_slot_;
  std::vector<Index> crs_row_ptr_{0};
  std::vector<Index> crs_col_;
  std::vector<EntryRef> crs_twin_;
  std::vector<FaceSlots> face_slot_;
};

/// One row per cell, one off-diagonal entry per internal face side.
/// Throws std::invalid_argument if k_cap < 1.
SparsityPattern build_pattern(const Mesh& mesh, Index k_cap = 7);

/// The 4 x 4, K = 3 pattern used to illustrate the J array.
SparsityPattern build_pattern_from_example();

/// Packs I and J into one integer per slot. Padding maps to -1 and slots
/// whose transpose lives in CRS map to -(I + 2).
std::vector<std::int64_t> pack_q(const SparsityPattern& pattern, QPacking mode);

struct UnpackedQ {
  std::vector<Index> cols;
  std::vector<Index> twins;
};
UnpackedQ unpack_q(std::span<const std::int64_t> q, Index n, Index k, QPacking mode);

/// Values over a shared SparsityPattern.
class HybridMatrix {
 public:
  HybridMatrix() = default;
  explicit HybridMatrix(std::shared_ptr<const SparsityPattern> pattern);

  const SparsityPattern& pattern() const { return *pattern_; }
  const std::shared_ptr<const SparsityPattern>& shared_pattern() const { return pattern_; }
  Index n() const { return pattern_->n(); }

  std::span<double> ell_values() { return ell_val_; }
  std::span<const double> ell_values() const { return ell_val_; }
  std::span<double> crs_values() { return crs_val_; }
  std::span<const double> crs_values() const { return crs_val_; }

  double value(EntryRef r) const;
  /// Sets or increments one stored coefficient; padding and invalid refs throw.
  void accumulate(EntryRef r, double v, bool add = true);
  void add_to_diagonal(Index row, double v) { ell_val_[static_cast<std::size_t>(pattern_->diagonal(row).index)] += v; }
  double diagonal_value(Index row) const { return ell_val_[static_cast<std::size_t>(pattern_->diagonal(row).index)]; }

  void set_zero();
  HybridMatrix& operator+=(const HybridMatrix& o);
  HybridMatrix& operator-=(const HybridMatrix& o);
  HybridMatrix& operator*=(double s);

  /// y = A x
  void multiply(std::span<const double> x, std::span<double> y) const;
  /// y = A^T x through I/J column traversal.
  void multiply_transposed(std::span<const double> x, std::span<double> y) const;

  /// Row-major dense copy (tests and debug output only).
  std::vector<double> to_dense() const;
  std::string dump() const;

 private:
  void check_same_pattern(const HybridMatrix& o) const;

  std::shared_ptr<const SparsityPattern> pattern_;
  std::vector<double> ell_val_;
  std::vector<double> crs_val_;
};

std::vector<double> smvp(const HybridMatrix& a, std::span<const double> x);
std::vector<double> stmvp(const HybridMatrix& a, std::span<const double> x);
std::vector<double> diagonal(const HybridMatrix& a);
inline void coeff_accumulate(HybridMatrix& a, EntryRef r, double v, bool add) { a.accumulate(r, v, add); }

}  // namespace ellcfd
