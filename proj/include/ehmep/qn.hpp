#pragma once

// (N, Sz) quantum numbers and sector-resolved bond indices for the
// matrix-product machinery. Sz is stored doubled so all charges stay
// integral.

#include <compare>
#include <map>
#include <vector>

namespace ehmep {

struct Qn {
  int n = 0;
  int sz = 0;  // 2 * Sz

  friend constexpr Qn operator+(Qn a, Qn b) { return {a.n + b.n, a.sz + b.sz}; }
  friend constexpr Qn operator-(Qn a, Qn b) { return {a.n - b.n, a.sz - b.sz}; }
  friend constexpr bool operator==(const Qn&, const Qn&) = default;
  friend constexpr auto operator<=>(const Qn&, const Qn&) = default;
};

// Physical charges of the local basis {empty, up, down, updown}.
inline constexpr Qn kPhysQn[4] = {{0, 0}, {1, 1}, {1, -1}, {2, 0}};
inline constexpr int kPhysDim = 4;

// Ordered sector list with dimensions; sector ids are positions in the
// sorted order, so identical sector sets index identically everywhere.
class QnIndex {
 public:
  QnIndex() = default;

  int add(Qn q, int dim) {  // returns the sector id (insert keeps order)
    auto it = std::lower_bound(qns_.begin(), qns_.end(), q);
    const int pos = static_cast<int>(it - qns_.begin());
    if (it != qns_.end() && *it == q) {
      dims_[static_cast<std::size_t>(pos)] += dim;
      return pos;
    }
    qns_.insert(it, q);
    dims_.insert(dims_.begin() + pos, dim);
    return pos;
  }

  int find(Qn q) const {
    auto it = std::lower_bound(qns_.begin(), qns_.end(), q);
    if (it == qns_.end() || *it != q) return -1;
    return static_cast<int>(it - qns_.begin());
  }

  int sectors() const { return static_cast<int>(qns_.size()); }
  Qn qn(int i) const { return qns_[static_cast<std::size_t>(i)]; }
  int dim(int i) const { return dims_[static_cast<std::size_t>(i)]; }
  int total_dim() const {
    int t = 0;
    for (int d : dims_) t += d;
    return t;
  }

  friend bool operator==(const QnIndex&, const QnIndex&) = default;

 private:
  std::vector<Qn> qns_;
  std::vector<int> dims_;
};

}  // namespace ehmep
