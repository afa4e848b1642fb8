#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "sgp/multi_index.hpp"

namespace sgp {

/// Point lists are stored one point per row.
using PointMatrix = Eigen::MatrixXd;

/// A nested sequence of one-dimensional designs X_1 ⊆ X_2 ⊆ ... stored as a
/// flat pool of coordinates; level j uses the first size_at(j) entries.
class ComponentSchedule {
 public:
  ComponentSchedule() = default;

  /// increments[k] holds the points added at level k + 1. Throws
  /// InvalidScheduleError when level 1 is empty or a coordinate repeats.
  static ComponentSchedule from_increments(const std::vector<std::vector<double>>& increments);

  int levels() const { return static_cast<int>(prefix_.size()); }

  /// m(level); m(0) = 0.
  std::size_t size_at(int level) const;
  std::size_t increment_size(int level) const { return size_at(level) - size_at(level - 1); }

  std::span<const double> coordinates() const { return coords_; }
  std::span<const double> points_at(int level) const;

  /// Smallest level whose design contains the given slot of the pool.
  int level_of_slot(std::size_t slot) const;

  std::vector<std::vector<double>> increments() const;

  friend bool operator==(const ComponentSchedule&, const ComponentSchedule&) = default;

 private:
  std::vector<double> coords_;
  std::vector<std::size_t> prefix_;  // prefix_[j - 1] = m(j)
  std::vector<int> slot_level_;
};

enum class BuiltinSchedule {
  /// {.5}, {.125,.875}, {.25,.75}, {0,1}, {.375,.625}, {.1875,.8125},
  /// {.0625,.9375}, then symmetric midpoint refinement.
  spread,
  /// {.5}, {0,1}, {.25,.75}, {.375,.625}, {.125,.875}, then symmetric
  /// midpoint refinement.
  boundary_early,
  /// X_j = {k / 2^j : 1 <= k <= 2^j - 1}.
  hyperbolic_cross,
};

BuiltinSchedule parse_builtin_schedule(const std::string& name);
std::string to_string(BuiltinSchedule schedule);

/// A built-in schedule with at least `levels` levels.
ComponentSchedule make_schedule(BuiltinSchedule kind, int levels);

/// Extends a list of increments to `levels` levels. Each new level adds the
/// midpoint of the widest gap in [0, .5] (ties go to the gap nearest .5) and
/// its mirror image about .5.
std::vector<std::vector<double>> refine_symmetric(std::vector<std::vector<double>> increments,
                                                  int levels);

/// Union of the lattices X_{1,j_1} x ... x X_{d,j_d} over |j| <= eta with
/// exact point identity by pool slot.
///
/// Points are grouped by their minimal level vector l (the block of l holds
/// the points whose slot in dimension i was introduced at level l_i). Blocks
/// are listed in index_set_J order and each block is row-major, so the
/// design at eta is a prefix of the design at eta + 1.
///
/// Every lattice of index_set_J(eta, d) carries a map from its row-major
/// position (dimension d fastest) to the global point id. Under that ordering
/// the covariance of the lattice is the Kronecker product of the component
/// matrices in dimension order.
class SparseGridDesign {
 public:
  int dim() const { return d_; }
  int eta() const { return eta_; }
  std::size_t size() const { return slots_.size() / static_cast<std::size_t>(d_); }

  const std::vector<ComponentSchedule>& schedules() const { return schedules_; }

  std::span<const std::uint32_t> slots(std::size_t point) const {
    return {slots_.data() + point * static_cast<std::size_t>(d_), static_cast<std::size_t>(d_)};
  }
  double coordinate(std::size_t point, int dim) const;
  PointMatrix points() const;

  /// index_set_J(eta, d).
  const std::vector<MultiIndex>& lattices() const { return lattices_; }
  /// First entry of lattices() that belongs to index_set_P(eta, d); the
  /// remainder of the list is exactly P.
  std::size_t first_combination_lattice() const { return first_p_; }
  std::span<const std::uint32_t> lattice_map(std::size_t lattice) const {
    return {map_data_.data() + map_offsets_[lattice], map_offsets_[lattice + 1] - map_offsets_[lattice]};
  }
  /// Row counts m_i(j_i) of a lattice.
  std::vector<Eigen::Index> lattice_extents(std::size_t lattice) const;

  friend SparseGridDesign build_sparse_grid(std::vector<ComponentSchedule> schedules, int eta);

 private:
  int d_ = 0;
  int eta_ = 0;
  std::vector<ComponentSchedule> schedules_;
  std::vector<std::uint32_t> slots_;
  std::vector<MultiIndex> lattices_;
  std::size_t first_p_ = 0;
  std::vector<std::size_t> map_offsets_;
  std::vector<std::uint32_t> map_data_;
};

/// Throws InvalidLevelError (eta < d), ScheduleTooShortError (a schedule has
/// fewer than eta - d + 1 levels) or InvalidDesignError (empty schedule list).
SparseGridDesign build_sparse_grid(std::vector<ComponentSchedule> schedules, int eta);

/// Number of points of the sparse grid, summed from the increment sizes.
std::uint64_t sample_size(const std::vector<ComponentSchedule>& schedules, int eta);

/// Full Cartesian product, dimension d fastest.
PointMatrix build_lattice(const std::vector<std::vector<double>>& designs_1d);

/// Latin hypercube of n points in [0,1]^d: each column has one point in each
/// of the n strata [k/n, (k+1)/n). Deterministic for a given seed.
PointMatrix build_lhs(int n, int d, std::uint64_t seed);

/// Plain-text schedule file, one line per level per dimension:
/// `dim level c1 c2 ...` with the coordinates added at that level. Dimensions
/// and levels are 1-based. A file describing only dimension 1 is applied to
/// every dimension.
std::vector<ComponentSchedule> read_schedule(std::istream& in, int d);
std::vector<ComponentSchedule> read_schedule_file(const std::string& path, int d);
void write_schedule(std::ostream& out, const std::vector<ComponentSchedule>& schedules);

}  // namespace sgp
