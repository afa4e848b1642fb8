#include "sgp/designs.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <istream>
#include <limits>
#include <map>
#include <numeric>
#include <ostream>
#include <random>
#include <set>
#include <sstream>

#include "sgp/errors.hpp"

namespace sgp {

// ---------------------------------------------------------------------------
// ComponentSchedule

ComponentSchedule ComponentSchedule::from_increments(
    const std::vector<std::vector<double>>& increments) {
  if (increments.empty() || increments.front().empty()) {
    throw InvalidScheduleError("a schedule needs at least one point at level 1");
  }
  ComponentSchedule s;
  std::set<double> seen;
  int level = 0;
  for (const auto& inc : increments) {
    ++level;
    for (double c : inc) {
      if (!std::isfinite(c)) throw InvalidScheduleError("non-finite schedule coordinate");
      if (!seen.insert(c).second) {
        std::ostringstream msg;
        msg << "duplicate coordinate " << std::setprecision(17) << c << " at level " << level;
        throw InvalidScheduleError(msg.str());
      }
      s.coords_.push_back(c);
      s.slot_level_.push_back(level);
    }
    s.prefix_.push_back(s.coords_.size());
  }
  return s;
}

std::size_t ComponentSchedule::size_at(int level) const {
  if (level <= 0) return 0;
  if (level > levels()) {
    throw ScheduleTooShortError("schedule has " + std::to_string(levels()) +
                                " levels, level " + std::to_string(level) + " requested");
  }
  return prefix_[static_cast<std::size_t>(level - 1)];
}

std::span<const double> ComponentSchedule::points_at(int level) const {
  return std::span<const double>(coords_).first(size_at(level));
}

int ComponentSchedule::level_of_slot(std::size_t slot) const { return slot_level_.at(slot); }

std::vector<std::vector<double>> ComponentSchedule::increments() const {
  std::vector<std::vector<double>> out;
  std::size_t begin = 0;
  for (std::size_t end : prefix_) {
    out.emplace_back(coords_.begin() + static_cast<std::ptrdiff_t>(begin),
                     coords_.begin() + static_cast<std::ptrdiff_t>(end));
    begin = end;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Built-in schedules

BuiltinSchedule parse_builtin_schedule(const std::string& name) {
  if (name == "spread") return BuiltinSchedule::spread;
  if (name == "boundary-early") return BuiltinSchedule::boundary_early;
  if (name == "hyperbolic-cross") return BuiltinSchedule::hyperbolic_cross;
  throw InvalidScheduleError("unknown built-in schedule '" + name + "'");
}

std::string to_string(BuiltinSchedule schedule) {
  switch (schedule) {
    case BuiltinSchedule::spread: return "spread";
    case BuiltinSchedule::boundary_early: return "boundary-early";
    case BuiltinSchedule::hyperbolic_cross: return "hyperbolic-cross";
  }
  return "unknown";
}

std::vector<std::vector<double>> refine_symmetric(std::vector<std::vector<double>> increments,
                                                  int levels) {
  std::set<double> pts;
  for (const auto& inc : increments) pts.insert(inc.begin(), inc.end());
  while (static_cast<int>(increments.size()) < levels) {
    double best_width = -1.0;
    double best_mid = 0.0;
    for (auto it = pts.begin(); std::next(it) != pts.end(); ++it) {
      const double lo = *it;
      const double hi = *std::next(it);
      if (hi > 0.5) break;
      const double width = hi - lo;
      // Later gaps are nearer .5, so >= keeps the innermost of equal widths.
      if (width >= best_width) {
        best_width = width;
        best_mid = 0.5 * (lo + hi);
      }
    }
    if (best_width <= 0.0) throw InvalidScheduleError("schedule cannot be refined further");
    increments.push_back({best_mid, 1.0 - best_mid});
    pts.insert(best_mid);
    pts.insert(1.0 - best_mid);
  }
  return increments;
}

ComponentSchedule make_schedule(BuiltinSchedule kind, int levels) {
  levels = std::max(levels, 1);
  std::vector<std::vector<double>> inc;
  switch (kind) {
    case BuiltinSchedule::spread:
      inc = {{.5}, {.125, .875}, {.25, .75}, {0., 1.}, {.375, .625}, {.1875, .8125}, {.0625, .9375}};
      inc = refine_symmetric(std::move(inc), levels);
      break;
    case BuiltinSchedule::boundary_early:
      inc = {{.5}, {0., 1.}, {.25, .75}, {.375, .625}, {.125, .875}};
      inc = refine_symmetric(std::move(inc), levels);
      break;
    case BuiltinSchedule::hyperbolic_cross:
      if (levels > 30) throw InvalidScheduleError("hyperbolic cross limited to 30 levels");
      for (int j = 1; j <= levels; ++j) {
        const double denom = std::ldexp(1.0, j);
        std::vector<double> added;
        for (long k = 1; k < (1L << j); k += 2) added.push_back(static_cast<double>(k) / denom);
        inc.push_back(std::move(added));
      }
      break;
  }
  return ComponentSchedule::from_increments(inc);
}

// ---------------------------------------------------------------------------
// Sparse grids

double SparseGridDesign::coordinate(std::size_t point, int dim) const {
  const auto s = slots(point);
  return schedules_[static_cast<std::size_t>(dim)].coordinates()[s[static_cast<std::size_t>(dim)]];
}

PointMatrix SparseGridDesign::points() const {
  PointMatrix out(static_cast<Eigen::Index>(size()), d_);
  for (std::size_t p = 0; p < size(); ++p) {
    for (int i = 0; i < d_; ++i) out(static_cast<Eigen::Index>(p), i) = coordinate(p, i);
  }
  return out;
}

std::vector<Eigen::Index> SparseGridDesign::lattice_extents(std::size_t lattice) const {
  const MultiIndex& j = lattices_[lattice];
  std::vector<Eigen::Index> ext(static_cast<std::size_t>(d_));
  for (int i = 0; i < d_; ++i) {
    ext[static_cast<std::size_t>(i)] = static_cast<Eigen::Index>(
        schedules_[static_cast<std::size_t>(i)].size_at(j[static_cast<std::size_t>(i)]));
  }
  return ext;
}

namespace {

void check_schedules(const std::vector<ComponentSchedule>& schedules, int eta) {
  if (schedules.empty()) throw InvalidDesignError("sparse grid needs at least one schedule");
  const int d = static_cast<int>(schedules.size());
  if (eta < d) {
    throw InvalidLevelError("level of construction " + std::to_string(eta) +
                            " is below the dimension " + std::to_string(d));
  }
  const int needed = eta - d + 1;
  for (int i = 0; i < d; ++i) {
    if (schedules[static_cast<std::size_t>(i)].levels() < needed) {
      throw ScheduleTooShortError("schedule for dimension " + std::to_string(i + 1) + " has " +
                                  std::to_string(schedules[static_cast<std::size_t>(i)].levels()) +
                                  " levels; " + std::to_string(needed) + " are required");
    }
  }
}

// Advances a row-major odometer; returns false after the last position.
bool advance(std::vector<std::size_t>& pos, const std::vector<std::size_t>& ext) {
  for (std::size_t k = pos.size(); k-- > 0;) {
    if (++pos[k] < ext[k]) return true;
    pos[k] = 0;
  }
  return false;
}

}  // namespace

std::uint64_t sample_size(const std::vector<ComponentSchedule>& schedules, int eta) {
  check_schedules(schedules, eta);
  const int d = static_cast<int>(schedules.size());
  std::uint64_t total = 0;
  for (const auto& j : index_set_J(eta, d)) {
    std::uint64_t prod = 1;
    for (int i = 0; i < d; ++i) {
      prod *= schedules[static_cast<std::size_t>(i)].increment_size(j[static_cast<std::size_t>(i)]);
    }
    total += prod;
  }
  return total;
}

SparseGridDesign build_sparse_grid(std::vector<ComponentSchedule> schedules, int eta) {
  check_schedules(schedules, eta);
  const int d = static_cast<int>(schedules.size());
  const auto du = static_cast<std::size_t>(d);

  SparseGridDesign g;
  g.d_ = d;
  g.eta_ = eta;
  g.schedules_ = std::move(schedules);
  g.lattices_ = index_set_J(eta, d);
  const int p_min = std::max(d, eta - d + 1);
  g.first_p_ = static_cast<std::size_t>(
      std::find_if(g.lattices_.begin(), g.lattices_.end(),
                   [&](const MultiIndex& j) { return level_sum(j) >= p_min; }) -
      g.lattices_.begin());

  const auto& sch = g.schedules_;
  auto inc_size = [&](std::size_t i, int level) { return sch[i].increment_size(level); };

  // Blocks: one per multi-index, holding the points first introduced there.
  const std::size_t n_blocks = g.lattices_.size();
  std::vector<std::size_t> block_offset(n_blocks + 1, 0);
  for (std::size_t b = 0; b < n_blocks; ++b) {
    std::size_t prod = 1;
    for (std::size_t i = 0; i < du; ++i) prod *= inc_size(i, g.lattices_[b][i]);
    block_offset[b + 1] = block_offset[b] + prod;
  }
  const std::size_t n_points = block_offset.back();
  if (n_points > std::numeric_limits<std::uint32_t>::max()) {
    throw InvalidDesignError("sparse grid too large for 32-bit point ids");
  }

  g.slots_.resize(n_points * du);
  std::vector<std::size_t> pos(du), ext(du);
  for (std::size_t b = 0; b < n_blocks; ++b) {
    if (block_offset[b + 1] == block_offset[b]) continue;
    const MultiIndex& l = g.lattices_[b];
    for (std::size_t i = 0; i < du; ++i) ext[i] = inc_size(i, l[i]);
    std::fill(pos.begin(), pos.end(), 0);
    std::size_t p = block_offset[b];
    do {
      for (std::size_t i = 0; i < du; ++i) {
        g.slots_[p * du + i] = static_cast<std::uint32_t>(sch[i].size_at(l[i] - 1) + pos[i]);
      }
      ++p;
    } while (advance(pos, ext));
  }

  // Lattice maps: lattice j is the union of the blocks l <= j.
  g.map_offsets_.assign(n_blocks + 1, 0);
  for (std::size_t q = 0; q < n_blocks; ++q) {
    std::size_t prod = 1;
    for (std::size_t i = 0; i < du; ++i) prod *= sch[i].size_at(g.lattices_[q][i]);
    g.map_offsets_[q + 1] = g.map_offsets_[q] + prod;
  }
  g.map_data_.assign(g.map_offsets_.back(), std::numeric_limits<std::uint32_t>::max());

  std::vector<std::size_t> stride(du), sub(du), sub_ext(du), t(du), t_ext(du);
  MultiIndex l(du);
  for (std::size_t q = 0; q < n_blocks; ++q) {
    const MultiIndex& j = g.lattices_[q];
    std::size_t s = 1;
    for (std::size_t i = du; i-- > 0;) {
      stride[i] = s;
      s *= sch[i].size_at(j[i]);
    }
    std::uint32_t* map = g.map_data_.data() + g.map_offsets_[q];

    // Odometer over sub-blocks l with 1 <= l_i <= j_i.
    for (std::size_t i = 0; i < du; ++i) {
      sub[i] = 0;
      sub_ext[i] = static_cast<std::size_t>(j[i]);
    }
    do {
      std::size_t block_size = 1;
      for (std::size_t i = 0; i < du; ++i) {
        l[i] = static_cast<int>(sub[i]) + 1;
        t_ext[i] = inc_size(i, l[i]);
        block_size *= t_ext[i];
      }
      if (block_size == 0) continue;
      std::size_t p = block_offset[multi_index_rank(l)];
      std::fill(t.begin(), t.end(), 0);
      do {
        std::size_t lattice_pos = 0;
        for (std::size_t i = 0; i < du; ++i) lattice_pos += (sch[i].size_at(l[i] - 1) + t[i]) * stride[i];
        map[lattice_pos] = static_cast<std::uint32_t>(p++);
      } while (advance(t, t_ext));
    } while (advance(sub, sub_ext));
  }
  return g;
}

// ---------------------------------------------------------------------------
// Baseline designs

PointMatrix build_lattice(const std::vector<std::vector<double>>& designs_1d) {
  if (designs_1d.empty()) throw InvalidDesignError("lattice needs at least one dimension");
  std::vector<std::size_t> ext;
  for (const auto& x : designs_1d) {
    if (x.empty()) throw InvalidDesignError("empty one-dimensional design");
    std::set<double> uniq(x.begin(), x.end());
    if (uniq.size() != x.size()) throw InvalidDesignError("repeated point in one-dimensional design");
    ext.push_back(x.size());
  }
  const std::size_t n = std::accumulate(ext.begin(), ext.end(), std::size_t{1}, std::multiplies<>());
  const auto d = static_cast<Eigen::Index>(ext.size());
  PointMatrix out(static_cast<Eigen::Index>(n), d);
  std::vector<std::size_t> pos(ext.size(), 0);
  Eigen::Index row = 0;
  do {
    for (Eigen::Index i = 0; i < d; ++i) {
      out(row, i) = designs_1d[static_cast<std::size_t>(i)][pos[static_cast<std::size_t>(i)]];
    }
    ++row;
  } while (advance(pos, ext));
  return out;
}

PointMatrix build_lhs(int n, int d, std::uint64_t seed) {
  if (n < 1 || d < 1) throw InvalidDesignError("Latin hypercube needs n >= 1 and d >= 1");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  PointMatrix out(n, d);
  std::vector<int> perm(static_cast<std::size_t>(n));
  for (int col = 0; col < d; ++col) {
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng);
    for (int r = 0; r < n; ++r) {
      const int k = perm[static_cast<std::size_t>(r)];
      const double upper = static_cast<double>(k + 1) / n;
      double x = (k + unit(rng)) / n;
      if (x >= upper) x = std::nextafter(upper, 0.0);
      out(r, col) = x;
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Schedule files

std::vector<ComponentSchedule> read_schedule(std::istream& in, int d) {
  std::map<int, std::map<int, std::vector<double>>> by_dim;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    std::istringstream ls(line);
    int dim = 0;
    int level = 0;
    if (!(ls >> dim)) continue;
    if (!(ls >> level) || dim < 1 || level < 1) {
      throw ParseError("schedule line " + std::to_string(line_no) + ": expected `dim level coords...`");
    }
    auto& coords = by_dim[dim][level];
    if (!coords.empty()) {
      throw ParseError("schedule line " + std::to_string(line_no) + ": level listed twice");
    }
    double c = 0.0;
    while (ls >> c) coords.push_back(c);
    if (!ls.eof()) throw ParseError("schedule line " + std::to_string(line_no) + ": bad coordinate");
  }
  if (by_dim.empty()) throw ParseError("schedule file has no entries");

  auto to_schedule = [](int dim, const std::map<int, std::vector<double>>& levels) {
    std::vector<std::vector<double>> inc;
    int expected = 1;
    for (const auto& [level, coords] : levels) {
      if (level != expected) {
        throw ParseError("schedule for dimension " + std::to_string(dim) + " skips level " +
                         std::to_string(expected));
      }
      inc.push_back(coords);
      ++expected;
    }
    return ComponentSchedule::from_increments(inc);
  };

  std::vector<ComponentSchedule> out;
  if (by_dim.size() == 1 && by_dim.begin()->first == 1) {
    out.assign(static_cast<std::size_t>(d), to_schedule(1, by_dim.begin()->second));
    return out;
  }
  for (int i = 1; i <= d; ++i) {
    auto it = by_dim.find(i);
    if (it == by_dim.end()) throw ParseError("schedule file lacks dimension " + std::to_string(i));
    out.push_back(to_schedule(i, it->second));
  }
  if (static_cast<int>(by_dim.size()) != d) {
    throw ParseError("schedule file describes more dimensions than requested");
  }
  return out;
}

std::vector<ComponentSchedule> read_schedule_file(const std::string& path, int d) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open schedule file " + path);
  return read_schedule(in, d);
}

void write_schedule(std::ostream& out, const std::vector<ComponentSchedule>& schedules) {
  out << std::setprecision(17);
  for (std::size_t i = 0; i < schedules.size(); ++i) {
    const auto inc = schedules[i].increments();
    for (std::size_t k = 0; k < inc.size(); ++k) {
      out << (i + 1) << ' ' << (k + 1);
      for (double c : inc[k]) out << ' ' << c;
      out << '\n';
    }
  }
}

}  // namespace sgp
