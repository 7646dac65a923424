// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <variant>
#include <vector>

#include <nlohmann/json_fwd.hpp>

namespace drlamr
{

enum class CellId : std::uint32_t
{
};

constexpr std::uint32_t to_index(CellId id) { return static_cast<std::uint32_t>(id); }

struct Interval
{
  double lo = 0.0;
  double hi = 0.0;

  double width() const { return hi - lo; }
  double mid() const { return 0.5 * (lo + hi); }
  bool contains(const Interval &other) const { return lo <= other.lo && other.hi <= hi; }
  bool operator==(const Interval &) const = default;
};

struct MeshNode
{
  CellId id{};
  Interval interval;
  int level = 0;
  std::optional<CellId> parent;
  std::optional<std::array<CellId, 2>> children;
  bool active = true;
};

struct ActiveCell
{
  CellId id{};
  Interval interval;
  std::optional<CellId> left;
  std::optional<CellId> right;
};

struct Coarsened
{
  CellId parent{};
};
struct Infeasible
{
};
using CoarsenOutcome = std::variant<Coarsened, Infeasible>;

// Usage of the cell budget; p = active_count / max_cells.
struct ResourceGauge
{
  int active_count = 0;
  int max_cells = 1;
  double p() const { return static_cast<double>(active_count) / max_cells; }
};

// Binary refinement forest over an interval. The initial coarse partition is a
// row of equal root cells; each refine bisects an active leaf. Node ids are
// stable for the lifetime of a node and recycled after coarsening.
class TreeMesh1D
{
public:
  // Refinement beyond this level is refused; intervals get close to the
  // resolution of double precision well before level 1000 but 50 is plenty.
  static constexpr int kMaxLevel = 50;

  TreeMesh1D(Interval domain, int n_roots, int max_cells);

  std::vector<CellId> refine(CellId cell);
  CoarsenOutcome coarsen(CellId cell);

  // True when `cell` is active, has a parent, and its sibling is an active leaf.
  bool can_coarsen(CellId cell) const;

  std::vector<ActiveCell> active_cells() const;
  const std::vector<CellId> &active_ids() const { return active_; }
  std::vector<Interval> active_intervals() const;

  int active_count() const { return static_cast<int>(active_.size()); }
  int max_cells() const { return max_cells_; }
  void set_max_cells(int max_cells);
  double resource_fraction() const;
  ResourceGauge gauge() const { return {active_count(), max_cells_}; }

  const MeshNode &node(CellId id) const;
  bool is_active(CellId id) const;
  std::optional<CellId> sibling(CellId id) const;

  const Interval &domain() const { return domain_; }
  int n_roots() const { return static_cast<int>(roots_.size()); }
  const std::vector<CellId> &root_ids() const { return roots_; }
  double min_width() const;

  nlohmann::json to_json() const;
  static TreeMesh1D from_json(const nlohmann::json &j);

  // Rebuilds the tree from `n_roots` equal roots so that its active leaves are
  // exactly `cells`. Throws std::invalid_argument if they are not reachable by
  // bisection.
  static TreeMesh1D from_intervals(Interval domain, int n_roots, int max_cells,
                                   const std::vector<Interval> &cells);

private:
  CellId allocate(MeshNode node);
  void release(CellId id);
  MeshNode &mut_node(CellId id);
  std::size_t active_position(CellId id) const;

  Interval domain_;
  int max_cells_;
  std::vector<MeshNode> nodes_;
  std::vector<bool> alive_;
  std::vector<CellId> free_;
  std::vector<CellId> roots_;
  std::vector<CellId> active_;  // sorted by left endpoint
};

}  // namespace drlamr
