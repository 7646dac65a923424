// SPDX-License-Identifier: Apache-2.0

#include "drlamr/mesh/tree_mesh.hpp"

#include <algorithm>
#include <functional>
#include <limits>
#include <stdexcept>
#include <string>

#include <nlohmann/json.hpp>

#include "drlamr/error.hpp"

namespace drlamr
{

TreeMesh1D::TreeMesh1D(Interval domain, int n_roots, int max_cells)
  : domain_(domain), max_cells_(max_cells)
{
  if (!(domain.hi > domain.lo))
  {
    throw std::invalid_argument("TreeMesh1D: empty domain");
  }
  if (n_roots < 1)
  {
    throw std::invalid_argument("TreeMesh1D: need at least one root cell");
  }
  if (max_cells < 1)
  {
    throw std::invalid_argument("TreeMesh1D: max_cells must be positive");
  }
  const double h = domain.width() / n_roots;
  for (int i = 0; i < n_roots; ++i)
  {
    Interval iv{domain.lo + i * h, (i + 1 == n_roots) ? domain.hi : domain.lo + (i + 1) * h};
    const CellId id = allocate(MeshNode{{}, iv, 0, std::nullopt, std::nullopt, true});
    roots_.push_back(id);
    active_.push_back(id);
  }
}

CellId TreeMesh1D::allocate(MeshNode node)
{
  CellId id;
  if (!free_.empty())
  {
    id = free_.back();
    free_.pop_back();
    node.id = id;
    nodes_[to_index(id)] = node;
    alive_[to_index(id)] = true;
  }
  else
  {
    id = static_cast<CellId>(nodes_.size());
    node.id = id;
    nodes_.push_back(node);
    alive_.push_back(true);
  }
  return id;
}

void TreeMesh1D::release(CellId id)
{
  alive_[to_index(id)] = false;
  free_.push_back(id);
}

const MeshNode &TreeMesh1D::node(CellId id) const
{
  const auto i = to_index(id);
  if (i >= nodes_.size() || !alive_[i])
  {
    throw NotActive("cell " + std::to_string(i) + " does not exist");
  }
  return nodes_[i];
}

MeshNode &TreeMesh1D::mut_node(CellId id)
{
  return const_cast<MeshNode &>(std::as_const(*this).node(id));
}

bool TreeMesh1D::is_active(CellId id) const
{
  const auto i = to_index(id);
  return i < nodes_.size() && alive_[i] && nodes_[i].active;
}

std::size_t TreeMesh1D::active_position(CellId id) const
{
  const double lo = node(id).interval.lo;
  auto it = std::lower_bound(active_.begin(), active_.end(), lo,
                             [this](CellId a, double x) { return nodes_[to_index(a)].interval.lo < x; });
  if (it == active_.end() || *it != id)
  {
    throw NotActive("cell " + std::to_string(to_index(id)) + " is not an active leaf");
  }
  return static_cast<std::size_t>(it - active_.begin());
}

std::vector<CellId> TreeMesh1D::refine(CellId cell)
{
  if (!is_active(cell))
  {
    throw NotActive("refine: cell " + std::to_string(to_index(cell)) + " is not an active leaf");
  }
  const MeshNode parent = node(cell);
  if (parent.level + 1 > kMaxLevel)
  {
    throw DepthLimit("refine: level limit " + std::to_string(kMaxLevel) + " reached");
  }
  const std::size_t pos = active_position(cell);
  const double m = parent.interval.mid();

  const CellId c0 = allocate(MeshNode{{}, {parent.interval.lo, m}, parent.level + 1, cell, std::nullopt, true});
  const CellId c1 = allocate(MeshNode{{}, {m, parent.interval.hi}, parent.level + 1, cell, std::nullopt, true});
  MeshNode &p = mut_node(cell);
  p.children = std::array<CellId, 2>{c0, c1};
  p.active = false;

  active_[pos] = c0;
  active_.insert(active_.begin() + static_cast<std::ptrdiff_t>(pos) + 1, c1);
  return {c0, c1};
}

std::optional<CellId> TreeMesh1D::sibling(CellId id) const
{
  const MeshNode &n = node(id);
  if (!n.parent)
  {
    return std::nullopt;
  }
  const auto &kids = *node(*n.parent).children;
  return kids[0] == id ? kids[1] : kids[0];
}

bool TreeMesh1D::can_coarsen(CellId cell) const
{
  if (!is_active(cell))
  {
    return false;
  }
  const auto sib = sibling(cell);
  return sib && is_active(*sib);
}

CoarsenOutcome TreeMesh1D::coarsen(CellId cell)
{
  if (!is_active(cell))
  {
    throw NotActive("coarsen: cell " + std::to_string(to_index(cell)) + " is not an active leaf");
  }
  if (!can_coarsen(cell))
  {
    return Infeasible{};
  }
  const CellId parent = *node(cell).parent;
  const auto kids = *node(parent).children;
  const std::size_t pos = active_position(kids[0]);

  active_[pos] = parent;
  active_.erase(active_.begin() + static_cast<std::ptrdiff_t>(pos) + 1);
  release(kids[0]);
  release(kids[1]);
  MeshNode &p = mut_node(parent);
  p.children.reset();
  p.active = true;
  return Coarsened{parent};
}

std::vector<ActiveCell> TreeMesh1D::active_cells() const
{
  std::vector<ActiveCell> out;
  out.reserve(active_.size());
  for (std::size_t i = 0; i < active_.size(); ++i)
  {
    ActiveCell c{active_[i], nodes_[to_index(active_[i])].interval, std::nullopt, std::nullopt};
    if (i > 0)
    {
      c.left = active_[i - 1];
    }
    if (i + 1 < active_.size())
    {
      c.right = active_[i + 1];
    }
    out.push_back(c);
  }
  return out;
}

std::vector<Interval> TreeMesh1D::active_intervals() const
{
  std::vector<Interval> out;
  out.reserve(active_.size());
  for (CellId id : active_)
  {
    out.push_back(nodes_[to_index(id)].interval);
  }
  return out;
}

void TreeMesh1D::set_max_cells(int max_cells)
{
  if (max_cells < 1)
  {
    throw std::invalid_argument("TreeMesh1D: max_cells must be positive");
  }
  max_cells_ = max_cells;
}

double TreeMesh1D::resource_fraction() const
{
  return static_cast<double>(active_count()) / max_cells_;
}

double TreeMesh1D::min_width() const
{
  double h = std::numeric_limits<double>::infinity();
  for (CellId id : active_)
  {
    h = std::min(h, nodes_[to_index(id)].interval.width());
  }
  return h;
}

nlohmann::json TreeMesh1D::to_json() const
{
  nlohmann::json cells = nlohmann::json::array();
  for (const Interval &iv : active_intervals())
  {
    cells.push_back({iv.lo, iv.hi});
  }
  return {{"domain", {domain_.lo, domain_.hi}},
          {"n_roots", n_roots()},
          {"max_cells", max_cells_},
          {"cells", cells}};
}

TreeMesh1D TreeMesh1D::from_json(const nlohmann::json &j)
{
  const Interval domain{j.at("domain").at(0).get<double>(), j.at("domain").at(1).get<double>()};
  std::vector<Interval> cells;
  for (const auto &c : j.at("cells"))
  {
    cells.push_back({c.at(0).get<double>(), c.at(1).get<double>()});
  }
  return from_intervals(domain, j.at("n_roots").get<int>(), j.at("max_cells").get<int>(), cells);
}

TreeMesh1D TreeMesh1D::from_intervals(Interval domain, int n_roots, int max_cells,
                                      const std::vector<Interval> &cells)
{
  TreeMesh1D mesh(domain, n_roots, max_cells);
  std::vector<Interval> sorted = cells;
  std::sort(sorted.begin(), sorted.end(), [](const Interval &a, const Interval &b) { return a.lo < b.lo; });

  // Refine any active leaf that strictly contains a requested cell.
  std::size_t guard = 0;
  bool changed = true;
  while (changed)
  {
    changed = false;
    for (CellId id : std::vector<CellId>(mesh.active_ids()))
    {
      const Interval iv = mesh.node(id).interval;
      if (std::find(sorted.begin(), sorted.end(), iv) != sorted.end())
      {
        continue;
      }
      const bool splits = std::any_of(sorted.begin(), sorted.end(),
                                      [&](const Interval &c) { return iv.contains(c) && !(c == iv); });
      if (!splits)
      {
        throw std::invalid_argument("from_intervals: cell list is not a bisection refinement of the roots");
      }
      mesh.refine(id);
      changed = true;
      if (++guard > 1u << 24)
      {
        throw std::invalid_argument("from_intervals: runaway reconstruction");
      }
    }
  }
  if (mesh.active_intervals() != sorted)
  {
    throw std::invalid_argument("from_intervals: cell list does not partition the domain");
  }
  return mesh;
}

}  // namespace drlamr
