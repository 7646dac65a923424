// SPDX-License-Identifier: Apache-2.0

#include <random>
#include <variant>

#include <doctest.h>
#include <nlohmann/json.hpp>

#include "drlamr/error.hpp"
#include "drlamr/mesh/tree_mesh.hpp"

using namespace drlamr;

namespace
{

void check_partition(const TreeMesh1D &mesh)
{
  const auto cells = mesh.active_intervals();
  REQUIRE(!cells.empty());
  CHECK(cells.front().lo == mesh.domain().lo);
  CHECK(cells.back().hi == mesh.domain().hi);
  for (std::size_t i = 0; i + 1 < cells.size(); ++i)
  {
    CHECK(cells[i].hi == cells[i + 1].lo);
    CHECK(cells[i].width() > 0.0);
  }
  for (CellId id : mesh.active_ids())
  {
    const MeshNode &n = mesh.node(id);
    CHECK(n.active);
    CHECK(!n.children.has_value());
    if (n.parent)
    {
      const MeshNode &p = mesh.node(*n.parent);
      CHECK(p.level + 1 == n.level);
      CHECK(!p.active);
      REQUIRE(p.children.has_value());
      const auto &kids = *p.children;
      CHECK(mesh.node(kids[0]).interval.hi == p.interval.mid());
      CHECK(mesh.node(kids[1]).interval.lo == p.interval.mid());
    }
  }
}

}  // namespace

TEST_CASE("refine bisects the active leaf")
{
  TreeMesh1D mesh({0.0, 1.0}, 1, 25);
  const CellId root = mesh.active_ids().front();
  const auto kids = mesh.refine(root);
  REQUIRE(kids.size() == 2);
  CHECK(mesh.active_count() == 2);
  CHECK(mesh.active_intervals() == std::vector<Interval>{{0.0, 0.5}, {0.5, 1.0}});

  mesh.refine(kids[0]);
  CHECK(mesh.active_intervals() == std::vector<Interval>{{0.0, 0.25}, {0.25, 0.5}, {0.5, 1.0}});

  CHECK_THROWS_AS(mesh.refine(root), NotActive);
  check_partition(mesh);
}

TEST_CASE("coarsen restores the parent or reports infeasibility")
{
  TreeMesh1D mesh({0.0, 1.0}, 1, 25);
  const CellId root = mesh.active_ids().front();
  CHECK(std::holds_alternative<Infeasible>(mesh.coarsen(root)));
  CHECK(mesh.active_count() == 1);

  const auto kids = mesh.refine(root);
  auto outcome = mesh.coarsen(kids[0]);
  REQUIRE(std::holds_alternative<Coarsened>(outcome));
  CHECK(std::get<Coarsened>(outcome).parent == root);
  CHECK(mesh.active_intervals() == std::vector<Interval>{{0.0, 1.0}});

  SUBCASE("sibling with children blocks coarsening")
  {
    const auto k2 = mesh.refine(root);
    mesh.refine(k2[1]);
    CHECK(std::holds_alternative<Infeasible>(mesh.coarsen(k2[0])));
    CHECK(mesh.active_count() == 3);
  }
  SUBCASE("inactive node")
  {
    const auto k2 = mesh.refine(root);
    CHECK_THROWS_AS(mesh.coarsen(root), NotActive);
    (void)k2;
  }
}

TEST_CASE("active cells carry neighbour links")
{
  TreeMesh1D mesh({0.0, 1.0}, 1, 25);
  auto kids = mesh.refine(mesh.active_ids().front());
  auto grand = mesh.refine(kids[0]);
  auto cells = mesh.active_cells();
  REQUIRE(cells.size() == 3);
  CHECK(!cells[0].left);
  CHECK(cells[0].right == cells[1].id);
  CHECK(cells[1].left == cells[0].id);
  CHECK(cells[1].right == cells[2].id);
  CHECK(cells[2].left == cells[1].id);
  CHECK(!cells[2].right);

  mesh.coarsen(grand[1]);
  cells = mesh.active_cells();
  REQUIRE(cells.size() == 2);
  CHECK(cells[0].id == kids[0]);
  CHECK(cells[1].left == kids[0]);

  TreeMesh1D single({0.0, 1.0}, 1, 25);
  CHECK(!single.active_cells()[0].left);
  CHECK(!single.active_cells()[0].right);
}

TEST_CASE("resource fraction")
{
  TreeMesh1D mesh({0.0, 1.0}, 25, 25);
  CHECK(mesh.resource_fraction() == doctest::Approx(1.0));
  TreeMesh1D four({0.0, 1.0}, 4, 25);
  CHECK(four.resource_fraction() == doctest::Approx(0.16));
  TreeMesh1D over({0.0, 1.0}, 30, 25);
  CHECK(over.resource_fraction() == doctest::Approx(1.2));
}

TEST_CASE("refinement depth is bounded")
{
  TreeMesh1D mesh({0.0, 1.0}, 1, 25);
  CellId c = mesh.active_ids().front();
  for (int l = 0; l < TreeMesh1D::kMaxLevel; ++l)
  {
    c = mesh.refine(c)[0];
  }
  CHECK(mesh.node(c).level == TreeMesh1D::kMaxLevel);
  CHECK_THROWS_AS(mesh.refine(c), DepthLimit);
}

TEST_CASE("random refine/coarsen sequences keep the partition invariants")
{
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 50; ++trial)
  {
    TreeMesh1D mesh({-4.0, 4.0}, 1 + static_cast<int>(rng() % 5), 64);
    for (int op = 0; op < 200; ++op)
    {
      const auto &ids = mesh.active_ids();
      const CellId c = ids[rng() % ids.size()];
      const int before = mesh.active_count();
      if (rng() % 2 == 0 && mesh.node(c).level < 20)
      {
        const auto before_cells = mesh.active_intervals();
        const auto kids = mesh.refine(c);
        CHECK(mesh.active_count() == before + 1);
        if (rng() % 4 == 0)
        {
          // refine then coarsen is the identity on the active set
          REQUIRE(std::holds_alternative<Coarsened>(mesh.coarsen(kids[1])));
          CHECK(mesh.active_intervals() == before_cells);
        }
      }
      else
      {
        const bool feasible = mesh.can_coarsen(c);
        const auto outcome = mesh.coarsen(c);
        CHECK(std::holds_alternative<Coarsened>(outcome) == feasible);
        CHECK(mesh.active_count() == before - (feasible ? 1 : 0));
      }
    }
    check_partition(mesh);
  }
}

TEST_CASE("json snapshot reconstructs the active cells")
{
  TreeMesh1D mesh({0.0, 1.0}, 4, 25);
  mesh.refine(mesh.active_ids()[1]);
  mesh.refine(mesh.active_ids()[2]);
  const auto j = mesh.to_json();
  const TreeMesh1D back = TreeMesh1D::from_json(nlohmann::json::parse(j.dump()));
  CHECK(back.active_intervals() == mesh.active_intervals());
  CHECK(back.max_cells() == 25);
  CHECK(back.n_roots() == 4);

  CHECK_THROWS(TreeMesh1D::from_intervals({0.0, 1.0}, 1, 10, {{0.0, 0.3}, {0.3, 1.0}}));
}
