// SPDX-License-Identifier: Apache-2.0

#include "drlamr/indicators/indicators.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <unordered_set>
#include <variant>

#include "drlamr/error.hpp"

namespace drlamr::indicators
{

IndicatorKind parse_indicator(const std::string &name)
{
  if (name == "kelly")
  {
    return IndicatorKind::Kelly;
  }
  if (name == "gradient")
  {
    return IndicatorKind::GradientBased;
  }
  throw ConfigError("unknown indicator '" + name + "' (expected kelly or gradient)");
}

std::string to_string(IndicatorKind kind) { return kind == IndicatorKind::Kelly ? "kelly" : "gradient"; }

std::vector<double> kelly_indicator(const DGSolution &u, const KellyOptions &opts)
{
  const int n = u.n_cells();
  std::vector<double> eta2(n, 0.0);
  for (int k = 0; k + 1 < n; ++k)
  {
    const double x = u.cells[k].hi;
    const double jump = opts.a * (u.derivative_in(k, x) - u.derivative_in(k + 1, x));
    eta2[k] += u.cells[k].width() / 24.0 * jump * jump;
    eta2[k + 1] += u.cells[k + 1].width() / 24.0 * jump * jump;
  }
  if (opts.g_N && n > 0)
  {
    const double mismatch = opts.a * (*opts.g_N) - opts.a * u.derivative_in(n - 1, u.cells[n - 1].hi);
    eta2[n - 1] += u.cells[n - 1].width() / 24.0 * mismatch * mismatch;
  }
  for (double &e : eta2)
  {
    e = std::sqrt(e);
  }
  return eta2;
}

std::vector<double> gradient_indicator(const DGSolution &u)
{
  const int n = u.n_cells();
  std::vector<double> mid(n);
  for (int k = 0; k < n; ++k)
  {
    mid[k] = u.evaluate_in(k, u.cells[k].mid());
  }
  std::vector<double> g(n, 0.0);
  for (int k = 0; k < n; ++k)
  {
    // In 1D, Y = sum y y^T / |y|^2 is the neighbour count.
    double sum = 0.0;
    int count = 0;
    for (int nb : {k - 1, k + 1})
    {
      if (nb < 0 || nb >= n)
      {
        continue;
      }
      const double y = u.cells[nb].mid() - u.cells[k].mid();
      sum += (mid[nb] - mid[k]) / y;
      ++count;
    }
    if (count > 0)
    {
      const double h = u.cells[k].width();
      g[k] = h * std::sqrt(h) * std::abs(sum / count);
    }
  }
  return g;
}

MarkingStrategy MarkingStrategy::parse(const std::string &s)
{
  std::vector<std::string> parts;
  std::stringstream ss(s);
  for (std::string item; std::getline(ss, item, ':');)
  {
    parts.push_back(item);
  }
  if (parts.size() != 3)
  {
    throw ConfigError("marking strategy '" + s + "' must look like bulk:R:C or fixed:R:C");
  }
  MarkingStrategy m;
  if (parts[0] == "bulk")
  {
    m.kind = Kind::Bulk;
  }
  else if (parts[0] == "fixed")
  {
    m.kind = Kind::FixedFraction;
  }
  else
  {
    throw ConfigError("unknown marking strategy '" + parts[0] + "'");
  }
  try
  {
    std::size_t used = 0;
    m.refine_frac = std::stod(parts[1], &used);
    if (used != parts[1].size())
    {
      throw std::invalid_argument(parts[1]);
    }
    m.coarsen_frac = std::stod(parts[2], &used);
    if (used != parts[2].size())
    {
      throw std::invalid_argument(parts[2]);
    }
  }
  catch (const std::logic_error &)
  {
    throw ConfigError("marking strategy '" + s + "' has a malformed fraction");
  }
  m.validate();
  return m;
}

std::string MarkingStrategy::to_string() const
{
  std::ostringstream os;
  os << (kind == Kind::Bulk ? "bulk" : "fixed") << ':' << refine_frac << ':' << coarsen_frac;
  return os.str();
}

void MarkingStrategy::validate() const
{
  auto in_unit = [](double v) { return v >= 0.0 && v <= 1.0; };
  if (!in_unit(refine_frac) || !in_unit(coarsen_frac))
  {
    throw InvalidFractions("marking fractions must lie in [0, 1]");
  }
  if (kind == Kind::FixedFraction && refine_frac + coarsen_frac > 1.0 + 1e-12)
  {
    throw InvalidFractions("fixed-fraction refine + coarsen must not exceed 1");
  }
}

Marking mark(const std::vector<double> &scores, const MarkingStrategy &strategy, const std::vector<std::uint64_t> &keys)
{
  strategy.validate();
  const int n = static_cast<int>(scores.size());
  if (!keys.empty() && static_cast<int>(keys.size()) != n)
  {
    throw DimensionMismatch("mark: one tie-break key per score required");
  }
  for (double s : scores)
  {
    if (!(s >= 0.0))
    {
      throw InvalidFractions("mark: scores must be nonnegative");
    }
  }
  auto key = [&](int i) { return keys.empty() ? static_cast<std::uint64_t>(i) : keys[i]; };
  std::vector<int> desc(n), asc(n);
  std::iota(desc.begin(), desc.end(), 0);
  std::iota(asc.begin(), asc.end(), 0);
  std::sort(desc.begin(), desc.end(), [&](int a, int b) {
    return scores[a] != scores[b] ? scores[a] > scores[b] : key(a) < key(b);
  });
  std::sort(asc.begin(), asc.end(), [&](int a, int b) {
    return scores[a] != scores[b] ? scores[a] < scores[b] : key(a) < key(b);
  });

  Marking m;
  std::vector<char> refined(n, 0);
  if (strategy.kind == MarkingStrategy::Kind::Bulk)
  {
    const double total = std::accumulate(scores.begin(), scores.end(), 0.0);
    const double want_r = strategy.refine_frac * total;
    double acc = 0.0;
    for (int i = 0; i < n && acc < want_r; ++i)
    {
      acc += scores[desc[i]];
      m.refine.push_back(desc[i]);
      refined[desc[i]] = 1;
    }
    const double want_c = strategy.coarsen_frac * total;
    acc = 0.0;
    for (int i = 0; i < n && acc < want_c; ++i)
    {
      if (refined[asc[i]])
      {
        continue;
      }
      acc += scores[asc[i]];
      m.coarsen.push_back(asc[i]);
    }
  }
  else
  {
    // ceil with slack so that e.g. 0.1 * 30 does not round up to 4.
    auto count = [n](double f) { return std::min(n, static_cast<int>(std::ceil(f * n - 1e-9))); };
    const int nr = count(strategy.refine_frac);
    for (int i = 0; i < nr; ++i)
    {
      m.refine.push_back(desc[i]);
      refined[desc[i]] = 1;
    }
    const int nc = count(strategy.coarsen_frac);
    for (int i = 0; i < n && static_cast<int>(m.coarsen.size()) < nc; ++i)
    {
      if (!refined[asc[i]])
      {
        m.coarsen.push_back(asc[i]);
      }
    }
  }
  return m;
}

CycleOutcome heuristic_cycle(TreeMesh1D &mesh, const DGSolution &u, const IndicatorFn &indicator,
                             const MarkingStrategy &strategy, const SolveFn &solve, const HeuristicOptions &opts)
{
  const std::vector<CellId> ids = mesh.active_ids();
  const std::vector<double> scores = indicator(u);
  if (scores.size() != ids.size())
  {
    throw DimensionMismatch("heuristic_cycle: indicator size differs from the active cell count");
  }
  std::vector<std::uint64_t> keys(ids.size());
  for (std::size_t i = 0; i < ids.size(); ++i)
  {
    keys[i] = to_index(ids[i]);
  }
  const Marking marks = mark(scores, strategy, keys);

  CycleOutcome out;
  const int n_before = mesh.active_count();
  std::unordered_set<std::uint32_t> to_coarsen;
  for (int i : marks.coarsen)
  {
    to_coarsen.insert(to_index(ids[i]));
  }
  int cells_coarsened = 0;
  for (int i : marks.coarsen)
  {
    const CellId c = ids[i];
    if (!mesh.is_active(c))
    {
      continue;  // already merged with its sibling
    }
    const auto sib = mesh.sibling(c);
    if (!sib || !to_coarsen.count(to_index(*sib)) || !mesh.can_coarsen(c))
    {
      continue;
    }
    if (std::holds_alternative<Coarsened>(mesh.coarsen(c)))
    {
      ++out.n_coarsen;
      cells_coarsened += 2;
    }
  }
  for (int i : marks.refine)
  {
    const CellId c = ids[i];
    const MeshNode &node = mesh.node(c);
    if (opts.max_refinement_depth && node.level >= *opts.max_refinement_depth)
    {
      continue;
    }
    if (0.5 * node.interval.width() < opts.min_cell_width)
    {
      continue;
    }
    mesh.refine(c);
    ++out.n_refine;
  }
  out.n_nothing = n_before - out.n_refine - cells_coarsened;
  out.u = solve(mesh, u);
  return out;
}

}  // namespace drlamr::indicators
