#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <fstream>
#include <functional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "hadamark/image.hpp"
#include "hadamark/metrics.hpp"
#include "hadamark/rng.hpp"

namespace hadamark {

/// Position map on flattened (row-major) watermark pixels, 0-based:
/// output bit at perm[i] equals input bit at i.
using Perm = std::vector<std::int32_t>;

inline bool is_permutation_of_n(const Perm& p) {
  std::vector<std::uint8_t> seen(p.size(), 0);
  for (auto v : p) {
    if (v < 0 || static_cast<std::size_t>(v) >= p.size() || seen[v]) return false;
    seen[v] = 1;
  }
  return true;
}

inline Perm identity_perm(std::size_t n) {
  Perm p(n);
  for (std::size_t i = 0; i < n; ++i) p[i] = static_cast<std::int32_t>(i);
  return p;
}

inline Perm inverse_perm(const Perm& p) {
  Perm inv(p.size());
  for (std::size_t i = 0; i < p.size(); ++i) inv[p[i]] = static_cast<std::int32_t>(i);
  return inv;
}

inline Perm random_perm(std::size_t n, Rng& rng) {
  Perm p = identity_perm(n);
  rng.shuffle(p);
  return p;
}

inline BinaryWatermark apply_permutation(const BinaryWatermark& wm, const Perm& perm) {
  if (perm.size() != wm.bits.size())
    throw std::invalid_argument("apply_permutation: length mismatch");
  if (!is_permutation_of_n(perm))
    throw std::invalid_argument("apply_permutation: not a bijection");
  std::vector<std::uint8_t> out(wm.bits.size());
  for (std::size_t i = 0; i < wm.bits.size(); ++i) out[perm[i]] = wm.bits[i];
  return BinaryWatermark(wm.side, std::move(out));
}

enum class Crossover { X, OX, PMX, CX, ER };
enum class Mutation { InsM, SwM, InvM, ScM };

inline std::string crossover_name(Crossover c) {
  switch (c) {
    case Crossover::X: return "X";
    case Crossover::OX: return "OX";
    case Crossover::PMX: return "PMX";
    case Crossover::CX: return "CX";
    case Crossover::ER: return "ER";
  }
  throw std::logic_error("crossover_name");
}

inline std::string mutation_name(Mutation m) {
  switch (m) {
    case Mutation::InsM: return "InsM";
    case Mutation::SwM: return "SwM";
    case Mutation::InvM: return "InvM";
    case Mutation::ScM: return "ScM";
  }
  throw std::logic_error("mutation_name");
}

inline Crossover parse_crossover(const std::string& s) {
  if (s == "X") return Crossover::X;
  if (s == "OX") return Crossover::OX;
  if (s == "PMX") return Crossover::PMX;
  if (s == "CX") return Crossover::CX;
  if (s == "ER") return Crossover::ER;
  throw std::invalid_argument("unknown crossover: " + s);
}

inline Mutation parse_mutation(const std::string& s) {
  if (s == "InsM") return Mutation::InsM;
  if (s == "SwM") return Mutation::SwM;
  if (s == "InvM") return Mutation::InvM;
  if (s == "ScM") return Mutation::ScM;
  throw std::invalid_argument("unknown mutation: " + s);
}

struct GAConfig {
  int pop_size = 20;
  int generations = 50;
  double selection_pressure = 1.5;  // s in [1,2]
  Crossover crossover = Crossover::X;
  Mutation mutation = Mutation::InvM;
  std::uint64_t rng_seed = 0;

  void validate() const {
    if (pop_size < 4) throw std::invalid_argument("GAConfig: pop_size must be >= 4");
    if (selection_pressure < 1.0 || selection_pressure > 2.0)
      throw std::invalid_argument("GAConfig: selection pressure must lie in [1,2]");
    if (generations < 0) throw std::invalid_argument("GAConfig: generations must be >= 0");
  }
};

struct RunStats {
  double nc0 = 1.0;       // best NC in the initial population
  double nc_final = 1.0;  // best NC at the last generation
  int found_at = 0;       // generation of the first occurrence of nc_final
  std::vector<double> per_generation_best;  // index 0 = initial population
};

/// Fixed data derived from the original watermark, shared by all GA
/// operators of one search.
struct GAContext {
  int length = 0;  // m^2
  int k = 0;       // white count
  std::vector<std::uint8_t> white_mask;           // 1 where the original bit is 1
  std::vector<std::int32_t> whites, blacks;       // positions, ascending

  explicit GAContext(const BinaryWatermark& original)
      : length(static_cast<int>(original.bits.size())), white_mask(original.bits) {
    for (int i = 0; i < length; ++i)
      (original.bits[i] ? whites : blacks).push_back(i);
    k = static_cast<int>(whites.size());
  }
};

/// GA genotype: a full permutation plus its derived white-position set and
/// cached fitness (NC against the original watermark; lower is fitter).
struct Individual {
  Perm perm;
  std::vector<std::int32_t> white_set;  // sorted, |white_set| == k
  double fitness = 1.0;
  std::uint64_t age = 0;

  static Individual from_perm(const GAContext& ctx, Perm p) {
    Individual ind;
    ind.white_set.reserve(ctx.k);
    for (auto w : ctx.whites) ind.white_set.push_back(p[w]);
    std::sort(ind.white_set.begin(), ind.white_set.end());
    ind.perm = std::move(p);
    ind.fitness = fitness_of(ctx, ind.white_set);
    return ind;
  }

  /// Builds the canonical permutation for a given white set: original white
  /// positions (ascending) map onto the white set (ascending), black
  /// positions onto the complement (ascending).
  static Individual from_white_set(const GAContext& ctx, std::vector<std::int32_t> ws) {
    std::sort(ws.begin(), ws.end());
    std::vector<std::uint8_t> in_ws(ctx.length, 0);
    for (auto v : ws) in_ws[v] = 1;
    Perm p(ctx.length);
    for (std::size_t t = 0; t < ws.size(); ++t) p[ctx.whites[t]] = ws[t];
    std::size_t t = 0;
    for (std::int32_t v = 0; v < ctx.length; ++v)
      if (!in_ws[v]) p[ctx.blacks[t++]] = v;
    Individual ind;
    ind.perm = std::move(p);
    ind.white_set = std::move(ws);
    ind.fitness = fitness_of(ctx, ind.white_set);
    return ind;
  }

  static double fitness_of(const GAContext& ctx, const std::vector<std::int32_t>& ws) {
    int overlap = 0;
    for (auto v : ws) overlap += ctx.white_mask[v];
    return static_cast<double>(overlap) / static_cast<double>(ctx.k);
  }
};

/// Fitness per the scheme: NC between the permuted image and the original
/// watermark; equals white-overlap / k for equal-k binary marks.
inline double fitness(const BinaryWatermark& original, const Individual& ind) {
  return nc(original, apply_permutation(original, ind.perm));
}

/// Linear-ranking selection probability for the individual of rank i
/// (1 = worst, mu = fittest): P_i = (2-s)/mu + 2(i-1)(s-1)/(mu(mu-1)).
inline double rank_probability(int mu, double s, int rank) {
  return (2.0 - s) / mu + 2.0 * (rank - 1) * (s - 1.0) / (static_cast<double>(mu) * (mu - 1));
}

/// Draws a rank index (0-based position in a worst-first ranking) with the
/// linear-ranking probabilities.
inline int select_rank_index(int mu, double s, Rng& rng) {
  const double u = rng.real01();
  double acc = 0.0;
  for (int i = 0; i < mu; ++i) {
    acc += rank_probability(mu, s, i + 1);
    if (u < acc) return i;
  }
  return mu - 1;  // floating-point slack
}

/// The subset-recombination crossover with an explicit mixing ratio r: a
/// random floor(k*r)-subset S of the fitter parent's white set joined with a
/// random (k - floor(k*r))-subset of other's whites minus S.
inline Individual crossover_x_with_ratio(const GAContext& ctx, const Individual& a,
                                         const Individual& b, double r, Rng& rng) {
  const Individual& fitter = (b.fitness < a.fitness) ? b : a;
  const Individual& other = (b.fitness < a.fitness) ? a : b;
  if (fitter.white_set.size() != other.white_set.size())
    throw std::invalid_argument("crossover_x: mismatched white counts");
  const int k = ctx.k;
  const int take = static_cast<int>(std::floor(k * r));

  std::vector<std::int32_t> child;
  child.reserve(k);
  std::vector<std::uint8_t> chosen(ctx.length, 0);
  for (auto idx : rng.sample(k, take)) {
    child.push_back(fitter.white_set[idx]);
    chosen[fitter.white_set[idx]] = 1;
  }
  std::vector<std::int32_t> pool;  // other's whites minus S
  pool.reserve(k);
  for (auto v : other.white_set)
    if (!chosen[v]) pool.push_back(v);
  // |pool| = k - |S2 & S| >= k - take, so the pool always suffices
  const int need = k - take;
  for (auto idx : rng.sample(static_cast<std::int32_t>(pool.size()), need))
    child.push_back(pool[idx]);
  return Individual::from_white_set(ctx, std::move(child));
}

/// Crossover X as used by the GA: r drawn uniformly from [0.5, 1].
inline Individual crossover_x(const GAContext& ctx, const Individual& a, const Individual& b,
                              Rng& rng) {
  const double r = rng.uniform_real(0.5, 1.0);
  return crossover_x_with_ratio(ctx, a, b, r, rng);
}

namespace detail {

inline Perm ox_child(const Perm& keep, const Perm& fill, int a, int b) {
  const int n = static_cast<int>(keep.size());
  Perm child(n, -1);
  std::vector<std::uint8_t> used(n, 0);
  for (int p = a; p <= b; ++p) {
    child[p] = keep[p];
    used[keep[p]] = 1;
  }
  int write = (b + 1) % n;
  for (int step = 0; step < n; ++step) {
    const std::int32_t v = fill[(b + 1 + step) % n];
    if (!used[v]) {
      child[write] = v;
      used[v] = 1;
      write = (write + 1) % n;
    }
  }
  return child;
}

inline Perm pmx_child(const Perm& seg, const Perm& rest, int a, int b) {
  const int n = static_cast<int>(seg.size());
  Perm child(n, -1);
  std::vector<std::int32_t> pos_rest(n);
  for (int p = 0; p < n; ++p) pos_rest[rest[p]] = p;
  std::vector<std::uint8_t> placed(n, 0);
  for (int p = a; p <= b; ++p) {
    child[p] = seg[p];
    placed[seg[p]] = 1;
  }
  for (int p = a; p <= b; ++p) {
    const std::int32_t e = rest[p];
    if (placed[e]) continue;
    int q = p;
    do q = pos_rest[seg[q]];
    while (q >= a && q <= b);
    child[q] = e;
    placed[e] = 1;
  }
  for (int p = 0; p < n; ++p)
    if (child[p] < 0) child[p] = rest[p];
  return child;
}

inline std::pair<Perm, Perm> cx_children(const Perm& p1, const Perm& p2) {
  const int n = static_cast<int>(p1.size());
  std::vector<std::int32_t> pos1(n);
  for (int p = 0; p < n; ++p) pos1[p1[p]] = p;
  std::vector<std::int32_t> cycle(n, -1);
  std::int32_t cid = 0;
  for (int start = 0; start < n; ++start) {
    if (cycle[start] >= 0) continue;
    int pos = start;
    while (cycle[pos] < 0) {
      cycle[pos] = cid;
      pos = pos1[p2[pos]];
    }
    ++cid;
  }
  Perm c1(n), c2(n);
  for (int p = 0; p < n; ++p) {
    const bool even = (cycle[p] % 2) == 0;
    c1[p] = even ? p1[p] : p2[p];
    c2[p] = even ? p2[p] : p1[p];
  }
  return {std::move(c1), std::move(c2)};
}

inline Perm er_child(const Perm& p1, const Perm& p2, Rng& rng) {
  const int n = static_cast<int>(p1.size());
  // union adjacency table; each element has at most 4 neighbours
  std::vector<std::array<std::int32_t, 4>> adj(n);
  std::vector<std::int32_t> deg(n, 0);
  auto add_edge = [&](std::int32_t u, std::int32_t v) {
    for (int t = 0; t < deg[u]; ++t)
      if (adj[u][t] == v) return;
    adj[u][deg[u]++] = v;
  };
  for (const Perm* par : {&p1, &p2})
    for (int p = 0; p < n; ++p) {
      if (p > 0) add_edge((*par)[p], (*par)[p - 1]);
      if (p + 1 < n) add_edge((*par)[p], (*par)[p + 1]);
    }
  auto remove_ref = [&](std::int32_t from, std::int32_t v) {
    for (int t = 0; t < deg[from]; ++t)
      if (adj[from][t] == v) {
        adj[from][t] = adj[from][deg[from] - 1];
        --deg[from];
        return;
      }
  };

  std::vector<std::uint8_t> visited(n, 0);
  std::vector<std::int32_t> unused(n);       // pool for the dead-end fallback
  std::vector<std::int32_t> pool_pos(n);
  for (int i = 0; i < n; ++i) unused[i] = pool_pos[i] = i;
  auto take_from_pool = [&](std::int32_t v) {
    const auto i = pool_pos[v];
    const auto last = unused.back();
    unused[i] = last;
    pool_pos[last] = i;
    unused.pop_back();
  };

  Perm child;
  child.reserve(n);
  std::int32_t current = p1[0];
  for (int step = 0; step < n; ++step) {
    child.push_back(current);
    visited[current] = 1;
    take_from_pool(current);
    for (int t = 0; t < deg[current]; ++t) remove_ref(adj[current][t], current);
    if (step + 1 == n) break;
    std::array<std::int32_t, 4> best{};
    int best_count = 0, best_deg = 5;
    for (int t = 0; t < deg[current]; ++t) {
      const std::int32_t v = adj[current][t];
      if (visited[v]) continue;
      if (deg[v] < best_deg) {
        best_deg = deg[v];
        best_count = 0;
      }
      if (deg[v] == best_deg) best[best_count++] = v;
    }
    if (best_count > 0) {
      std::sort(best.begin(), best.begin() + best_count);
      current = best[best_count == 1 ? 0 : rng.uniform_below(best_count)];
    } else {
      current = unused[rng.uniform_below(unused.size())];
    }
  }
  return child;
}

}  // namespace detail

/// Classical order-based crossovers. OX/PMX/CX produce two children from one
/// parent pair; ER produces one child, returned twice.
inline std::pair<Perm, Perm> crossover_classical(Crossover kind, const Perm& p1, const Perm& p2,
                                                 Rng& rng) {
  if (p1.size() != p2.size()) throw std::invalid_argument("crossover: length mismatch");
  const int n = static_cast<int>(p1.size());
  switch (kind) {
    case Crossover::OX:
    case Crossover::PMX: {
      int a = static_cast<int>(rng.uniform_below(n));
      int b = static_cast<int>(rng.uniform_below(n));
      if (a > b) std::swap(a, b);
      if (kind == Crossover::OX)
        return {detail::ox_child(p1, p2, a, b), detail::ox_child(p2, p1, a, b)};
      return {detail::pmx_child(p1, p2, a, b), detail::pmx_child(p2, p1, a, b)};
    }
    case Crossover::CX:
      return detail::cx_children(p1, p2);
    case Crossover::ER: {
      Perm c = detail::er_child(p1, p2, rng);
      return {c, c};
    }
    case Crossover::X:
      throw std::invalid_argument("crossover_classical: X is not a permutation-array operator");
  }
  throw std::logic_error("crossover_classical");
}

inline Perm mutate(Mutation kind, const Perm& perm, Rng& rng) {
  Perm out = perm;
  const auto n = static_cast<std::int32_t>(perm.size());
  if (n < 2) return out;
  switch (kind) {
    case Mutation::InsM: {
      const auto [i, j] = rng.distinct_pair(n);
      const std::int32_t v = out[i];
      out.erase(out.begin() + i);
      out.insert(out.begin() + j, v);
      break;
    }
    case Mutation::SwM: {
      const auto [i, j] = rng.distinct_pair(n);
      std::swap(out[i], out[j]);
      break;
    }
    case Mutation::InvM: {
      auto [i, j] = rng.distinct_pair(n);
      if (i > j) std::swap(i, j);
      std::reverse(out.begin() + i, out.begin() + j + 1);
      break;
    }
    case Mutation::ScM: {
      auto [i, j] = rng.distinct_pair(n);
      if (i > j) std::swap(i, j);
      for (std::int32_t t = j; t > i; --t) {
        const auto u = i + static_cast<std::int32_t>(rng.uniform_below(t - i + 1));
        std::swap(out[t], out[u]);
      }
      break;
    }
  }
  return out;
}

namespace detail {

// worst first: highest NC first; equal fitness ranked by age, older first
inline void sort_worst_first(std::vector<Individual>& pop) {
  std::sort(pop.begin(), pop.end(), [](const Individual& a, const Individual& b) {
    if (a.fitness != b.fitness) return a.fitness > b.fitness;
    return a.age < b.age;
  });
}

inline bool duplicates_any(const std::vector<std::int32_t>& ws, const std::vector<Individual>& pop,
                           const std::vector<Individual>& extra) {
  for (const auto& ind : pop)
    if (ind.white_set == ws) return true;
  for (const auto& ind : extra)
    if (ind.white_set == ws) return true;
  return false;
}

}  // namespace detail

/// Called after every generation with the current population; for
/// diagnostics and tests.
using GenerationObserver = std::function<void(int generation, const std::vector<Individual>&)>;

/// Steady-state GA searching for a permutation of the watermark minimally
/// correlated with the original. Per generation: two crossover offspring and
/// one mutation offspring replace the three worst members; the fittest
/// individual always survives; no two members of a generation share a white
/// set. Fully deterministic for a given seed.
inline std::pair<Individual, RunStats> evolve(const BinaryWatermark& original, const GAConfig& cfg,
                                              const GenerationObserver& observer = {}) {
  cfg.validate();
  const GAContext ctx(original);
  if (ctx.k == 0 || ctx.k == ctx.length)
    throw std::invalid_argument("evolve: watermark is all-black or all-white, nothing to permute");

  Rng rng(cfg.rng_seed);
  const int mu = cfg.pop_size;
  std::uint64_t next_age = 0;
  std::vector<Individual> pop;
  pop.reserve(mu);
  const std::vector<Individual> no_extra;
  int guard = 0;
  while (static_cast<int>(pop.size()) < mu) {
    Individual ind = Individual::from_perm(ctx, random_perm(ctx.length, rng));
    if (detail::duplicates_any(ind.white_set, pop, no_extra)) {
      if (++guard > 1000 * mu)
        throw std::runtime_error("evolve: cannot seed a duplicate-free population this large");
      continue;
    }
    ind.age = next_age++;
    pop.push_back(std::move(ind));
  }

  RunStats stats;
  auto best_nc = [&pop] {
    double best = 2.0;
    for (const auto& ind : pop) best = std::min(best, ind.fitness);
    return best;
  };
  stats.nc0 = best_nc();
  stats.per_generation_best.push_back(stats.nc0);

  const double s = cfg.selection_pressure;
  for (int gen = 1; gen <= cfg.generations; ++gen) {
    detail::sort_worst_first(pop);
    auto select = [&]() -> const Individual& { return pop[select_rank_index(mu, s, rng)]; };

    std::vector<Individual> offspring;
    offspring.reserve(3);
    auto admit = [&](Individual cand) {
      // no-duplicates policy: mutate colliding offspring, give up after 50 tries
      for (int retry = 0; retry < 50 && detail::duplicates_any(cand.white_set, pop, offspring);
           ++retry)
        cand = Individual::from_perm(ctx, mutate(Mutation::SwM, cand.perm, rng));
      if (!detail::duplicates_any(cand.white_set, pop, offspring)) {
        cand.age = next_age++;
        offspring.push_back(std::move(cand));
      }
    };

    if (cfg.crossover == Crossover::X) {
      for (int c = 0; c < 2; ++c) {
        const Individual& pa = select();
        const Individual& pb = select();
        admit(crossover_x(ctx, pa, pb, rng));
      }
    } else {
      const Individual& pa = select();
      const Individual& pb = select();
      auto [c1, c2] = crossover_classical(cfg.crossover, pa.perm, pb.perm, rng);
      admit(Individual::from_perm(ctx, std::move(c1)));
      admit(Individual::from_perm(ctx, std::move(c2)));
    }
    admit(Individual::from_perm(ctx, mutate(cfg.mutation, select().perm, rng)));

    // offspring replace the worst members
    detail::sort_worst_first(pop);
    pop.erase(pop.begin(), pop.begin() + offspring.size());
    for (auto& ind : offspring) pop.push_back(std::move(ind));

    stats.per_generation_best.push_back(best_nc());
    if (observer) observer(gen, pop);
  }

  stats.nc_final = stats.per_generation_best.back();
  for (std::size_t g = 0; g < stats.per_generation_best.size(); ++g)
    if (stats.per_generation_best[g] == stats.nc_final) {
      stats.found_at = static_cast<int>(g);
      break;
    }

  const Individual* best = &pop.front();
  for (const auto& ind : pop)
    if (ind.fitness < best->fitness || (ind.fitness == best->fitness && ind.age < best->age))
      best = &ind;
  return {*best, std::move(stats)};
}

/// Text export of a permutation: first line the watermark side m, second
/// line the m^2 permutation images, 1-based, space-separated.
inline void save_permutation_text(const Perm& perm, int m, const std::string& path) {
  if (perm.size() != static_cast<std::size_t>(m) * m)
    throw std::invalid_argument("save_permutation_text: length != m^2");
  if (!is_permutation_of_n(perm))
    throw std::invalid_argument("save_permutation_text: not a bijection");
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << m << "\n";
  for (std::size_t i = 0; i < perm.size(); ++i) out << (i ? " " : "") << perm[i] + 1;
  out << "\n";
  if (!out) throw std::runtime_error("I/O failure writing " + path);
}

struct ExperimentRow {
  Crossover crossover;
  Mutation mutation;
  double nc0 = 1.0;      // best initial NC over all runs
  double av0 = 1.0;      // mean initial best
  double nc_final = 1.0; // best final NC over all runs
  double av_final = 1.0; // mean final best
  double iter = 0.0;     // mean generation where the final best first appeared
};

/// Runs the full operator-comparison experiment: every (crossover, mutation)
/// pair, `runs` independent seeded runs each.
inline std::vector<ExperimentRow> run_experiment(const BinaryWatermark& original,
                                                 const std::vector<Crossover>& crossovers,
                                                 const std::vector<Mutation>& mutations, int runs,
                                                 const GAConfig& base) {
  if (runs < 1) throw std::invalid_argument("run_experiment: runs must be >= 1");
  std::vector<ExperimentRow> table;
  std::uint64_t stream = 0;
  for (auto cx : crossovers)
    for (auto mu : mutations) {
      ExperimentRow row;
      row.crossover = cx;
      row.mutation = mu;
      double sum0 = 0.0, sum_final = 0.0, sum_iter = 0.0;
      double best0 = 2.0, best_final = 2.0;
      for (int r = 0; r < runs; ++r) {
        GAConfig cfg = base;
        cfg.crossover = cx;
        cfg.mutation = mu;
        cfg.rng_seed = mix_seed(base.rng_seed, stream++);
        const auto [ind, stats] = evolve(original, cfg);
        sum0 += stats.nc0;
        sum_final += stats.nc_final;
        sum_iter += stats.found_at;
        best0 = std::min(best0, stats.nc0);
        best_final = std::min(best_final, stats.nc_final);
      }
      row.nc0 = best0;
      row.av0 = sum0 / runs;
      row.nc_final = best_final;
      row.av_final = sum_final / runs;
      row.iter = sum_iter / runs;
      table.push_back(row);
    }
  return table;
}

}  // namespace hadamark
