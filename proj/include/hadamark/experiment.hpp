#pragma once

#include <cmath>
#include <sstream>
#include <string>
#include <vector>

#include "hadamark/attacks.hpp"
#include "hadamark/codec.hpp"
#include "hadamark/format.hpp"
#include "hadamark/ga.hpp"
#include "hadamark/image.hpp"
#include "hadamark/metrics.hpp"

namespace hadamark {

struct NamedImage {
  std::string name;
  GrayImage image;
};

struct NamedWatermark {
  std::string name;
  BinaryWatermark mark;
};

/// Operator-comparison table: every crossover/mutation pair, `runs` seeded
/// runs each, all on the configured population/generation budget.
inline std::string table2_csv(const NamedWatermark& wm, int runs, const GAConfig& base) {
  const std::vector<Crossover> crossovers{Crossover::OX, Crossover::PMX, Crossover::CX,
                                          Crossover::ER, Crossover::X};
  const std::vector<Mutation> mutations{Mutation::InsM, Mutation::SwM, Mutation::InvM,
                                        Mutation::ScM};
  const auto table = run_experiment(wm.mark, crossovers, mutations, runs, base);
  std::ostringstream out;
  out << "crossover,mutation,nc0,av0,nc_final,av_final,iter\n";
  for (const auto& row : table)
    out << crossover_name(row.crossover) << "," << mutation_name(row.mutation) << ","
        << format_double(row.nc0) << "," << format_double(row.av0) << ","
        << format_double(row.nc_final) << "," << format_double(row.av_final) << ","
        << format_double(row.iter) << "\n";
  return out.str();
}

/// Imperceptibility sweep: PSNR and NC for b in {1.99, 2, 2.01}.
inline std::string table4_csv(const std::vector<NamedImage>& covers,
                              const std::vector<NamedWatermark>& wms, int order) {
  std::ostringstream out;
  out << "cover,watermark,b,psnr,nc\n";
  for (const auto& cover : covers)
    for (const auto& wm : wms)
      for (const double b : {2.01, 2.0, 1.99}) {
        const WatermarkKey key = make_key(wm.mark.side, cover.image.width, order, b);
        const GrayImage marked = embed(cover.image, wm.mark, key);
        out << cover.name << "," << wm.name << "," << format_double(b) << ","
            << format_double(psnr(cover.image, marked)) << ","
            << format_double(nc(wm.mark, extract(marked, key))) << "\n";
      }
  return out.str();
}

/// Robustness table: the four reference attacks against each cover/mark pair
/// at the given margin.
inline std::string table5_csv(const std::vector<NamedImage>& covers,
                              const std::vector<NamedWatermark>& wms, int order, double b,
                              std::uint64_t seed) {
  std::ostringstream out;
  out << "cover,watermark,attack,param,psnr,nc\n";
  std::uint64_t stream = 0;
  for (const auto& cover : covers)
    for (const auto& wm : wms) {
      const WatermarkKey key = make_key(wm.mark.side, cover.image.width, order, b);
      const std::vector<AttackSpec> specs{
          AttackSpec::jpeg(90),
          AttackSpec::jpeg(80),
          AttackSpec::gaussian(0.0, 0.001, mix_seed(seed, stream++)),
          AttackSpec::salt_pepper(0.01, mix_seed(seed, stream++)),
      };
      for (const auto& row : robustness_report(cover.image, wm.mark, key, specs))
        out << cover.name << "," << wm.name << "," << row.attack << ","
            << format_double(row.param) << "," << format_double(row.psnr) << ","
            << format_double(row.nc) << "\n";
    }
  return out.str();
}

/// GA-pretreatment table: the watermark is replaced by its GA-permuted image
/// (crossover X, inversion mutation); extraction uses the key to undo the
/// permutation. ga_nc is the correlation the GA achieved.
inline std::string table6_csv(const std::vector<NamedImage>& covers,
                              const std::vector<NamedWatermark>& wms, int order, double b,
                              const GAConfig& base) {
  std::ostringstream out;
  out << "cover,watermark,ga_nc,psnr,nc\n";
  std::uint64_t stream = 0;
  for (const auto& wm : wms) {
    GAConfig cfg = base;
    cfg.crossover = Crossover::X;
    cfg.mutation = Mutation::InvM;
    cfg.rng_seed = mix_seed(base.rng_seed, stream++);
    const auto [best, stats] = evolve(wm.mark, cfg);
    for (const auto& cover : covers) {
      WatermarkKey key = make_key(wm.mark.side, cover.image.width, order, b);
      key.perm = best.perm;
      key.rng_seed = cfg.rng_seed;
      const GrayImage marked = embed(cover.image, apply_permutation(wm.mark, key.perm), key);
      out << cover.name << "," << wm.name << "," << format_double(best.fitness) << ","
          << format_double(psnr(cover.image, marked)) << ","
          << format_double(nc(wm.mark, extract(marked, key))) << "\n";
    }
  }
  return out.str();
}

}  // namespace hadamark
