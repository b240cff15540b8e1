// hadamark: blind Hadamard-domain watermarking with GA watermark pretreatment.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "hadamark/attacks.hpp"
#include "hadamark/codec.hpp"
#include "hadamark/experiment.hpp"
#include "hadamark/ga.hpp"
#include "hadamark/image_io.hpp"
#include "hadamark/key_io.hpp"
#include "hadamark/metrics.hpp"

namespace {

using namespace hadamark;

void write_text(const std::string& text, const std::string& path) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << text;
}

std::string stem_of(const std::string& path) {
  return std::filesystem::path(path).stem().string();
}

std::vector<NamedImage> load_covers(const std::vector<std::string>& paths) {
  std::vector<NamedImage> covers;
  for (const auto& p : paths) covers.push_back({stem_of(p), load_gray(p)});
  return covers;
}

std::vector<NamedWatermark> load_marks(const std::vector<std::string>& paths) {
  std::vector<NamedWatermark> wms;
  for (const auto& p : paths) wms.push_back({stem_of(p), load_watermark(p)});
  return wms;
}

struct GaOptions {
  std::string watermark;
  std::string crossover = "X";
  std::string mutation = "InvM";
  int pop = 20;
  int gens = 50;
  double pressure = 1.5;
  int runs = 1;
  std::uint64_t seed = 42;
  std::string out_key;
  std::string out_perm;
  int cover_side = 512;
  int order = 8;
  double b = -1.0;  // <0 -> default_b(order)
};

int cmd_ga(const GaOptions& opt) {
  const BinaryWatermark wm = load_watermark(opt.watermark);
  GAConfig cfg;
  cfg.pop_size = opt.pop;
  cfg.generations = opt.gens;
  cfg.selection_pressure = opt.pressure;
  cfg.crossover = parse_crossover(opt.crossover);
  cfg.mutation = parse_mutation(opt.mutation);

  Individual best;
  double best_nc = 2.0;
  double sum0 = 0.0, sum_final = 0.0, sum_iter = 0.0;
  double min0 = 2.0, min_final = 2.0;
  for (int r = 0; r < opt.runs; ++r) {
    cfg.rng_seed = mix_seed(opt.seed, static_cast<std::uint64_t>(r));
    auto [ind, stats] = evolve(wm, cfg);
    std::cout << "run " << r << ": nc0=" << format_double(stats.nc0)
              << " nc_final=" << format_double(stats.nc_final) << " found_at=" << stats.found_at
              << "\n";
    sum0 += stats.nc0;
    sum_final += stats.nc_final;
    sum_iter += stats.found_at;
    min0 = std::min(min0, stats.nc0);
    min_final = std::min(min_final, stats.nc_final);
    if (ind.fitness < best_nc) {
      best_nc = ind.fitness;
      best = std::move(ind);
    }
  }
  std::cout << "aggregate: nc0=" << format_double(min0) << " av0=" << format_double(sum0 / opt.runs)
            << " nc_final=" << format_double(min_final)
            << " av_final=" << format_double(sum_final / opt.runs)
            << " iter=" << format_double(sum_iter / opt.runs) << "\n";

  if (!opt.out_key.empty()) {
    WatermarkKey key = make_key(wm.side, opt.cover_side, opt.order,
                                opt.b < 0 ? default_b(opt.order, Encoding::Byte) : opt.b);
    key.perm = best.perm;
    key.rng_seed = opt.seed;
    save_key(key, opt.out_key);
    std::cout << "key written to " << opt.out_key << "\n";
  }
  if (!opt.out_perm.empty()) save_permutation_text(best.perm, wm.side, opt.out_perm);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Blind Hadamard-domain image watermarking toolkit"};
  app.require_subcommand(1);

  // --- ga ---
  GaOptions ga;
  auto* cga = app.add_subcommand("ga", "Search for a minimally correlated watermark permutation");
  cga->add_option("--watermark", ga.watermark, "Watermark file (PBM, or PGM/PNG thresholded)")
      ->required();
  cga->add_option("--crossover", ga.crossover, "X, OX, PMX, CX or ER");
  cga->add_option("--mutation", ga.mutation, "InsM, SwM, InvM or ScM");
  cga->add_option("--pop", ga.pop, "Population size");
  cga->add_option("--gens", ga.gens, "Generations per run");
  cga->add_option("--pressure", ga.pressure, "Linear-ranking selection pressure in [1,2]");
  cga->add_option("--runs", ga.runs, "Independent seeded runs");
  cga->add_option("--seed", ga.seed, "Random seed");
  cga->add_option("--out-key", ga.out_key, "Write the best permutation into this key file");
  cga->add_option("--out-perm", ga.out_perm, "Write the best permutation as a text file");
  cga->add_option("--cover-side", ga.cover_side, "Cover side n recorded in the key");
  cga->add_option("--order", ga.order, "Hadamard order recorded in the key");
  cga->add_option("--b", ga.b, "Margin parameter recorded in the key");

  // --- embed ---
  std::string e_cover, e_wm, e_key, e_out, e_out_key;
  bool e_strict = false;
  int e_order = 8;
  double e_b = -1.0;
  auto* cemb = app.add_subcommand("embed", "Embed a watermark into a cover image");
  cemb->add_option("--cover", e_cover, "Cover image (PGM or grayscale PNG)")->required();
  cemb->add_option("--watermark", e_wm, "Watermark file")->required();
  cemb->add_option("--key", e_key, "Key file; omitted -> identity key from --order/--b");
  cemb->add_option("--out", e_out, "Output PGM")->required();
  cemb->add_option("--order", e_order, "Hadamard order when no key is given");
  cemb->add_option("--b", e_b, "Margin parameter when no key is given");
  cemb->add_flag("--strict-margin", e_strict, "Re-enforce |b2-b1| >= 2b on untouched blocks");
  cemb->add_option("--out-key", e_out_key, "Also write the key used");

  // --- extract ---
  std::string x_img, x_key, x_out;
  auto* cext = app.add_subcommand("extract", "Extract the watermark from a marked image");
  cext->add_option("--image", x_img, "Watermarked image")->required();
  cext->add_option("--key", x_key, "Key file")->required();
  cext->add_option("--out", x_out, "Output PBM")->required();

  // --- attack ---
  std::string a_img, a_kind = "jpeg", a_scale = "byte", a_out;
  int a_quality = 90;
  double a_mean = 0.0, a_variance = 0.001, a_density = 0.01;
  std::uint64_t a_seed = 42;
  auto* catt = app.add_subcommand("attack", "Apply a robustness attack to an image");
  catt->add_option("--image", a_img, "Input image")->required();
  catt->add_option("--kind", a_kind, "jpeg, gaussian or salt-pepper")->required();
  catt->add_option("--quality", a_quality, "JPEG quality 1..100");
  catt->add_option("--mean", a_mean, "Gaussian mean");
  catt->add_option("--variance", a_variance, "Gaussian variance");
  catt->add_option("--noise-scale", a_scale, "Gaussian unit convention: byte or normalized");
  catt->add_option("--density", a_density, "Salt-and-pepper density");
  catt->add_option("--seed", a_seed, "Random seed");
  catt->add_option("--out", a_out, "Output PGM")->required();

  // --- metrics ---
  std::string m_a, m_b;
  auto* cmet = app.add_subcommand("metrics", "PSNR and NC between two images or watermarks");
  cmet->add_option("--a", m_a, "First file")->required();
  cmet->add_option("--b", m_b, "Second file")->required();

  // --- experiment ---
  int t_table = 4;
  std::vector<std::string> t_covers, t_wms;
  std::uint64_t t_seed = 42;
  std::string t_out;
  int t_runs = 10, t_pop = 20, t_gens = 50, t_order = 8;
  double t_b = 2.01;
  auto* cexp = app.add_subcommand("experiment", "Reproduce a results table as CSV");
  cexp->add_option("--table", t_table, "2, 4, 5 or 6")->required();
  cexp->add_option("--cover", t_covers, "Cover image (repeatable)");
  cexp->add_option("--watermark", t_wms, "Watermark file (repeatable)");
  cexp->add_option("--seed", t_seed, "Random seed");
  cexp->add_option("--out", t_out, "Output CSV path (default: stdout)");
  cexp->add_option("--runs", t_runs, "Runs per operator pair (table 2)");
  cexp->add_option("--pop", t_pop, "GA population (tables 2, 6)");
  cexp->add_option("--gens", t_gens, "GA generations (tables 2, 6)");
  cexp->add_option("--order", t_order, "Hadamard order");
  cexp->add_option("--b", t_b, "Margin parameter (tables 5, 6)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*cga) return cmd_ga(ga);

    if (*cemb) {
      const GrayImage cover = load_gray(e_cover);
      const BinaryWatermark wm = load_watermark(e_wm);
      WatermarkKey key;
      if (!e_key.empty()) {
        key = load_key(e_key);
      } else {
        key = make_key(wm.side, cover.width, e_order,
                       e_b < 0 ? default_b(e_order, cover.encoding) : e_b);
      }
      key.params.strict_margin = e_strict;
      const BinaryWatermark payload = key.perm.empty() ? wm : apply_permutation(wm, key.perm);
      save_gray(embed(cover, payload, key), e_out);
      if (!e_out_key.empty()) save_key(key, e_out_key);
      return 0;
    }

    if (*cext) {
      const GrayImage img = load_gray(x_img);
      const WatermarkKey key = load_key(x_key);
      save_watermark(extract(img, key), x_out);
      return 0;
    }

    if (*catt) {
      const GrayImage img = load_gray(a_img);
      AttackSpec spec;
      if (a_kind == "jpeg") {
        spec = AttackSpec::jpeg(a_quality);
      } else if (a_kind == "gaussian") {
        NoiseScale scale;
        if (a_scale == "byte")
          scale = NoiseScale::ByteScale;
        else if (a_scale == "normalized")
          scale = NoiseScale::Normalized;
        else
          throw std::runtime_error("unknown --noise-scale: " + a_scale);
        spec = AttackSpec::gaussian(a_mean, a_variance, a_seed, scale);
      } else if (a_kind == "salt-pepper") {
        spec = AttackSpec::salt_pepper(a_density, a_seed);
      } else {
        throw std::runtime_error("unknown attack kind: " + a_kind);
      }
      save_gray(attack(img, spec), a_out);
      return 0;
    }

    if (*cmet) {
      const std::string ma = detail::sniff_magic(m_a);
      if (ma == "P4") {
        const BinaryWatermark w1 = load_watermark(m_a);
        const BinaryWatermark w2 = load_watermark(m_b);
        double m = 0.0;
        for (std::size_t i = 0; i < w1.bits.size(); ++i) {
          const double d = static_cast<double>(w1.bits[i]) - w2.bits[i];
          m += d * d;
        }
        m /= static_cast<double>(w1.bits.size());
        const double p = m == 0.0 ? std::numeric_limits<double>::infinity() : 10.0 * std::log10(1.0 / m);
        std::cout << "mse=" << format_double(m) << " psnr=" << format_double(p)
                  << " nc=" << format_double(nc(w1, w2)) << "\n";
      } else {
        const GrayImage i1 = load_gray(m_a);
        const GrayImage i2 = load_gray(m_b);
        const QualityReport q = quality(i1, i2);
        std::cout << "mse=" << format_double(q.mse) << " psnr=" << format_double(q.psnr)
                  << " nc=" << format_double(q.nc) << "\n";
      }
      return 0;
    }

    if (*cexp) {
      GAConfig cfg;
      cfg.pop_size = t_pop;
      cfg.generations = t_gens;
      cfg.rng_seed = t_seed;
      std::string csv;
      switch (t_table) {
        case 2: {
          if (t_wms.empty()) throw std::runtime_error("table 2 needs at least one --watermark");
          const auto wms = load_marks(t_wms);
          for (const auto& wm : wms) csv += table2_csv(wm, t_runs, cfg);
          break;
        }
        case 4:
          csv = table4_csv(load_covers(t_covers), load_marks(t_wms), t_order);
          break;
        case 5:
          csv = table5_csv(load_covers(t_covers), load_marks(t_wms), t_order, t_b, t_seed);
          break;
        case 6:
          csv = table6_csv(load_covers(t_covers), load_marks(t_wms), t_order, t_b, cfg);
          break;
        default:
          throw std::runtime_error("unknown table (use 2, 4, 5 or 6)");
      }
      write_text(csv, t_out);
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
