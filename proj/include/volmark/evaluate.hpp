#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "volmark/attack.hpp"
#include "volmark/bitvector.hpp"
#include "volmark/cde.hpp"
#include "volmark/verification.hpp"
#include "volmark/volume.hpp"

namespace volmark {

// A volume that has already been through registration: the preset
// watermark, the stored ownership share and the key that produced it.
struct EvalVolume {
  std::string id;
  Volume watermarked;
  BitVector watermark;
  BitVector share;
  std::string key;
  // When present, each row first tries the reversible path (extract, then
  // features of the restored volume) before the zero-watermark path.
  std::optional<LocationMap> map;
};

struct PipelineConfig {
  double alpha = kDefaultAlpha;
  // 0 picks std::thread::hardware_concurrency().
  unsigned threads = 0;
};

struct EvalRow {
  std::string volume;
  std::string attack;
  std::string params;
  std::uint64_t seed = 0;
  // Empty when the attack changed the dims.
  std::optional<double> psnr_db;
  double ber = 0.0;
  double nc = 0.0;
  double log10_p = 0.0;
  std::optional<std::string> error;
};

// Runs every attack against every volume and verifies it the way verify()
// does: the embedded share if it still recovers w exactly, otherwise the
// stored share against baseline features of the attacked volume. Rows come
// back volume-major in grid order; a failing row records its error.
std::vector<EvalRow> evaluate_grid(std::span<const EvalVolume> volumes, std::span<const AttackSpec> grid,
                                   const PipelineConfig& config = {});

inline constexpr const char* kEvalCsvHeader = "volume,attack,params,seed,psnr_db,ber,nc,log10_p";

std::string to_csv(std::span<const EvalRow> rows);

}  // namespace volmark
