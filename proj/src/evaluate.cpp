#include "volmark/evaluate.hpp"

#include <atomic>
#include <cmath>
#include <iomanip>
#include <sstream>
#include <thread>

#include "volmark/error.hpp"
#include "volmark/keystream.hpp"
#include "volmark/zero_watermark.hpp"

namespace volmark {

namespace {

// Attacked volumes usually no longer match the map or decode out of range;
// that just means the reversible path is unavailable.
std::optional<BitVector> try_reversible(const Volume& attacked, const LocationMap& map, const BitVector& keybits) {
  try {
    const auto x = extract(attacked, map);
    if (x.share.size() != keybits.size()) return std::nullopt;
    return recover_watermark(x.share, keybits, extract_features_baseline(x.restored, keybits.size()));
  } catch (const Error&) {
    return std::nullopt;
  }
}

EvalRow run_row(const EvalVolume& v, const BitVector& keybits, const AttackSpec& a, const PipelineConfig& config) {
  EvalRow row;
  row.volume = v.id;
  row.attack = std::string(to_string(a.kind));
  row.params = describe_params(a);
  row.seed = a.seed;
  try {
    const Volume attacked = apply_attack(v.watermarked, a);
    if (attacked.dims() == v.watermarked.dims()) row.psnr_db = psnr(v.watermarked, attacked);
    const std::size_t n = v.watermark.size();
    const auto zero = recover_watermark(v.share, keybits, extract_features_baseline(attacked, n));
    std::optional<BitVector> embedded;
    if (v.map) embedded = try_reversible(attacked, *v.map, keybits);
    const auto report = verify(v.watermark, embedded, zero, config.alpha);
    row.ber = report.ber;
    row.nc = report.nc;
    row.log10_p = report.log10_p;
  } catch (const std::exception& e) {
    row.psnr_db.reset();
    row.error = e.what();
  }
  return row;
}

std::string number(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  std::ostringstream out;
  out << std::setprecision(10) << v;
  return out.str();
}

}  // namespace

std::vector<EvalRow> evaluate_grid(std::span<const EvalVolume> volumes, std::span<const AttackSpec> grid,
                                   const PipelineConfig& config) {
  std::vector<BitVector> keybits;
  keybits.reserve(volumes.size());
  for (const auto& v : volumes) keybits.push_back(keystream(v.key, v.watermark.size()));

  const std::size_t total = volumes.size() * grid.size();
  std::vector<EvalRow> rows(total);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < total; i = next++) {
      const std::size_t vi = i / grid.size();
      rows[i] = run_row(volumes[vi], keybits[vi], grid[i % grid.size()], config);
    }
  };
  unsigned threads = config.threads ? config.threads : std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, std::max<std::size_t>(total, 1)));
  {
    std::vector<std::jthread> pool;
    for (unsigned t = 1; t < threads; ++t) pool.emplace_back(worker);
    worker();
  }
  return rows;
}

std::string to_csv(std::span<const EvalRow> rows) {
  std::ostringstream out;
  out << kEvalCsvHeader << "\n";
  for (const auto& r : rows) {
    out << r.volume << "," << r.attack << "," << r.params << "," << r.seed << ","
        << (r.psnr_db ? number(*r.psnr_db) : "/") << ",";
    if (r.error)
      out << "error,error,error";
    else
      out << number(r.ber) << "," << number(r.nc) << "," << number(r.log10_p);
    out << "\n";
  }
  return out.str();
}

}  // namespace volmark
