#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "volmark/attack.hpp"
#include "volmark/bitvector.hpp"
#include "volmark/cde.hpp"
#include "volmark/error.hpp"
#include "volmark/evaluate.hpp"
#include "volmark/keystream.hpp"
#include "volmark/phantom.hpp"
#include "volmark/verification.hpp"
#include "volmark/volume.hpp"
#include "volmark/zero_watermark.hpp"

namespace fs = std::filesystem;
using namespace volmark;
using ojson = nlohmann::ordered_json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInternal = 1;
constexpr int kExitNotDetected = 3;
constexpr int kExitInput = 4;
constexpr int kExitCapacity = 5;

void emit(const ojson& j) { std::cout << j.dump(2) << "\n"; }

// Infinity has no JSON spelling; reports carry it as the string "inf".
ojson number_or_inf(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return v;
}

std::optional<std::size_t> component(int c) {
  if (c < 0) return std::nullopt;
  return static_cast<std::size_t>(c);
}

FeatureVector features_for(const Volume& v, std::size_t n, const std::string& external) {
  if (!external.empty()) return load_external_features(external, n);
  return extract_features_baseline(v, n);
}

Dims3 parse_dims(const std::string& text) {
  Dims3 d;
  char x1 = 0, x2 = 0;
  std::istringstream in(text);
  if (!(in >> d.x >> x1 >> d.y >> x2 >> d.z) || x1 != 'x' || x2 != 'x' || !in.eof() || d.count() == 0)
    throw Error(ErrorCode::InvalidArgument, "dims must look like 64x64x32, got '" + text + "'");
  return d;
}

struct EmbedArgs {
  std::string in, key, watermark, out, locmap, os_out, features;
  int component = -1;
};

int cmd_embed(const EmbedArgs& a) {
  const Volume v = read_volume(a.in, component(a.component));
  const BitVector w = read_bits(a.watermark);
  const auto f = features_for(v, w.size(), a.features);
  const auto os = make_ownership_share(w, keystream(a.key, w.size()), f);

  const Volume padded = pad_to_multiple(v, 4);
  const auto result = embed(padded, os.bits);
  write_volume(result.watermarked, a.out);
  write_location_map(result.map, a.locmap);
  write_bits(os.bits, a.os_out);

  ojson j;
  j["psnr_db"] = number_or_inf(psnr(padded, result.watermarked));
  j["bits_embedded"] = result.map.bits_embedded;
  j["cubes"] = result.map.cube_count();
  j["skipped_cubes"] = result.map.overflow.count();
  j["padded"] = padded.original_dims.has_value();
  j["extractor"] = f.extractor_id;
  j["key_id"] = key_id(a.key);
  emit(j);
  return kExitOk;
}

struct ExtractArgs {
  std::string in, locmap, out, os_out;
};

int cmd_extract(const ExtractArgs& a) {
  const Volume wm = read_volume(a.in);
  const auto map = read_location_map(a.locmap);
  const auto result = extract(wm, map);
  write_volume(result.restored, a.out);
  write_bits(result.share, a.os_out);

  ojson j;
  j["bits_extracted"] = result.share.size();
  j["dims"] = {result.restored.dims().x, result.restored.dims().y, result.restored.dims().z};
  emit(j);
  return kExitOk;
}

struct VerifyArgs {
  std::string in, key, watermark, os, extracted_os, features;
  double alpha = kDefaultAlpha;
  int component = -1;
};

int cmd_verify(const VerifyArgs& a) {
  const Volume v = read_volume(a.in, component(a.component));
  const BitVector w = read_bits(a.watermark);
  const auto c = keystream(a.key, w.size());
  const auto f = features_for(v, w.size(), a.features);

  const BitVector zero = recover_watermark(read_bits(a.os), c, f);
  std::optional<BitVector> embedded;
  if (!a.extracted_os.empty()) embedded = recover_watermark(read_bits(a.extracted_os), c, f);

  const auto report = verify(w, embedded, zero, a.alpha);
  std::cout << to_json(report) << "\n";
  return report.ownership_detected ? kExitOk : kExitNotDetected;
}

struct FeaturesArgs {
  std::string in, out;
  std::size_t bits = kDefaultWatermarkBits;
  int component = -1;
};

int cmd_features(const FeaturesArgs& a) {
  const auto f = extract_features_baseline(read_volume(a.in, component(a.component)), a.bits);
  write_bits(f.bits, a.out);
  ojson j;
  j["bits"] = f.size();
  j["ones"] = f.bits.count();
  j["extractor"] = f.extractor_id;
  j["source"] = f.source;
  emit(j);
  return kExitOk;
}

AttackSpec read_attack_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::IoFailure, "cannot open " + path);
  try {
    return attack_from_json(nlohmann::json::parse(in));
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::BadParameter, path + ": " + e.what());
  }
}

struct AttackArgs {
  std::string in, kind, params, spec, out;
  std::uint64_t seed = 0;
  int component = -1;
};

int cmd_attack(const AttackArgs& a) {
  if (a.kind.empty() == a.spec.empty())
    throw Error(ErrorCode::InvalidArgument, "give exactly one of --attack or --spec");
  AttackSpec spec = a.spec.empty() ? parse_attack(a.kind, a.params, a.seed) : read_attack_file(a.spec);
  const Volume v = read_volume(a.in, component(a.component));
  const Volume out = apply_attack(v, spec);
  write_volume(out, a.out);

  ojson j;
  j["attack"] = to_string(spec.kind);
  j["params"] = describe_params(spec);
  j["seed"] = spec.seed;
  j["dims"] = {out.dims().x, out.dims().y, out.dims().z};
  if (out.dims() == v.dims())
    j["psnr_db"] = number_or_inf(psnr(v, out));
  else
    j["psnr_db"] = nullptr;
  emit(j);
  return kExitOk;
}

struct EvaluateArgs {
  std::string config, out, key;
  unsigned threads = 0;
};

// Config document:
// {"alpha": 1e-6, "threads": 0,
//  "volumes": [{"id", "watermarked", "watermark", "os", "locmap"?, "key"?}],
//  "attacks": [AttackSpec JSON, optionally with "seeds": [...] to repeat it]}
// Relative paths resolve against the config file's directory.
int cmd_evaluate(const EvaluateArgs& a) {
  std::ifstream in(a.config);
  if (!in) throw Error(ErrorCode::IoFailure, "cannot open " + a.config);
  nlohmann::json cfg;
  try {
    cfg = nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::InvalidArgument, a.config + ": " + e.what());
  }
  const fs::path base = fs::path(a.config).parent_path();
  auto resolve = [&](const std::string& p) { return fs::path(p).is_absolute() ? fs::path(p) : base / p; };

  std::vector<EvalVolume> volumes;
  std::vector<AttackSpec> grid;
  PipelineConfig pc;
  try {
    pc.alpha = cfg.value("alpha", kDefaultAlpha);
    pc.threads = a.threads ? a.threads : cfg.value("threads", 0u);
    for (const auto& jv : cfg.at("volumes")) {
      EvalVolume e;
      e.id = jv.at("id").get<std::string>();
      e.watermarked = read_volume(resolve(jv.at("watermarked").get<std::string>()));
      e.watermark = read_bits(resolve(jv.at("watermark").get<std::string>()));
      e.share = read_bits(resolve(jv.at("os").get<std::string>()));
      if (jv.contains("locmap")) e.map = read_location_map(resolve(jv["locmap"].get<std::string>()));
      e.key = jv.value("key", a.key);
      if (e.key.empty()) throw Error(ErrorCode::EmptyKey, "no key for volume '" + e.id + "'");
      volumes.push_back(std::move(e));
    }
    for (const auto& ja : cfg.at("attacks")) {
      if (!ja.contains("seeds")) {
        grid.push_back(attack_from_json(ja));
        continue;
      }
      for (const auto& s : ja["seeds"]) {
        auto one = ja;
        one.erase("seeds");
        one["seed"] = s;
        grid.push_back(attack_from_json(one));
      }
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::InvalidArgument, a.config + ": " + e.what());
  }

  const auto rows = evaluate_grid(volumes, grid, pc);
  std::ofstream out(a.out, std::ios::binary);
  out << to_csv(rows);
  if (!out) throw Error(ErrorCode::IoFailure, "cannot write " + a.out);

  std::size_t failed = 0;
  for (const auto& r : rows) failed += r.error.has_value();
  ojson j;
  j["rows"] = rows.size();
  j["failed_rows"] = failed;
  j["out"] = a.out;
  emit(j);
  return kExitOk;
}

struct GenWatermarkArgs {
  std::string out;
  std::size_t bits = kDefaultWatermarkBits;
  std::uint64_t seed = 0;
};

int cmd_gen_watermark(const GenWatermarkArgs& a) {
  const CounterRng rng(a.seed, 5);
  BitVector w(a.bits);
  for (std::size_t i = 0; i < a.bits; ++i) w.set(i, rng.bits(i) >> 63);
  write_bits(w, a.out);
  ojson j;
  j["bits"] = w.size();
  j["ones"] = w.count();
  emit(j);
  return kExitOk;
}

struct PhantomArgs {
  std::string dims, out, kind = "body";
  int depth = 12;
  std::uint64_t seed = 0;
};

int cmd_phantom(const PhantomArgs& a) {
  const Dims3 d = parse_dims(a.dims);
  const Volume v = a.kind == "smooth" ? smooth_phantom(d, a.depth, a.seed) : body_phantom(d, a.depth, a.seed);
  write_volume(v, a.out);
  ojson j;
  j["dims"] = {v.dims().x, v.dims().y, v.dims().z};
  j["bit_depth"] = v.bit_depth;
  emit(j);
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Reversible and zero-watermarking for 3D volumes"};
  app.require_subcommand(1);
  app.footer("Exit codes: 0 ok / ownership detected, 3 not detected, 4 input error, 5 insufficient capacity.");

  auto add_key = [](CLI::App* sub, std::string& key, bool required) {
    auto* opt = sub->add_option("--key", key, "Owner key (or set VOLMARK_KEY)")->envname("VOLMARK_KEY");
    if (required) opt->required();
  };

  EmbedArgs embed_args;
  auto* embed_cmd = app.add_subcommand("embed", "Build the ownership share and embed it reversibly");
  embed_cmd->add_option("--in", embed_args.in, "Source volume (.vmvol or NIfTI)")->required();
  add_key(embed_cmd, embed_args.key, true);
  embed_cmd->add_option("--watermark", embed_args.watermark, "Watermark bits (.vmbits)")->required();
  embed_cmd->add_option("--out", embed_args.out, "Watermarked volume (.vmvol)")->required();
  embed_cmd->add_option("--locmap", embed_args.locmap, "Location map output (.vmloc)")->required();
  embed_cmd->add_option("--os-out", embed_args.os_out, "Ownership share output (.vmbits)")->required();
  embed_cmd->add_option("--features", embed_args.features, "External feature file instead of the baseline extractor");
  embed_cmd->add_option("--component", embed_args.component, "Volume index for 4D NIfTI input");

  ExtractArgs extract_args;
  auto* extract_cmd = app.add_subcommand("extract", "Recover the ownership share and restore the original volume");
  extract_cmd->add_option("--in", extract_args.in, "Watermarked volume")->required();
  extract_cmd->add_option("--locmap", extract_args.locmap, "Location map (.vmloc)")->required();
  extract_cmd->add_option("--out", extract_args.out, "Restored volume (.vmvol)")->required();
  extract_cmd->add_option("--os-out", extract_args.os_out, "Extracted ownership share (.vmbits)")->required();

  VerifyArgs verify_args;
  auto* verify_cmd = app.add_subcommand("verify", "Integrity check and ownership hypothesis test");
  verify_cmd->add_option("--in", verify_args.in, "Restored or suspect volume")->required();
  add_key(verify_cmd, verify_args.key, true);
  verify_cmd->add_option("--watermark", verify_args.watermark, "Reference watermark (.vmbits)")->required();
  verify_cmd->add_option("--os", verify_args.os, "Stored ownership share (.vmbits)")->required();
  verify_cmd->add_option("--extracted-os", verify_args.extracted_os, "Share extracted from the watermarked volume");
  verify_cmd->add_option("--alpha", verify_args.alpha, "Significance level")->check(CLI::Range(0.0, 1.0));
  verify_cmd->add_option("--features", verify_args.features, "External feature file for --in");
  verify_cmd->add_option("--component", verify_args.component, "Volume index for 4D NIfTI input");

  FeaturesArgs features_args;
  auto* features_cmd = app.add_subcommand("features", "Baseline feature bits of a volume");
  features_cmd->add_option("--in", features_args.in, "Volume")->required();
  features_cmd->add_option("--out", features_args.out, "Feature bits (.vmbits)")->required();
  features_cmd->add_option("--bits", features_args.bits, "Number of bits")->capture_default_str();
  features_cmd->add_option("--component", features_args.component, "Volume index for 4D NIfTI input");

  AttackArgs attack_args;
  auto* attack_cmd = app.add_subcommand("attack", "Apply one simulated attack");
  attack_cmd->add_option("--in", attack_args.in, "Volume")->required();
  attack_cmd->add_option("--attack", attack_args.kind,
                         "gaussian, saltpepper, jpeg, median, average, scale, crop_z, rotate, translate, random_crop");
  attack_cmd->add_option("--params", attack_args.params, "key=value list, e.g. p=0.01 or theta=5,plane=XY");
  attack_cmd->add_option("--spec", attack_args.spec, "JSON attack spec (required for hybrid)");
  attack_cmd->add_option("--seed", attack_args.seed, "Random seed")->capture_default_str();
  attack_cmd->add_option("--out", attack_args.out, "Attacked volume (.vmvol)")->required();
  attack_cmd->add_option("--component", attack_args.component, "Volume index for 4D NIfTI input");

  EvaluateArgs evaluate_args;
  auto* evaluate_cmd = app.add_subcommand("evaluate", "Run an attack grid and write a CSV table");
  evaluate_cmd->add_option("--config", evaluate_args.config, "Evaluation config (JSON)")->required();
  evaluate_cmd->add_option("--out", evaluate_args.out, "CSV output")->required();
  add_key(evaluate_cmd, evaluate_args.key, false);
  evaluate_cmd->add_option("--threads", evaluate_args.threads, "Worker threads (0 = all cores)");

  GenWatermarkArgs gen_args;
  auto* gen_cmd = app.add_subcommand("gen-watermark", "Random watermark bits");
  gen_cmd->add_option("--bits", gen_args.bits, "Number of bits")->capture_default_str();
  gen_cmd->add_option("--seed", gen_args.seed, "Random seed")->capture_default_str();
  gen_cmd->add_option("--out", gen_args.out, "Output (.vmbits)")->required();

  PhantomArgs phantom_args;
  auto* phantom_cmd = app.add_subcommand("phantom", "Synthetic test volume");
  phantom_cmd->add_option("--dims", phantom_args.dims, "e.g. 64x64x32")->required();
  phantom_cmd->add_option("--kind", phantom_args.kind, "body or smooth")
      ->check(CLI::IsMember({"body", "smooth"}))
      ->capture_default_str();
  phantom_cmd->add_option("--depth", phantom_args.depth, "Bit depth")->check(CLI::Range(8, 16))->capture_default_str();
  phantom_cmd->add_option("--seed", phantom_args.seed, "Random seed")->capture_default_str();
  phantom_cmd->add_option("--out", phantom_args.out, "Output (.vmvol)")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n\n";
    const auto subs = app.get_subcommands();
    std::cerr << (subs.empty() ? app.help() : subs.front()->help());
    return kExitInput;
  }

  try {
    if (*embed_cmd) return cmd_embed(embed_args);
    if (*extract_cmd) return cmd_extract(extract_args);
    if (*verify_cmd) return cmd_verify(verify_args);
    if (*features_cmd) return cmd_features(features_args);
    if (*attack_cmd) return cmd_attack(attack_args);
    if (*evaluate_cmd) return cmd_evaluate(evaluate_args);
    if (*gen_cmd) return cmd_gen_watermark(gen_args);
    if (*phantom_cmd) return cmd_phantom(phantom_args);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return e.code() == ErrorCode::InsufficientCapacity ? kExitCapacity : kExitInput;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return kExitInternal;
  }
  return kExitInput;
}
