#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "volmark/volume.hpp"

namespace volmark {

enum class AttackKind {
  Gaussian,
  SaltPepper,
  Jpeg,
  Median,
  Average,
  Scale,
  CropZ,
  Rotate,
  Translate,
  RandomCrop,
  Hybrid,
};

enum class Plane { XY, XZ, YZ };
enum class Axis { X, Y, Z };

// One attack with its intensity. `level` is the kind's single intensity
// parameter: p (gaussian, saltpepper, crop_z, translate, random_crop),
// q (jpeg), w (median, average), f (scale) or theta in degrees (rotate).
struct AttackSpec {
  AttackKind kind = AttackKind::Gaussian;
  double level = 0.0;
  Plane plane = Plane::YZ;
  Axis axis = Axis::Z;
  std::uint64_t seed = 0;
  // Hybrid only: applied in order.
  std::vector<AttackSpec> stages;
};

std::string_view to_string(AttackKind k) noexcept;
AttackKind parse_attack_kind(std::string_view name);

// Builds a spec from a kind name and "key=value" pairs separated by ',' or ';'
// (e.g. "theta=5,plane=YZ"). Missing intensities default to 0.
AttackSpec parse_attack(std::string_view kind, std::string_view params, std::uint64_t seed = 0);

// Inverse of parse_attack's params argument, ';'-separated so it can sit in a
// CSV field. Hybrids render as "kind(params)+kind(params)".
std::string describe_params(const AttackSpec& a);

AttackSpec attack_from_json(const nlohmann::json& j);
nlohmann::json to_json(const AttackSpec& a);

// Throws BadParameter unless every parameter lies in its documented range.
void validate(const AttackSpec& a);

// Applies the attack. Deterministic for a given spec including its seed.
Volume apply_attack(const Volume& v, const AttackSpec& a);

// Counter-based generator: every draw is a pure function of (seed, stream,
// counter), so results do not depend on traversal order.
class CounterRng {
 public:
  explicit CounterRng(std::uint64_t seed, std::uint64_t stream = 0) noexcept;

  std::uint64_t bits(std::uint64_t counter) const noexcept;
  // Uniform in [0, 1).
  double uniform(std::uint64_t counter) const noexcept;
  // Standard normal via Box-Muller on two derived draws.
  double normal(std::uint64_t counter) const noexcept;

 private:
  std::uint64_t key_;
};

std::uint64_t splitmix64(std::uint64_t x) noexcept;

}  // namespace volmark
