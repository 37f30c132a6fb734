#pragma once

#include <cstdint>
#include <random>

namespace traffic {

// One block of uniforms per simulation step, drawn in a fixed order so that
// micro, macro and coupled runs with equal seeds stay aligned draw-for-draw,
// no matter which branches fire.
struct StepDraws {
  double event;     // did anything happen this step
  double kind;      // new accident vs dissolution
  double type;      // flux-weighted vs jam-weighted position measure
  double position;  // inverse-transform draw for the position measure
  double size;      // accident length
  double capacity;  // accident severity
  double removal;   // which accident dissolves
};

class DrawStream {
 public:
  explicit DrawStream(std::uint64_t seed) : eng_(seed) {}

  // in [0, 1)
  double uniform() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }

  StepDraws next_step() {
    StepDraws d;
    d.event = uniform();
    d.kind = uniform();
    d.type = uniform();
    d.position = uniform();
    d.size = uniform();
    d.capacity = uniform();
    d.removal = uniform();
    return d;
  }

 private:
  std::mt19937_64 eng_;
};

// splitmix64 step; decorrelates per-realization seeds derived from a base seed
inline std::uint64_t mix_seed(std::uint64_t base, std::uint64_t index) {
  std::uint64_t z = base + 0x9e3779b97f4a7c15ULL * (index + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace traffic
