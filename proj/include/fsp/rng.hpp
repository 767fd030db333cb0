#ifndef FSP_RNG_HPP
#define FSP_RNG_HPP

#include <cstdint>
#include <vector>

namespace fsp {

// Deterministic splitmix64 generator. A single 64-bit seed drives every
// random choice in a run; independent streams are derived with child(),
// which is a pure function of (seed, stream) so results do not depend on
// call order or thread scheduling.
class Rng {
 public:
  explicit Rng(uint64_t seed);

  uint64_t next_u64();
  double uniform();                      // [0, 1)
  double uniform(double lo, double hi);  // [lo, hi)
  double normal(double mean, double stddev);
  int uniform_int(int n);  // unbiased draw from [0, n)
  bool bernoulli(double p);

  Rng child(uint64_t stream) const;

  template <class T>
  void shuffle(std::vector<T>& v) {
    for (size_t i = v.size(); i > 1; --i) {
      size_t j = static_cast<size_t>(uniform_int(static_cast<int>(i)));
      std::swap(v[i - 1], v[j]);
    }
  }

  uint64_t seed() const { return seed_; }

 private:
  uint64_t seed_;
  uint64_t state_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace fsp

#endif
