#ifndef EASYFIRST_LEARNER_H_
#define EASYFIRST_LEARNER_H_

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace easyfirst {

struct LearnerParams {
  double eta = 0.1;     // learning rate
  double lambda = 0.0;  // L1 strength
  double delta = 1.0;   // added to the accumulator under the square root
};

// Hashed linear model trained with AdaGrad steps and an L1 soft threshold
// applied to each coordinate when it is updated (FOBOS). Holds exactly two
// dense arrays of `dims` scalars. Arithmetic is done in double and rounded
// to Scalar on store.
template <typename Scalar>
class BasicWeightStore {
 public:
  BasicWeightStore() = default;
  explicit BasicWeightStore(std::size_t dims, LearnerParams params = {})
      : params_(params), weights_(dims, Scalar(0)), gradsq_(dims, Scalar(0)) {}

  std::size_t dims() const { return weights_.size(); }
  const LearnerParams& params() const { return params_; }
  LearnerParams& params() { return params_; }

  double Score(std::span<const std::uint32_t> features) const {
    double s = 0;
    for (const auto i : features) s += static_cast<double>(weights_[i]);
    return s;
  }

  // Gradient +1 per occurrence in `wrong`, -1 per occurrence in `right`.
  // Coordinates whose gradient cancels to zero are left untouched.
  void Update(std::span<const std::uint32_t> wrong, std::span<const std::uint32_t> right) {
    gradient_.clear();
    for (const auto i : wrong) gradient_.emplace_back(i, 1);
    for (const auto i : right) gradient_.emplace_back(i, -1);
    std::sort(gradient_.begin(), gradient_.end());
    std::size_t k = 0;
    while (k < gradient_.size()) {
      const std::uint32_t i = gradient_[k].first;
      int g = 0;
      for (; k < gradient_.size() && gradient_[k].first == i; ++k) g += gradient_[k].second;
      if (g != 0) Step(i, static_cast<double>(g));
    }
  }

  // One coordinate step with gradient g.
  void Step(std::uint32_t i, double g) {
    const double gs = static_cast<double>(gradsq_[i]) + g * g;
    gradsq_[i] = static_cast<Scalar>(gs);
    const double denom = std::sqrt(static_cast<double>(gradsq_[i]) + params_.delta);
    const double z = static_cast<double>(weights_[i]) - params_.eta * g / denom;
    const double shrunk = std::max(0.0, std::abs(z) - params_.eta * params_.lambda / denom);
    weights_[i] = static_cast<Scalar>(z < 0 ? -shrunk : shrunk);
  }

  // lambda = numerator / N for N training sentences.
  void SetLambdaFromCorpus(long sentences, double numerator = 0.001) {
    if (sentences < 1) throw std::invalid_argument("lambda from corpus needs N >= 1");
    params_.lambda = numerator / static_cast<double>(sentences);
  }

  std::span<const Scalar> weights() const { return weights_; }
  std::span<Scalar> weights() { return weights_; }
  std::span<const Scalar> gradsq() const { return gradsq_; }
  std::span<Scalar> gradsq() { return gradsq_; }

  std::size_t NonZeroWeights() const {
    return static_cast<std::size_t>(
        std::count_if(weights_.begin(), weights_.end(), [](Scalar w) { return w != Scalar(0); }));
  }

 private:
  LearnerParams params_;
  std::vector<Scalar> weights_;
  std::vector<Scalar> gradsq_;
  std::vector<std::pair<std::uint32_t, int>> gradient_;
};

using WeightStore = BasicWeightStore<float>;

// Binary section of a model file: dims little-endian float32 weights,
// followed by the accumulators when `with_accumulators`.
void WriteWeightArrays(std::ostream& out, const WeightStore& store, bool with_accumulators);
void ReadWeightArrays(std::istream& in, WeightStore& store, bool with_accumulators);

}  // namespace easyfirst

#endif  // EASYFIRST_LEARNER_H_
