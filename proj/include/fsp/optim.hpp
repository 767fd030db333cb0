#ifndef FSP_OPTIM_HPP
#define FSP_OPTIM_HPP

#include <string>
#include <unordered_map>
#include <vector>

#include "fsp/tensor.hpp"

namespace fsp {

// Ordered, named parameter set. Order is creation order and is what makes
// training runs deterministic, so iteration always follows it.
class ParamStore {
 public:
  Tensor& add(const std::string& name, Tensor init);
  Tensor& get(const std::string& name);
  const Tensor& get(const std::string& name) const;
  bool contains(const std::string& name) const { return index_.count(name) != 0; }

  size_t count() const { return items_.size(); }
  const std::string& name_at(size_t i) const { return items_[i].first; }
  Tensor& tensor_at(size_t i) { return items_[i].second; }
  const Tensor& tensor_at(size_t i) const { return items_[i].second; }

  size_t total_elements() const;

 private:
  std::vector<std::pair<std::string, Tensor>> items_;
  std::unordered_map<std::string, size_t> index_;
};

struct AdamConfig {
  double learning_rate = 0.005;
  double weight_decay = 0.0005;  // decoupled: applied to parameters directly
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
};

// Per-parameter moment buffers plus the shared step counter.
class AdamState {
 public:
  explicit AdamState(AdamConfig config) : config_(config) {}
  const AdamConfig& config() const { return config_; }
  long step_count() const { return step_; }

  // One optimization step over every parameter. Gradients are keyed by
  // parameter name; a missing key means zero gradient (decay still applies).
  void step(ParamStore& params, const std::unordered_map<std::string, Tensor>& grads);

 private:
  struct Moments {
    Tensor m;
    Tensor v;
  };
  AdamConfig config_;
  long step_ = 0;
  std::unordered_map<std::string, Moments> moments_;
};

}  // namespace fsp

#endif
