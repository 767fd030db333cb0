#include "fsp/optim.hpp"

#include <cmath>

#include "fsp/error.hpp"

namespace fsp {

Tensor& ParamStore::add(const std::string& name, Tensor init) {
  if (index_.count(name)) raise(ErrorCode::invalid_argument, "duplicate parameter '" + name + "'");
  index_[name] = items_.size();
  items_.emplace_back(name, std::move(init));
  return items_.back().second;
}

Tensor& ParamStore::get(const std::string& name) {
  auto it = index_.find(name);
  if (it == index_.end()) raise(ErrorCode::lookup, "unknown parameter '" + name + "'");
  return items_[it->second].second;
}

const Tensor& ParamStore::get(const std::string& name) const {
  auto it = index_.find(name);
  if (it == index_.end()) raise(ErrorCode::lookup, "unknown parameter '" + name + "'");
  return items_[it->second].second;
}

size_t ParamStore::total_elements() const {
  size_t n = 0;
  for (const auto& [name, t] : items_) n += t.size();
  return n;
}

void AdamState::step(ParamStore& params, const std::unordered_map<std::string, Tensor>& grads) {
  ++step_;
  double bc1 = 1.0 - std::pow(config_.beta1, static_cast<double>(step_));
  double bc2 = 1.0 - std::pow(config_.beta2, static_cast<double>(step_));
  for (size_t i = 0; i < params.count(); ++i) {
    const std::string& name = params.name_at(i);
    Tensor& p = params.tensor_at(i);
    auto git = grads.find(name);
    const Tensor* g = git == grads.end() ? nullptr : &git->second;
    if (g != nullptr) {
      if (!g->same_shape(p))
        raise(ErrorCode::dimension, "gradient shape " + shape_str(g->shape()) + " does not match parameter '" +
                                        name + "' " + shape_str(p.shape()));
      if (!g->all_finite())
        raise(ErrorCode::training, "non-finite gradient for parameter '" + name + "'");
    }
    auto mit = moments_.find(name);
    if (mit == moments_.end()) mit = moments_.emplace(name, Moments{Tensor(p.shape()), Tensor(p.shape())}).first;
    Tensor& m = mit->second.m;
    Tensor& v = mit->second.v;
    for (size_t j = 0; j < p.size(); ++j) {
      // Decoupled weight decay, then the bias-corrected Adam update.
      p[j] -= config_.learning_rate * config_.weight_decay * p[j];
      double gj = g != nullptr ? (*g)[j] : 0.0;
      m[j] = config_.beta1 * m[j] + (1.0 - config_.beta1) * gj;
      v[j] = config_.beta2 * v[j] + (1.0 - config_.beta2) * gj * gj;
      double mhat = m[j] / bc1;
      double vhat = v[j] / bc2;
      p[j] -= config_.learning_rate * mhat / (std::sqrt(vhat) + config_.epsilon);
    }
  }
}

}  // namespace fsp
