#pragma once

#include <random>
#include <stdexcept>
#include <vector>

#include "hrl/mdp/observation.hpp"
#include "hrl/safety/safety.hpp"

namespace hrl::rl {

struct Transition {
    mdp::Observation s;
    int action = 0;
    double reward = 0.0;
    mdp::Observation s_next;
    bool terminal = false;
    safety::MaskBits mask_s;     // mask at s, feeds the unsafe-pair shaping
    safety::MaskBits mask_next;  // mask at s_next, feeds the targets
};

// Fixed-capacity ring with uniform with-replacement sampling.
class ReplayBuffer {
  public:
    explicit ReplayBuffer(std::size_t capacity) : capacity_(capacity) {
        if (capacity_ == 0) throw std::invalid_argument("ReplayBuffer: capacity 0");
        storage_.reserve(capacity_);
    }

    std::size_t size() const { return storage_.size(); }
    std::size_t capacity() const { return capacity_; }

    void push(Transition t) {
        if (storage_.size() < capacity_) {
            storage_.push_back(std::move(t));
        } else {
            storage_[head_] = std::move(t);
            head_ = (head_ + 1) % capacity_;
        }
    }

    std::vector<const Transition*> sample(std::size_t n, std::mt19937_64& rng) const {
        if (storage_.empty())
            throw std::logic_error("ReplayBuffer: sample from empty buffer");
        std::uniform_int_distribution<std::size_t> pick(0, storage_.size() - 1);
        std::vector<const Transition*> batch;
        batch.reserve(n);
        for (std::size_t i = 0; i < n; ++i) batch.push_back(&storage_[pick(rng)]);
        return batch;
    }

    const Transition& at(std::size_t i) const { return storage_.at(i); }

  private:
    std::size_t capacity_;
    std::size_t head_ = 0;
    std::vector<Transition> storage_;
};

}  // namespace hrl::rl
