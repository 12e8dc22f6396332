#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>

#include "hrl/nn/network.hpp"

namespace hrl::nn {

struct Checkpoint {
    QNetwork net;
    std::int64_t adam_steps = 0;
};

// Versioned text format: a header (layer dims, activation, step counter)
// followed by one hexfloat block per parameter tensor, so a save/load round
// trip is bit-exact in 64-bit.
void save_checkpoint(const Checkpoint& ck, std::ostream& out);
void save_checkpoint(const Checkpoint& ck, const std::string& path);

Checkpoint load_checkpoint(std::istream& in);
Checkpoint load_checkpoint(const std::string& path);

}  // namespace hrl::nn
