#pragma once

#include <string>

#include "gdnn/network.hpp"

namespace gd {

// Binary network dump: magic "GDNN", format version, seed, layer sizes, then
// every parameter as a little-endian IEEE754 bit pattern. Round-trips
// bit-exactly, including the seed.
void save_checkpoint(const Network& net, const std::string& path);
Network load_checkpoint(const std::string& path);

}  // namespace gd
