#pragma once

#include <iosfwd>
#include <string>

#include "hypertorus/torus.hpp"

namespace hypertorus {

// JSON-lines format: first line {"d": .., "thetas": [..]}, then one
// {"coords": [..], "re": .., "im": ..} per stored mode, in key order.
void write_field(std::ostream& os, const SpectralField& u);
SpectralField read_field(std::istream& is);

void save_field(const std::string& path, const SpectralField& u);
SpectralField load_field(const std::string& path);

}  // namespace hypertorus
