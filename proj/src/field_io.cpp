#include "hypertorus/field_io.hpp"

#include <fstream>
#include <istream>
#include <ostream>
#include <stdexcept>

#include <json.hpp>

namespace hypertorus {

using nlohmann::json;

void write_field(std::ostream& os, const SpectralField& u) {
  json header{{"d", u.spec().dim()}, {"thetas", u.spec().thetas()}};
  os << header.dump() << '\n';
  for (const auto& [xi, a] : u.amplitudes()) {
    std::vector<std::int64_t> coords(static_cast<std::size_t>(xi.dim()));
    for (int j = 0; j < xi.dim(); ++j) coords[static_cast<std::size_t>(j)] = xi[j];
    json line{{"coords", coords}, {"re", a.real()}, {"im", a.imag()}};
    os << line.dump() << '\n';
  }
}

SpectralField read_field(std::istream& is) {
  std::string line;
  if (!std::getline(is, line)) throw std::runtime_error("read_field: missing header line");
  const json header = json::parse(line);
  TorusSpec spec(header.at("d").get<int>(), header.at("thetas").get<std::vector<double>>());
  SpectralField u(spec);
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    const json row = json::parse(line);
    const auto coords = row.at("coords").get<std::vector<std::int64_t>>();
    if (static_cast<int>(coords.size()) != spec.dim()) throw std::runtime_error("read_field: coordinate length mismatch");
    u.set(FreqPoint(std::span<const std::int64_t>(coords)), {row.at("re").get<double>(), row.at("im").get<double>()});
  }
  return u;
}

void save_field(const std::string& path, const SpectralField& u) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot open " + path + " for writing");
  write_field(os, u);
}

SpectralField load_field(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("cannot open " + path);
  return read_field(is);
}

}  // namespace hypertorus
