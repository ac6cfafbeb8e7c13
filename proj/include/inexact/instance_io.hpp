#pragma once

#include <cstdint>
#include <string>

#include "inexact/lasso.hpp"

namespace inexact {

/// Generation parameters stored in the JSON sidecar next to an instance file.
struct InstanceProvenance {
  std::uint64_t seed = 0;
  std::string gamma_mode = "scaled";  // "scaled" or "absolute"
  double gamma_value = 1e-3;
  std::string generator = "gaussian";
};

struct StoredInstance {
  LassoInstance instance;
  double lambda = 0.01;
  InstanceProvenance provenance;
};

class InstanceFormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/**
 * Binary layout, all little-endian: 8-byte magic "INEXLASO", uint32 version
 * (1), uint32 reserved (0), uint64 m, uint64 n, m*n float64 A row-major,
 * m float64 b, float64 gamma, float64 lambda. Writes `path` and
 * `path + ".json"`. Requires a DenseMatrix operator.
 */
void write_instance(const std::string& path, const LassoInstance& inst, double lambda,
                    const InstanceProvenance& provenance);

/// Reads both files; the sidecar is optional and defaults are used when absent.
StoredInstance read_instance(const std::string& path);

}  // namespace inexact
