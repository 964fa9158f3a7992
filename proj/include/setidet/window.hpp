#pragma once

#include <cmath>
#include <cstddef>
#include <numbers>
#include <vector>

namespace setidet {

// Hamming window, symmetric convention: w[k] = 0.54 - 0.46*cos(2*pi*k/(L-1)).
// No coherent-gain renormalization; downstream thresholds are calibrated
// empirically so any fixed convention is self-consistent.
inline std::vector<double> hamming_window(std::size_t len) {
  std::vector<double> w(len, 1.0);
  if (len < 2) return w;
  for (std::size_t k = 0; k < len; ++k) {
    w[k] = 0.54 - 0.46 * std::cos(2.0 * std::numbers::pi * double(k) / double(len - 1));
  }
  return w;
}

}  // namespace setidet
