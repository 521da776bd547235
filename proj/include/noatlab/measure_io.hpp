#pragma once

#include <filesystem>
#include <iosfwd>
#include "json.hpp"

#include "noatlab/fourier_table.hpp"

namespace noatlab {

// Measure file layout:
//   {"label": str, "half_width": N, "tail_bound": x, "coeffs": [[n, re, im], ...]}
// Only n >= 0 is listed, in increasing order; unlisted n in [0, N] are zero.

struct MeasureReadOptions {
  /// Reject tables whose Toeplitz matrix of order min(N+1, psd_max_order)
  /// has an eigenvalue below -1e-8.
  bool check_psd = true;
  int psd_max_order = 256;
};

nlohmann::json measure_to_json(const FourierTable& t);
FourierTable measure_from_json(const nlohmann::json& j, const MeasureReadOptions& opts = {});

void write_measure(std::ostream& os, const FourierTable& t);
void write_measure_file(const std::filesystem::path& path, const FourierTable& t);
FourierTable read_measure_file(const std::filesystem::path& path,
                               const MeasureReadOptions& opts = {});

}  // namespace noatlab
