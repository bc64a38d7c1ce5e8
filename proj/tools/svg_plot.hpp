#pragma once

#include <optional>
#include <string>
#include <vector>

#include "gwhf/common.hpp"
#include "gwhf/zeros.hpp"

namespace gwhf::cli {

struct PlotOptions {
  std::optional<Domain> domain;  // default: bounding box of the zeros
  int size = 640;                // pixels along the longer side of the data box
  std::string title;
};

/// Scatter of charged zeros: '+' for positive, circles for negative, equal aspect.
std::string zeros_svg(const std::vector<ChargedZero>& zeros, const PlotOptions& opt);

}  // namespace gwhf::cli
