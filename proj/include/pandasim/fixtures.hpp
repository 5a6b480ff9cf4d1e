#pragma once

#include <vector>

#include "pandasim/analysis.hpp"

namespace pandasim {

/// Eighteen-scenario reference frontier used by posterior-selection fixtures and the
/// explorer fixture bundle. Each point sits at the midpoint of its published quartile
/// label, nudged by at most 3% of the objective range so that no point dominates
/// another. Direct benefits follow smooth synthetic response curves:
///   area = 4000 (1 - exp(-g2g / 800)) Mu
///   electricity = 3e6 (price / 0.65)^-0.8 kWh
///   burden = g2g * area + (0.65 - price) * electricity
std::vector<ParetoPoint> reference_frontier_fixture();

/// Published labels of the fixture, in fixture order.
std::vector<LabelTriple> reference_frontier_labels();

}  // namespace pandasim
