#pragma once

#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "egodist/distances.hpp"
#include "egodist/evaluation.hpp"

namespace egodist::plot {

/// Precision/recall curves, one polyline per named curve, over iso-F1
/// contours.
void pr_curves(std::ostream& out, const std::string& title,
               const std::vector<std::pair<std::string, const PrCurve*>>& curves);

/// Distance matrix heatmap, darker is closer.
void heatmap(std::ostream& out, const DistanceMatrix& m, const std::string& title);

/// Distance to baseline per step, with a quartile band per feature below.
void timeline(std::ostream& out, const std::vector<std::string>& labels, const Timeline& tl, const std::string& title);

/// Dendrogram drawn left to right with leaves on the vertical axis.
void dendrogram(std::ostream& out, const Dendrogram& tree, const std::string& title);

}  // namespace egodist::plot
