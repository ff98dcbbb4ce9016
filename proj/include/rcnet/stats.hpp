#pragma once

#include <vector>

namespace rcnet {

// Exact-sort median; input copied.
double median(std::vector<double> v);

// Spearman rank correlation with average ranks for ties.
double spearman(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace rcnet
