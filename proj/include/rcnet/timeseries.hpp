#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace rcnet {

struct TimeSeries {
  std::vector<double> samples;
  double step = 1.0;  // sampling interval in model time units

  std::size_t size() const { return samples.size(); }
  double operator[](std::size_t i) const { return samples[i]; }
};

struct SignalError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

double mean(const std::vector<double>& v);
// population convention: divide by N
double stddev_pop(const std::vector<double>& v);

// Subtract the mean and scale to unit standard deviation (population
// convention). Throws SignalError on constant input.
TimeSeries standardize(const TimeSeries& s);

// Two-column CSV (index,value) with a one-line header.
void write_csv(const TimeSeries& s, const std::string& path);

}  // namespace rcnet
