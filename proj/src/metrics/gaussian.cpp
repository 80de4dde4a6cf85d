#include "vibench/metrics/gaussian.hpp"

namespace vibench::metrics {

template struct GaussianSummary<double>;
template class GaussianAccumulator<double>;
template double frechet_distance<double>(const GaussianSummary<double>&, const GaussianSummary<double>&,
                                         const FrechetOptions&);

}  // namespace vibench::metrics
