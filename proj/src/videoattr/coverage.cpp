#include "vibench/videoattr/coverage.hpp"

namespace vibench::videoattr {

template double invalid_fraction<double>(const Affine2<double>&, int, int);

}  // namespace vibench::videoattr
