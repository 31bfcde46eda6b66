#include "tensorlev/common.hpp"

namespace tensorlev {

const char* version() { return TENSORLEV_VERSION_STRING; }

}  // namespace tensorlev
