#include "cubical/base.hpp"
