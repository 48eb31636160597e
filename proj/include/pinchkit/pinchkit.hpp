// Umbrella header.
#pragma once

#include "pinchkit/core.hpp"
#include "pinchkit/dilation.hpp"
#include "pinchkit/essrange.hpp"
#include "pinchkit/geometry.hpp"
#include "pinchkit/io.hpp"
#include "pinchkit/matrix_io.hpp"
#include "pinchkit/numrange.hpp"
#include "pinchkit/parker.hpp"
#include "pinchkit/pinching.hpp"
#include "pinchkit/realize.hpp"
#include "pinchkit/walsh.hpp"
