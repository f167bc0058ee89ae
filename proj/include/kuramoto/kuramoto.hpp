#pragma once

#include "kuramoto/dynamics.hpp"
#include "kuramoto/error.hpp"
#include "kuramoto/experiments.hpp"
#include "kuramoto/format.hpp"
#include "kuramoto/graph.hpp"
#include "kuramoto/matrix.hpp"
#include "kuramoto/rng.hpp"
#include "kuramoto/spectral.hpp"
#include "kuramoto/state.hpp"

namespace kuramoto {
inline constexpr const char* version = "0.1.0";
}
