#pragma once

#include <string>

#include "fuelcast/forecast.hpp"

namespace fuelcast {

// Standalone SVG line chart of one state's actual and predicted series (million gallons
// by month) with year ticks on the x axis, value ticks on the y axis and a legend.
std::string render_state_chart(const Projection& projection, StateId state);

}  // namespace fuelcast
