// antipt.hpp — umbrella header

#pragma once

#include "antipt/effective_model.hpp"
#include "antipt/gaussian_info.hpp"
#include "antipt/langevin_spectra.hpp"
#include "antipt/eit_semiclassical.hpp"
#include "antipt/microscopic_exchange.hpp"
#include "antipt/config.hpp"
#include "antipt/commands.hpp"
