#pragma once

#include "abcr/config.hpp"
#include "abcr/gradients.hpp"
#include "abcr/model.hpp"
#include "abcr/optimize.hpp"
#include "abcr/oracle.hpp"
#include "abcr/presets.hpp"
#include "abcr/qfunc.hpp"
#include "abcr/simulate.hpp"
#include "abcr/types.hpp"
