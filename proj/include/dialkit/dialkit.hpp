#pragma once

#include "dialkit/correction.hpp"
#include "dialkit/dial_model.hpp"
#include "dialkit/errors.hpp"
#include "dialkit/geometry.hpp"
#include "dialkit/io.hpp"
#include "dialkit/metrics.hpp"
#include "dialkit/pipeline.hpp"
#include "dialkit/simulator.hpp"
