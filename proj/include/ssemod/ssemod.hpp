#pragma once

#include "ssemod/error.hpp"
#include "ssemod/graph.hpp"
#include "ssemod/metrics.hpp"
#include "ssemod/spectral.hpp"
#include "ssemod/profile.hpp"
#include "ssemod/sse.hpp"
#include "ssemod/oracle.hpp"
#include "ssemod/generators.hpp"
#include "ssemod/distinguisher.hpp"
#include "ssemod/report.hpp"
