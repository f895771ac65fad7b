#pragma once

#include "cfguard/geometry.hpp"
#include "cfguard/polygon.hpp"
#include "cfguard/visibility.hpp"
#include "cfguard/geodesic.hpp"
#include "cfguard/guarding.hpp"
#include "cfguard/funnel.hpp"
#include "cfguard/weak_visibility.hpp"
#include "cfguard/decomposition.hpp"
#include "cfguard/sat.hpp"
#include "cfguard/verification.hpp"
#include "cfguard/instances.hpp"
#include "cfguard/io.hpp"
