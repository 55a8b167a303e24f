#ifndef CONEKIT_CONEKIT_HPP
#define CONEKIT_CONEKIT_HPP

#include "conekit/errors.hpp"
#include "conekit/numerics.hpp"
#include "conekit/sdp.hpp"
#include "conekit/spaces.hpp"
#include "conekit/idealnorms.hpp"
#include "conekit/cones.hpp"
#include "conekit/lorentzmaps.hpp"
#include "conekit/classify.hpp"
#include "conekit/repro.hpp"
#include "conekit/report.hpp"

#endif  // CONEKIT_CONEKIT_HPP
