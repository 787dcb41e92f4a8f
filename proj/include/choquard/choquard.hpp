#pragma once

#include "choquard/geometry.hpp"
#include "choquard/specfun.hpp"
#include "choquard/quad.hpp"
#include "choquard/sphere.hpp"
#include "choquard/bubble.hpp"
#include "choquard/spectral.hpp"
#include "choquard/verify.hpp"
