#pragma once

#include "priomatch/augment.hpp"
#include "priomatch/checks.hpp"
#include "priomatch/core.hpp"
#include "priomatch/fixtures.hpp"
#include "priomatch/json_io.hpp"
#include "priomatch/matching.hpp"
#include "priomatch/mechanisms.hpp"
#include "priomatch/problem.hpp"
#include "priomatch/random_instance.hpp"
#include "priomatch/relation.hpp"
#include "priomatch/violations.hpp"
