#pragma once

#include "rushlarsen/errors.hpp"
#include "rushlarsen/harness.hpp"
#include "rushlarsen/history.hpp"
#include "rushlarsen/integrate.hpp"
#include "rushlarsen/membrane.hpp"
#include "rushlarsen/phi.hpp"
#include "rushlarsen/problem.hpp"
#include "rushlarsen/problems.hpp"
#include "rushlarsen/schemes.hpp"
#include "rushlarsen/stability.hpp"
