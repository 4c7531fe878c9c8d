// Umbrella header: the whole library.

#pragma once

#include "sopt/analysis.hpp"
#include "sopt/composition.hpp"
#include "sopt/errors.hpp"
#include "sopt/generate.hpp"
#include "sopt/io.hpp"
#include "sopt/linalg.hpp"
#include "sopt/lp.hpp"
#include "sopt/principles.hpp"
#include "sopt/rational.hpp"
#include "sopt/report.hpp"
#include "sopt/selftest.hpp"
#include "sopt/system.hpp"
#include "sopt/theory.hpp"
