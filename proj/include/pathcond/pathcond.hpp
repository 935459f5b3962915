#pragma once

#include "pathcond/algebra.hpp"
#include "pathcond/decider.hpp"
#include "pathcond/equations.hpp"
#include "pathcond/errors.hpp"
#include "pathcond/json_io.hpp"
#include "pathcond/oracle.hpp"
#include "pathcond/pattern.hpp"
#include "pathcond/subpower.hpp"
#include "pathcond/term.hpp"
#include "pathcond/testing.hpp"
