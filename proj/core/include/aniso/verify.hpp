#pragma once

#include "aniso/verify/algebraic.hpp"
#include "aniso/verify/convergence.hpp"
#include "aniso/verify/functional.hpp"
#include "aniso/verify/harnack.hpp"
#include "aniso/verify/hoelder.hpp"
#include "aniso/verify/report.hpp"
