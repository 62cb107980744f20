#pragma once

#include "superop/algebra.hpp"
#include "superop/dynamics.hpp"
#include "superop/error.hpp"
#include "superop/expm.hpp"
#include "superop/fock.hpp"
#include "superop/liouvillian.hpp"
#include "superop/random.hpp"
#include "superop/spectrum.hpp"
#include "superop/verify.hpp"
