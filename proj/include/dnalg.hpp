#pragma once

#include "dnalg/fp_linear.hpp"
#include "dnalg/steenrod.hpp"
#include "dnalg/truncated_algebra.hpp"
#include "dnalg/dn_checker.hpp"
#include "dnalg/theorem_suite.hpp"
#include "dnalg/operahedra.hpp"
#include "dnalg/presentation_io.hpp"
