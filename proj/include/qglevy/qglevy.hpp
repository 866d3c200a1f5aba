// Umbrella header.

#pragma once

#include "qglevy/algebra.hpp"
#include "qglevy/cartan.hpp"
#include "qglevy/classical.hpp"
#include "qglevy/config.hpp"
#include "qglevy/coproduct.hpp"
#include "qglevy/driver.hpp"
#include "qglevy/fock.hpp"
#include "qglevy/lattice_model.hpp"
#include "qglevy/parser.hpp"
#include "qglevy/rational.hpp"
#include "qglevy/report.hpp"
#include "qglevy/representation.hpp"
#include "qglevy/schurmann.hpp"
#include "qglevy/semigroup.hpp"
#include "qglevy/verification.hpp"
