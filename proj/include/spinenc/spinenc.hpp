#pragma once

#include "spinenc/errors.hpp"
#include "spinenc/spincore.hpp"
#include "spinenc/pauli.hpp"
#include "spinenc/circuit.hpp"
#include "spinenc/encodings.hpp"
#include "spinenc/fitting.hpp"
#include "spinenc/qham.hpp"
#include "spinenc/statevector.hpp"
#include "spinenc/trotter.hpp"
#include "spinenc/density.hpp"
#include "spinenc/sampling.hpp"
#include "spinenc/sector.hpp"
#include "spinenc/analysis.hpp"
#include "spinenc/io.hpp"
#include "spinenc/experiments.hpp"
