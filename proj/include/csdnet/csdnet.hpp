#pragma once

#include "csdnet/analysis.hpp"
#include "csdnet/assembly.hpp"
#include "csdnet/benchmarks.hpp"
#include "csdnet/element.hpp"
#include "csdnet/errors.hpp"
#include "csdnet/form_finding.hpp"
#include "csdnet/model.hpp"
#include "csdnet/model_io.hpp"
