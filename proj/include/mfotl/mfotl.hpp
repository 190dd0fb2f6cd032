#pragma once

#include "mfotl/errors.hpp"
#include "mfotl/formula.hpp"
#include "mfotl/interval.hpp"
#include "mfotl/monitor.hpp"
#include "mfotl/oracle.hpp"
#include "mfotl/parser.hpp"
#include "mfotl/progress.hpp"
#include "mfotl/safety.hpp"
#include "mfotl/table.hpp"
#include "mfotl/trace.hpp"
#include "mfotl/value.hpp"
