#pragma once

#include "dotcall64/callspec.hpp"
#include "dotcall64/diagnostics.hpp"
#include "dotcall64/dispatch.hpp"
#include "dotcall64/engine.hpp"
#include "dotcall64/error.hpp"
#include "dotcall64/marshal.hpp"
#include "dotcall64/parcast.hpp"
#include "dotcall64/vector.hpp"
#include "dotcall64/vector_io.hpp"
