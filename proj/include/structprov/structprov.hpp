#pragma once

// Everything except the CLI and URL fetching, which pull in httplib.

#include "structprov/access.hpp"
#include "structprov/data_value.hpp"
#include "structprov/error.hpp"
#include "structprov/foo.hpp"
#include "structprov/foo_eval.hpp"
#include "structprov/foo_typecheck.hpp"
#include "structprov/harness/suites.hpp"
#include "structprov/inference.hpp"
#include "structprov/ingest.hpp"
#include "structprov/preferred.hpp"
#include "structprov/provider.hpp"
#include "structprov/shape.hpp"
#include "structprov/shape_io.hpp"
