#pragma once

// Core library. Reports (report.hpp) and the command line (cli.hpp) are separate because they
// pull in nlohmann_json and CLI11.

#include "colline/certificate.hpp"
#include "colline/classify.hpp"
#include "colline/error.hpp"
#include "colline/geometry.hpp"
#include "colline/linalg.hpp"
#include "colline/maps.hpp"
#include "colline/matrix.hpp"
#include "colline/outcome.hpp"
#include "colline/parser.hpp"
#include "colline/predicates.hpp"
#include "colline/probe.hpp"
#include "colline/scalar.hpp"
#include "colline/theorem.hpp"
#include "colline/vector.hpp"
