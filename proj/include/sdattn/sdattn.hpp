#pragma once

#include "errors.hpp"
#include "rational.hpp"
#include "matrix.hpp"
#include "program.hpp"
#include "compiler.hpp"
#include "attention.hpp"
#include "oracle.hpp"
#include "generator.hpp"
#include "serialize.hpp"
