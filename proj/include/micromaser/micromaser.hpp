#pragma once

#include "micromaser/errors.hpp"
#include "micromaser/sector.hpp"
#include "micromaser/model.hpp"
#include "micromaser/gain.hpp"
#include "micromaser/generator.hpp"
#include "micromaser/steady.hpp"
#include "micromaser/oracle.hpp"
#include "micromaser/io.hpp"
