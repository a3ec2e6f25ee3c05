#pragma once

#include "brokenhyp/complex.hpp"
#include "brokenhyp/develop.hpp"
#include "brokenhyp/error.hpp"
#include "brokenhyp/forms.hpp"
#include "brokenhyp/fstruct.hpp"
#include "brokenhyp/hstruct.hpp"
#include "brokenhyp/io.hpp"
#include "brokenhyp/minkowski.hpp"
#include "brokenhyp/sampling.hpp"
#include "brokenhyp/svg.hpp"
