#pragma once

#include "freudq/errors.hpp"
#include "freudq/summation.hpp"
#include "freudq/orthopoly.hpp"
#include "freudq/gaussquad.hpp"
#include "freudq/spaces.hpp"
#include "freudq/kernels.hpp"
#include "freudq/mzframe.hpp"
#include "freudq/wce.hpp"
#include "freudq/experiments.hpp"
#include "freudq/io.hpp"
