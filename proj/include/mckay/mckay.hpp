#pragma once

#include "mckay/catalog.hpp"
#include "mckay/correspondence.hpp"
#include "mckay/cyclotomic.hpp"
#include "mckay/error.hpp"
#include "mckay/group.hpp"
#include "mckay/jets.hpp"
#include "mckay/motivic.hpp"
#include "mckay/rational.hpp"
#include "mckay/resolution.hpp"
