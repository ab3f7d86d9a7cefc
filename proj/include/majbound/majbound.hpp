#pragma once

#include "majbound/config.hpp"
#include "majbound/errors.hpp"
#include "majbound/spectral.hpp"
#include "majbound/quantum.hpp"
#include "majbound/majorization.hpp"
#include "majbound/entropic.hpp"
#include "majbound/multipartite.hpp"
#include "majbound/oracle.hpp"
#include "majbound/io.hpp"
