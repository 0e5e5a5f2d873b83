#pragma once

#include "pdslab/csq_junta.hpp"

namespace pdslab::testsupport {

using pdslab::all_coordinates_csq_visible;
using pdslab::random_visible_junta;

}  // namespace pdslab::testsupport
