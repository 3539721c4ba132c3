#ifndef QMKIT_QMKIT_HPP
#define QMKIT_QMKIT_HPP

#include "arith.hpp"
#include "brauer.hpp"
#include "character.hpp"
#include "cohomology.hpp"
#include "errors.hpp"
#include "finite_field.hpp"
#include "lfactor.hpp"
#include "multiquad.hpp"
#include "qm_family.hpp"
#include "quadratic.hpp"
#include "square_class.hpp"
#include "twisted_algebra.hpp"

#endif // QMKIT_QMKIT_HPP
