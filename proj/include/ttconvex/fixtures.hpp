#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "ttconvex/automorphism.hpp"

namespace ttconvex::fixtures {

/// a->a, b->ba, c->caa, d->dc, x->y, y->xcy on F6, with inverse.
Automorphism f6();
/// a->a, b->ba, c->ca, d->dcb' on F4, with inverse.
Automorphism psi_f4();
/// a->axyx'y', x->y', y->yx on F3, with inverse.
Automorphism eglinear();
Automorphism identity(std::size_t rank = 3);

/// Automorphism file text (with [filtration] for the rose form) by fixture name.
std::string text(std::string_view name);
Automorphism by_name(std::string_view name);
std::vector<std::string> names();

}  // namespace ttconvex::fixtures
