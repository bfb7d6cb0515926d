#pragma once

#include <string>

#include "qfem/mesh.hpp"

namespace qfem {

/// Named refinement-predicate families used by the mesh command and the
/// verification studies:
///   uniform - refine everything to the requested depth
///   corner  - refine cells overlapping the open SW quadrant to the depth
///             (unbalanced for depth >= 3 until balance_two_to_one runs)
///   diag    - refine cells crossed by the main diagonal of the domain
///   grad    - refine where the manufactured Poisson solution has a steep
///             gradient, threshold scaled per level
enum class GeneratorKind { Uniform, Corner, Diag, Grad };

GeneratorKind parse_generator(const std::string& name);
const char* generator_name(GeneratorKind kind);

RefinePredicate make_generator(GeneratorKind kind, const Domain& domain, int depth);

/// Convenience: build (and optionally balance) a generator-family mesh.
QuadtreeMesh make_mesh(GeneratorKind kind, const Domain& domain, int depth, bool balance);

}  // namespace qfem
