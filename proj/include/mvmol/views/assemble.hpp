#pragma once

#include <span>
#include <vector>

#include "mvmol/views/embed.hpp"

namespace mvmol::views {

struct StructureViewVector {
  std::vector<double> vector;  // 3 x dim, question order
};

/// Throws EmbedError(WrongCount) unless given exactly three embeddings, and
/// EmbedError(DimMismatch) if dims or providers differ.
StructureViewVector assemble_structure_view(std::span<const ViewEmbedding> embeddings);

}  // namespace mvmol::views
