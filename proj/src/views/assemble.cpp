#include "mvmol/views/assemble.hpp"

namespace mvmol::views {

StructureViewVector assemble_structure_view(std::span<const ViewEmbedding> embeddings) {
  if (embeddings.size() != 3) {
    throw EmbedError(EmbedErrorKind::WrongCount,
                     "structure view needs 3 embeddings, got " + std::to_string(embeddings.size()));
  }
  const ViewEmbedding& first = embeddings[0];
  for (const auto& e : embeddings) {
    if (e.vector.size() != first.vector.size() || e.dim != e.vector.size()) {
      throw EmbedError(EmbedErrorKind::DimMismatch, "structure embeddings differ in width");
    }
    if (e.provider_id != first.provider_id || e.model_id != first.model_id) {
      throw EmbedError(EmbedErrorKind::DimMismatch, "structure embeddings come from different models");
    }
  }
  StructureViewVector out;
  out.vector.reserve(3 * first.vector.size());
  for (const auto& e : embeddings) out.vector.insert(out.vector.end(), e.vector.begin(), e.vector.end());
  return out;
}

}  // namespace mvmol::views
