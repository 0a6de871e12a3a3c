#pragma once

#include <cstdint>
#include <optional>
#include <utility>

#include "qg/ncalg.hpp"

namespace qg {

GenMorphism coproduct_morphism(const Presentation& p);
GenMorphism antipode_morphism(const Presentation& p);

TensorElem coproduct(const Presentation& p, const AlgElem& x);
AlgElem antipode(const Presentation& p, const AlgElem& x);

/// Delta^{(slots-1)}: left-iterated coproduct into `slots` tensor legs.
TensorElem iterated_coproduct(const Presentation& p, const AlgElem& x, int slots);

/// Apply the coproduct to one slot (arity k -> k+1, new legs at slot, slot+1).
TensorElem coproduct_slot(const Presentation& p, const TensorElem& t, int slot);

/// Apply (id - unit∘counit) to the given slot.
TensorElem reduce_slot(const Presentation& p, const TensorElem& t, int slot);

/// Contract one slot with the counit (arity k -> k-1).
TensorElem counit_slot(const Presentation& p, const TensorElem& t, int slot);

/// Apply an arity-1 morphism to one slot in place.
TensorElem morph_slot(const Presentation& p, const TensorElem& t, int slot,
                      const GenMorphism& f);

/// Multiply all slots together, left to right.
AlgElem multiply_slots(const Presentation& p, const TensorElem& t);

/// n-fold reduced coproduct (id - ιε)^{⊗n} ∘ Δ^{(n-1)}.
TensorElem delta_n(const Presentation& p, int n, const AlgElem& x);

/// Least h-power carried by any coefficient; empty for zero.
std::optional<int> tensor_valuation(const TensorElem& t);
std::optional<int> elem_valuation(const AlgElem& x);

/// (x⁺, ∇(x)) with x⁺ = x - ε(x) and ∇ = Δ - Δ^op.
std::pair<AlgElem, TensorElem> plus_and_nabla(const Presentation& p, const AlgElem& x);

/// Random products of generators for corpus checks; deterministic in seed.
std::vector<AlgElem> random_corpus(const Presentation& p, uint64_t seed, int count,
                                   int max_len);

/// Coassociativity, counit and antipode laws, Δ multiplicativity, and
/// ε-consistency of the rules, on generators and a seeded random corpus.
Certificate check_hopf_axioms(const Presentation& p, uint64_t seed = 0);

}  // namespace qg
