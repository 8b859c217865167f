#pragma once

#include <cstdint>
#include <memory>
#include <vector>

#include "actsearch/errors.hpp"

namespace actsearch {

using PointId = int;

// Posterior-bearing state over a finite point set with a labeled/unlabeled
// partition. Conditioning is incremental and reversible: condition() pushes
// one undo record and undo_last() restores the observable state exactly.
// Speculative tree search either works on a clone() or keeps its
// condition/undo calls balanced; concurrent evaluators need independent
// clones.
class PosteriorModel {
 public:
  virtual ~PosteriorModel() = default;

  virtual int num_points() const = 0;
  virtual int num_unlabeled() const = 0;
  virtual bool is_labeled(PointId x) const = 0;
  virtual int labeled_positives() const = 0;

  // Pr(y = 1 | x, D) for an unlabeled x; throws usage_error otherwise.
  virtual double posterior(PointId x) const = 0;

  virtual void condition(PointId x, int y) = 0;
  virtual void undo_last() = 0;
  virtual int undo_depth() const = 0;

  virtual std::unique_ptr<PosteriorModel> clone() const = 0;

  // Hash of the observable state (labels plus posterior-determining counts);
  // undo stack depth excluded.
  virtual std::uint64_t fingerprint() const = 0;

  // Pruning contract: true iff conditioning on a nontarget can never raise
  // an unlabeled posterior and posterior_upper_bound() is implemented. The
  // branch-and-bound selector refuses to run on models that return false.
  virtual bool prunable() const { return false; }

  // p*(n): an upper bound on every unlabeled posterior after conditioning on
  // any additional observation set containing at most n positives. Throws
  // usage_error if the model is not prunable or no unlabeled points remain.
  virtual double posterior_upper_bound(int n_extra_positives) const;
};

// Ascending ids of all unlabeled points.
std::vector<PointId> unlabeled_points(const PosteriorModel& m);

// FNV-1a, shared by the model fingerprint implementations.
inline std::uint64_t fnv1a(const void* data, std::size_t len,
                           std::uint64_t h = 0xcbf29ce484222325ULL) {
  const auto* p = static_cast<const unsigned char*>(data);
  for (std::size_t i = 0; i < len; ++i) {
    h ^= p[i];
    h *= 0x100000001b3ULL;
  }
  return h;
}

}  // namespace actsearch
