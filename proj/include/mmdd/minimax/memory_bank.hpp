#pragma once

#include <deque>
#include <span>
#include <vector>

#include "mmdd/minimax/config.hpp"
#include "mmdd/types.hpp"

namespace mmdd {

// Bounded FIFO queues of embedding snapshots. In per-class mode each label owns
// a queue; in global mode every label shares queue 0. Entries are copies, so
// later parameter updates never reach them.
class MemoryBank {
 public:
  MemoryBank(int capacity, int num_classes, int dimension,
             BankPartition partition = BankPartition::per_class);

  int capacity() const { return capacity_; }
  int num_classes() const { return num_classes_; }
  int dimension() const { return dimension_; }
  BankPartition partition() const { return partition_; }

  // Rows of `embeddings` are appended in order; label i goes with row i.
  void enqueue(const Matrix& embeddings, const Labels& labels);

  // Queue consulted for `label` (oldest entry first).
  const std::deque<Vector>& entries(int label) const;
  std::size_t size(int label) const { return entries(label).size(); }
  std::size_t total_size() const;

 private:
  int queue_index(int label) const;

  int capacity_;
  int num_classes_;
  int dimension_;
  BankPartition partition_;
  std::vector<std::deque<Vector>> queues_;
};

}  // namespace mmdd
