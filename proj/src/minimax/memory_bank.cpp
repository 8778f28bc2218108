#include "mmdd/minimax/memory_bank.hpp"

#include "mmdd/error.hpp"

namespace mmdd {

MemoryBank::MemoryBank(int capacity, int num_classes, int dimension, BankPartition partition)
    : capacity_(capacity), num_classes_(num_classes), dimension_(dimension), partition_(partition) {
  require(capacity > 0, ErrorCode::invalid_argument, "memory capacity must be positive");
  require(num_classes > 0, ErrorCode::invalid_argument, "class count must be positive");
  require(dimension > 0, ErrorCode::invalid_argument, "embedding dimension must be positive");
  queues_.resize(partition == BankPartition::per_class ? num_classes : 1);
}

int MemoryBank::queue_index(int label) const {
  require(label >= 0 && label < num_classes_, ErrorCode::invalid_argument,
          "label " + std::to_string(label) + " is not in the class set");
  return partition_ == BankPartition::per_class ? label : 0;
}

void MemoryBank::enqueue(const Matrix& embeddings, const Labels& labels) {
  require(static_cast<Eigen::Index>(labels.size()) == embeddings.rows(), ErrorCode::invalid_argument,
          "one label per embedding required");
  require(embeddings.rows() == 0 || embeddings.cols() == dimension_, ErrorCode::invalid_argument,
          "embedding dimension does not match the bank");
  require(embeddings.allFinite(), ErrorCode::invalid_argument, "cannot enqueue non-finite embeddings");
  for (int label : labels) {
    queue_index(label);
  }
  for (Eigen::Index i = 0; i < embeddings.rows(); ++i) {
    auto& q = queues_[queue_index(labels[i])];
    q.emplace_back(embeddings.row(i).transpose());
    if (static_cast<int>(q.size()) > capacity_) {
      q.pop_front();
    }
  }
}

const std::deque<Vector>& MemoryBank::entries(int label) const { return queues_[queue_index(label)]; }

std::size_t MemoryBank::total_size() const {
  std::size_t n = 0;
  for (const auto& q : queues_) n += q.size();
  return n;
}

}  // namespace mmdd
