#include <cmath>
#include <stdexcept>

#include "finex/model.hpp"

namespace finex::fixture {

namespace {

constexpr std::size_t kObjects = 11;
constexpr double kFar = 2.0;

struct Edge {
  char a;
  char b;
  double d;
};

}  // namespace

ObjectId sample_id(char name) {
  if (name < 'A' || name > 'K') throw std::out_of_range("fixture object name must be in A..K");
  return static_cast<ObjectId>(name - 'A');
}

char sample_name(ObjectId id) {
  if (id >= kObjects) throw std::out_of_range("fixture object id out of range");
  return static_cast<char>('A' + id);
}

Dataset sample_dataset() {
  const double r5_4 = std::sqrt(5.0) / 4.0;
  const double inv_r2 = 1.0 / std::sqrt(2.0);
  const Edge edges[] = {
      // C
      {'C', 'A', r5_4}, {'C', 'D', inv_r2}, {'C', 'B', 1.0}, {'C', 'E', 1.0},
      // D
      {'D', 'E', inv_r2}, {'D', 'A', 0.75}, {'D', 'F', 1.0},
      // H
      {'H', 'G', r5_4}, {'H', 'J', r5_4}, {'H', 'I', inv_r2}, {'H', 'K', 1.0},
      // I
      {'I', 'K', inv_r2}, {'I', 'F', 0.75}, {'I', 'J', 0.75},
      // J
      {'J', 'K', r5_4}, {'J', 'G', 1.0},
  };
  std::vector<double> m(kObjects * kObjects, kFar);
  for (std::size_t i = 0; i < kObjects; ++i) m[i * kObjects + i] = 0.0;
  for (const auto& e : edges) {
    const auto a = sample_id(e.a);
    const auto b = sample_id(e.b);
    m[a * kObjects + b] = e.d;
    m[b * kObjects + a] = e.d;
  }
  return Dataset::from_matrix(kObjects, std::move(m));
}

}  // namespace finex::fixture
