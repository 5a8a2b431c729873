// Test helper: writes a deterministic raw volume (headerless row-major,
// native little-endian floats).
//
//   hgr_genraw <path> <f32|f64> <n0[,n1[,n2]]> [pattern]
//
// patterns: smooth (default), random, affine

#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

namespace {

std::vector<std::size_t> parse_dims(const std::string& arg) {
  std::vector<std::size_t> dims;
  std::stringstream ss(arg);
  std::string part;
  while (std::getline(ss, part, ',')) dims.push_back(std::stoul(part));
  return dims;
}

template <class T>
int generate(const std::string& path, const std::vector<std::size_t>& dims,
             const std::string& pattern) {
  std::size_t ext[3] = {1, 1, 1};
  for (std::size_t d = 0; d < dims.size(); ++d) ext[d] = dims[d];
  std::vector<T> values;
  values.reserve(ext[0] * ext[1] * ext[2]);
  std::mt19937 rng(12345);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  for (std::size_t i = 0; i < ext[0]; ++i)
    for (std::size_t j = 0; j < ext[1]; ++j)
      for (std::size_t k = 0; k < ext[2]; ++k) {
        double v = 0;
        if (pattern == "random")
          v = dist(rng);
        else if (pattern == "affine")
          v = 2.0 * double(i) - 0.5 * double(j) + 0.25 * double(k) + 1.0;
        else
          v = std::sin(0.21 * double(i)) * std::cos(0.13 * double(j)) +
              0.5 * std::sin(0.07 * double(k));
        values.push_back(static_cast<T>(v));
      }
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) {
    std::cerr << "cannot open " << path << "\n";
    return 1;
  }
  os.write(reinterpret_cast<const char*>(values.data()),
           static_cast<std::streamsize>(values.size() * sizeof(T)));
  return os ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  if (argc < 4) {
    std::cerr << "usage: hgr_genraw <path> <f32|f64> <n0[,n1[,n2]]> [pattern]\n";
    return 1;
  }
  const std::string path = argv[1];
  const std::string precision = argv[2];
  const auto dims = parse_dims(argv[3]);
  const std::string pattern = argc > 4 ? argv[4] : "smooth";
  if (dims.empty() || dims.size() > 3) {
    std::cerr << "dims must have 1 to 3 components\n";
    return 1;
  }
  if (precision == "f32") return generate<float>(path, dims, pattern);
  if (precision == "f64") return generate<double>(path, dims, pattern);
  std::cerr << "precision must be f32 or f64\n";
  return 1;
}
