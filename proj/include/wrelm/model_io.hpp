#pragma once

#include "wrelm/trainer.hpp"

#include <string>

namespace wrelm {

class ModelVersionError : public IoError {
 public:
  using IoError::IoError;
};

class ModelChecksumError : public IoError {
 public:
  using IoError::IoError;
};

// Single self-describing binary container, little-endian throughout:
//
//   magic      8  "WRELMMDL"
//   version    u32   (currently 1)
//   reserved   u32   0
//   seed       u64
//   z          u32
//   n_neurons  u32
//   activation u8    0 = exact, 1 = pade
//   w0_mode    u8    0 = scalar, 1 = per-sample diagonal
//   padding    u16   0
//   p_low      f64
//   p_high     f64
//   svd_tol    f64
//   w0_len     u64   1 for scalar, else diagonal length
//   w0         f64 x w0_len
//   cols       u64   scaler arity (z + 1)
//   bounds     (lo f64, hi f64) x cols
//   a          f64 x (z * n_neurons), row-major
//   p0         f64 x (n_neurons^2), row-major
//   beta0      f64 x n_neurons
//   checksum   u64   FNV-1a 64 over every preceding byte
//
// Round-trips are bit-exact: doubles are stored as their IEEE-754 bits.
void save_model(const OfflineModel& model, const std::string& path);
OfflineModel load_model(const std::string& path);

}  // namespace wrelm
