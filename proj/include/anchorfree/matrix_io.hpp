#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>

#include <Eigen/Core>

namespace anchorfree::io {

void write_u32(std::ostream& out, std::uint32_t v);
void write_u64(std::ostream& out, std::uint64_t v);
void write_f64(std::ostream& out, double v);
std::uint32_t read_u32(std::istream& in);
std::uint64_t read_u64(std::istream& in);
double read_f64(std::istream& in);

/// Dense matrix file: 8-byte magic "AFDENSE1", rows and cols as
/// little-endian u64, then rows*cols little-endian f64 in column-major order.
void write_dense(const std::string& path, const Eigen::MatrixXd& m);
Eigen::MatrixXd read_dense(const std::string& path);

}  // namespace anchorfree::io
