#include "fracdrift/field_io.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <sstream>

#include "fracdrift/error.hpp"

namespace fracdrift {

namespace {

template <typename T>
void put_le(std::string& out, T value) {
  using U = std::conditional_t<sizeof(T) == 8, std::uint64_t, std::uint32_t>;
  U bits = std::bit_cast<U>(value);
  for (std::size_t b = 0; b < sizeof(U); ++b) out.push_back(static_cast<char>((bits >> (8 * b)) & 0xff));
}

template <typename T>
T get_le(const std::string& in, std::size_t& pos) {
  using U = std::conditional_t<sizeof(T) == 8, std::uint64_t, std::uint32_t>;
  if (pos + sizeof(U) > in.size()) throw Error(ErrorCode::Io, "FRQS: truncated data");
  U bits = 0;
  for (std::size_t b = 0; b < sizeof(U); ++b)
    bits |= static_cast<U>(static_cast<unsigned char>(in[pos + b])) << (8 * b);
  pos += sizeof(U);
  return std::bit_cast<T>(bits);
}

}  // namespace

std::string encode_frqs(const RealField& f) {
  const Grid& g = f.grid();
  std::string out = "FRQS";
  out.reserve(4 + 12 + 8 + 8 * f.size());
  put_le<std::uint32_t>(out, kFrqsVersion);
  put_le<std::uint32_t>(out, static_cast<std::uint32_t>(g.dim()));
  put_le<std::uint32_t>(out, static_cast<std::uint32_t>(g.points()));
  put_le<double>(out, g.side());
  for (double v : f.samples()) put_le<double>(out, v);
  return out;
}

RealField decode_frqs(const std::string& bytes) {
  if (bytes.size() < 4 || bytes.compare(0, 4, "FRQS") != 0) throw Error(ErrorCode::Io, "FRQS: bad magic");
  std::size_t pos = 4;
  auto version = get_le<std::uint32_t>(bytes, pos);
  if (version != kFrqsVersion)
    throw Error(ErrorCode::Io, "FRQS: unsupported version " + std::to_string(version));
  auto dim = get_le<std::uint32_t>(bytes, pos);
  auto points = get_le<std::uint32_t>(bytes, pos);
  auto side = get_le<double>(bytes, pos);
  Grid grid(static_cast<int>(dim), static_cast<int>(points), side);
  if (bytes.size() - pos != 8 * grid.size()) throw Error(ErrorCode::Io, "FRQS: sample count mismatch");
  std::vector<double> samples(grid.size());
  for (auto& v : samples) v = get_le<double>(bytes, pos);
  return RealField(grid, std::move(samples));
}

void write_frqs(const std::filesystem::path& path, const RealField& f) {
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) throw Error(ErrorCode::Io, "cannot open " + path.string() + " for writing");
  const std::string bytes = encode_frqs(f);
  os.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!os) throw Error(ErrorCode::Io, "failed writing " + path.string());
}

RealField read_frqs(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw Error(ErrorCode::Io, "cannot open " + path.string());
  std::ostringstream ss;
  ss << is.rdbuf();
  return decode_frqs(ss.str());
}

}  // namespace fracdrift
