#ifndef HSCS_CUBE_HPP
#define HSCS_CUBE_HPP

#include <cstdint>
#include <cstring>
#include <fstream>
#include <random>
#include <string>
#include <vector>

#include "hscs/metrics.hpp"
#include "hscs/sensing.hpp"

namespace hscs {

/// X x Y x Z hyperspectral cube, band-interleaved-by-pixel: the value at
/// (x, y, band) sits at ((x*y_dim + y)*z_dim + band).
struct HsiCube {
    std::size_t x_dim = 0;
    std::size_t y_dim = 0;
    std::size_t z_dim = 0;
    std::vector<double> data;
    std::string name;

    std::size_t pixel_count() const noexcept { return x_dim * y_dim; }

    double& at(std::size_t x, std::size_t y, std::size_t band) {
        return data[(x * y_dim + y) * z_dim + band];
    }
    double at(std::size_t x, std::size_t y, std::size_t band) const {
        return data[(x * y_dim + y) * z_dim + band];
    }
};

inline Spectrum extract_pixel(const HsiCube& cube, std::size_t x,
                              std::size_t y) {
    require(x < cube.x_dim && y < cube.y_dim,
            "extract_pixel: coordinates out of range");
    Spectrum f;
    f.values.resize(cube.z_dim);
    for (std::size_t b = 0; b < cube.z_dim; ++b) f.values[b] = cube.at(x, y, b);
    return f;
}

inline void set_pixel(HsiCube& cube, std::size_t x, std::size_t y,
                      const Spectrum& f) {
    require(x < cube.x_dim && y < cube.y_dim && f.size() == cube.z_dim,
            "set_pixel: shape mismatch");
    for (std::size_t b = 0; b < cube.z_dim; ++b) cube.at(x, y, b) = f.values[b];
}

// Cube file layout (fixed little-endian, see docs/cube_format.md):
//   magic "HSCB" | u32 version=1 | u32 dtype=1 (float32) | u32 x,y,z
//   | u32 name_len | name bytes | x*y*z float32 payload
namespace detail {
inline void write_u32(std::ostream& os, std::uint32_t v) {
    unsigned char b[4] = {static_cast<unsigned char>(v),
                          static_cast<unsigned char>(v >> 8),
                          static_cast<unsigned char>(v >> 16),
                          static_cast<unsigned char>(v >> 24)};
    os.write(reinterpret_cast<const char*>(b), 4);
}
inline std::uint32_t read_u32(std::istream& is, const char* field) {
    unsigned char b[4];
    if (!is.read(reinterpret_cast<char*>(b), 4))
        throw IoError(std::string("cube load: truncated header field '") +
                      field + "'");
    return static_cast<std::uint32_t>(b[0]) |
           (static_cast<std::uint32_t>(b[1]) << 8) |
           (static_cast<std::uint32_t>(b[2]) << 16) |
           (static_cast<std::uint32_t>(b[3]) << 24);
}
}  // namespace detail

inline void save_cube(const HsiCube& cube, const std::string& path) {
    require(cube.data.size() == cube.x_dim * cube.y_dim * cube.z_dim,
            "save_cube: payload size inconsistent with dimensions");
    std::ofstream os(path, std::ios::binary);
    if (!os) throw IoError("save_cube: cannot open '" + path + "'");
    os.write("HSCB", 4);
    detail::write_u32(os, 1);  // version
    detail::write_u32(os, 1);  // dtype: float32
    detail::write_u32(os, static_cast<std::uint32_t>(cube.x_dim));
    detail::write_u32(os, static_cast<std::uint32_t>(cube.y_dim));
    detail::write_u32(os, static_cast<std::uint32_t>(cube.z_dim));
    detail::write_u32(os, static_cast<std::uint32_t>(cube.name.size()));
    os.write(cube.name.data(), static_cast<std::streamsize>(cube.name.size()));
    std::vector<float> payload(cube.data.begin(), cube.data.end());
    static_assert(sizeof(float) == 4);
    os.write(reinterpret_cast<const char*>(payload.data()),
             static_cast<std::streamsize>(payload.size() * 4));
    if (!os) throw IoError("save_cube: write failed for '" + path + "'");
}

inline HsiCube load_cube(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw IoError("load_cube: cannot open '" + path + "'");
    char magic[4];
    if (!is.read(magic, 4) || std::memcmp(magic, "HSCB", 4) != 0)
        throw IoError("load_cube: bad magic (field 'magic')");
    const std::uint32_t version = detail::read_u32(is, "version");
    if (version != 1)
        throw IoError("load_cube: unsupported version (field 'version')");
    const std::uint32_t dtype = detail::read_u32(is, "dtype");
    if (dtype != 1)
        throw IoError("load_cube: unsupported dtype (field 'dtype')");
    HsiCube cube;
    cube.x_dim = detail::read_u32(is, "x_dim");
    cube.y_dim = detail::read_u32(is, "y_dim");
    cube.z_dim = detail::read_u32(is, "z_dim");
    if (cube.x_dim == 0 || cube.y_dim == 0 || cube.z_dim == 0)
        throw IoError("load_cube: zero dimension (field 'dims')");
    const std::uint32_t name_len = detail::read_u32(is, "name_len");
    cube.name.resize(name_len);
    if (name_len > 0 &&
        !is.read(cube.name.data(), static_cast<std::streamsize>(name_len)))
        throw IoError("load_cube: truncated name (field 'name')");

    const std::size_t count = cube.x_dim * cube.y_dim * cube.z_dim;
    std::vector<float> payload(count);
    if (!is.read(reinterpret_cast<char*>(payload.data()),
                 static_cast<std::streamsize>(count * 4)))
        throw IoError("load_cube: payload size mismatch (field 'payload')");
    if (is.peek() != std::char_traits<char>::eof())
        throw IoError("load_cube: trailing bytes after payload");
    cube.data.assign(payload.begin(), payload.end());
    for (std::size_t i = 0; i < count; ++i)
        if (!std::isfinite(cube.data[i]))
            throw IoError("load_cube: non-finite value at payload index " +
                          std::to_string(i) + " (field 'payload')");
    return cube;
}

/// Random exactly-kappa-sparse transform vector whose support is closed
/// under DFT conjugate symmetry, so the synthesized spectrum is real.
inline CVector random_symmetric_sparse(std::size_t n, std::size_t kappa,
                                       std::mt19937_64& rng) {
    require(kappa >= 1 && kappa <= n, "random_symmetric_sparse: bad kappa");
    std::vector<std::size_t> singles{0};  // self-conjugate bins
    if (n % 2 == 0) singles.push_back(n / 2);
    std::vector<std::size_t> pairs;  // k paired with n-k
    for (std::size_t k = 1; 2 * k < n; ++k) pairs.push_back(k);
    std::shuffle(pairs.begin(), pairs.end(), rng);
    std::shuffle(singles.begin(), singles.end(), rng);

    std::uniform_real_distribution<double> modulus(0.5, 1.0);
    std::uniform_real_distribution<double> phase(0.0,
                                                 2.0 * std::numbers::pi);
    CVector x(n);
    std::size_t remaining = kappa;
    for (std::size_t k : pairs) {
        if (remaining < 2) break;
        const Complex z = std::polar(modulus(rng), phase(rng));
        x[k] = z;
        x[n - k] = std::conj(z);
        remaining -= 2;
    }
    for (std::size_t k : singles) {
        if (remaining == 0) break;
        const double sign = phase(rng) < std::numbers::pi ? 1.0 : -1.0;
        x[k] = Complex{sign * modulus(rng), 0.0};
        --remaining;
    }
    require(remaining == 0, "random_symmetric_sparse: kappa unreachable");
    return x;
}

/// Synthetic cube whose every pixel has a planted exactly-kappa-sparse
/// transform representation; the desk-scale ground-truth stand-in for the
/// benchmark datasets.
inline HsiCube generate_phantom_cube(std::size_t x_dim, std::size_t y_dim,
                                     std::size_t z_dim, std::size_t kappa,
                                     std::uint64_t seed) {
    require(x_dim >= 1 && y_dim >= 1 && z_dim >= 2,
            "generate_phantom_cube: bad dimensions");
    require(kappa >= 1 && kappa <= z_dim,
            "generate_phantom_cube: kappa must lie in [1, z]");
    const TransformBasis psi = build_dft_basis(z_dim);
    HsiCube cube;
    cube.x_dim = x_dim;
    cube.y_dim = y_dim;
    cube.z_dim = z_dim;
    cube.name = "phantom";
    cube.data.resize(x_dim * y_dim * z_dim);
    for (std::size_t p = 0; p < x_dim * y_dim; ++p) {
        std::mt19937_64 rng(mix_seed(seed, p));
        const CVector x = random_symmetric_sparse(z_dim, kappa, rng);
        const Spectrum f = synthesize(psi, x).spectrum;
        set_pixel(cube, p / y_dim, p % y_dim, f);
    }
    return cube;
}

/// Band-averaged PSNR and SSI between two cubes: each metric is computed
/// per spectral band and the results are averaged. Infinite per-band PSNR
/// is replaced by `psnr_cap_db` before averaging, with the count reported.
inline QualityReport cube_quality(const HsiCube& a, const HsiCube& ref,
                                  double psnr_cap_db = 300.0,
                                  const SsiParams& params = {}) {
    require(a.x_dim == ref.x_dim && a.y_dim == ref.y_dim &&
                a.z_dim == ref.z_dim,
            "cube_quality: dimension mismatch");
    QualityReport report;
    std::vector<double> band_a(a.pixel_count()), band_ref(a.pixel_count());
    double psnr_acc = 0.0;
    double ssi_acc = 0.0;
    for (std::size_t b = 0; b < a.z_dim; ++b) {
        for (std::size_t x = 0; x < a.x_dim; ++x)
            for (std::size_t y = 0; y < a.y_dim; ++y) {
                band_a[x * a.y_dim + y] = a.at(x, y, b);
                band_ref[x * a.y_dim + y] = ref.at(x, y, b);
            }
        double p = psnr(band_a, band_ref);
        if (p > psnr_cap_db) {
            p = psnr_cap_db;
            ++report.capped_psnr_bands;
        }
        psnr_acc += p;
        ssi_acc += ssi(band_a, band_ref, a.y_dim, a.x_dim, params).value;
    }
    report.psnr_db = psnr_acc / static_cast<double>(a.z_dim);
    report.ssi = ssi_acc / static_cast<double>(a.z_dim);
    return report;
}

}  // namespace hscs

#endif  // HSCS_CUBE_HPP
