#pragma once

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "bolab/core/spacetime_field.hpp"
#include "bolab/core/spectral_field.hpp"

namespace bolab {

// Field files are a single-line JSON header followed by a raw little-endian
// array of interleaved real/imaginary 64-bit floats. 1D data ("kind": "data")
// stores the spectral coefficients in FFT order; 2D fields ("kind":
// "spacetime") store rows x-major, t inner, matching the in-memory layout.
// The payload is bit-exact: writing and re-reading round-trips every value.

static_assert(std::endian::native == std::endian::little,
              "field files are little-endian; this platform is not");

namespace detail {

inline void append_payload(std::string& out, const std::vector<cplx>& v) {
    size_t base = out.size();
    out.resize(base + v.size() * 2 * sizeof(double));
    std::memcpy(out.data() + base, v.data(), v.size() * 2 * sizeof(double));
}

inline std::vector<cplx> parse_payload(const std::string& bytes, size_t offset, size_t count,
                                       const std::string& path) {
    if (bytes.size() - offset != count * 2 * sizeof(double))
        throw std::runtime_error("field file " + path + ": payload holds " +
                                 std::to_string((bytes.size() - offset) / (2 * sizeof(double))) +
                                 " complex values, header promises " + std::to_string(count));
    std::vector<cplx> v(count);
    std::memcpy(v.data(), bytes.data() + offset, count * 2 * sizeof(double));
    return v;
}

inline std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open field file " + path);
    std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return bytes;
}

inline void spit(const std::string& path, const std::string& bytes) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write field file " + path);
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw std::runtime_error("short write on field file " + path);
}

} // namespace detail

inline std::string serialize_field(const SpectralField& f, const std::string& provenance) {
    nlohmann::ordered_json h;
    h["format"] = "bolab-field/1";
    h["kind"] = "data";
    h["representation"] = "frequency";
    h["period"] = f.grid.period;
    h["nx"] = f.grid.n;
    h["count"] = f.grid.n;
    h["provenance"] = provenance;
    std::string out = h.dump();
    out.push_back('\n');
    detail::append_payload(out, f.coef);
    return out;
}

inline std::string serialize_field(const SpaceTimeField& f, const std::string& provenance) {
    nlohmann::ordered_json h;
    h["format"] = "bolab-field/1";
    h["kind"] = "spacetime";
    h["representation"] = f.rep == Rep::physical ? "physical" : "frequency";
    h["period"] = f.xgrid.period;
    h["nx"] = f.xgrid.n;
    h["half_width"] = f.tgrid.half_width;
    h["nt"] = f.tgrid.n_t;
    h["count"] = f.xgrid.n * static_cast<long long>(f.tgrid.n_t);
    h["provenance"] = provenance;
    std::string out = h.dump();
    out.push_back('\n');
    detail::append_payload(out, f.data);
    return out;
}

inline void write_field(const std::string& path, const SpectralField& f,
                        const std::string& provenance) {
    detail::spit(path, serialize_field(f, provenance));
}

inline void write_field(const std::string& path, const SpaceTimeField& f,
                        const std::string& provenance) {
    detail::spit(path, serialize_field(f, provenance));
}

struct LoadedField {
    std::string kind; // "data" or "spacetime"
    std::string provenance;
    SpectralField data;   // set when kind == "data"
    SpaceTimeField field; // set when kind == "spacetime"
};

inline LoadedField read_field(const std::string& path) {
    std::string bytes = detail::slurp(path);
    size_t nl = bytes.find('\n');
    if (nl == std::string::npos)
        throw std::runtime_error("field file " + path + ": missing header line");
    nlohmann::json h;
    try {
        h = nlohmann::json::parse(bytes.substr(0, nl));
    } catch (const nlohmann::json::exception& e) {
        throw std::runtime_error("field file " + path + ": bad header: " + e.what());
    }
    if (h.value("format", "") != "bolab-field/1")
        throw std::runtime_error("field file " + path + ": unknown format '" +
                                 h.value("format", "") + "'");

    LoadedField out;
    out.kind = h.value("kind", "");
    out.provenance = h.value("provenance", "");
    size_t count = h.value("count", size_t{0});
    std::vector<cplx> payload = detail::parse_payload(bytes, nl + 1, count, path);

    if (out.kind == "data") {
        FrequencyGrid g(h.at("period").get<double>(), h.at("nx").get<int>());
        out.data = SpectralField(g, std::move(payload));
    } else if (out.kind == "spacetime") {
        FrequencyGrid xg(h.at("period").get<double>(), h.at("nx").get<int>());
        TimeGrid tg(h.at("half_width").get<double>(), h.at("nt").get<int>());
        std::string rep = h.value("representation", "");
        if (rep != "physical" && rep != "frequency")
            throw std::runtime_error("field file " + path + ": bad representation '" + rep + "'");
        out.field = SpaceTimeField(xg, tg, rep == "physical" ? Rep::physical : Rep::frequency);
        if (payload.size() != out.field.data.size())
            throw std::runtime_error("field file " + path + ": grid/count mismatch");
        out.field.data = std::move(payload);
    } else {
        throw std::runtime_error("field file " + path + ": unknown kind '" + out.kind + "'");
    }
    return out;
}

} // namespace bolab
